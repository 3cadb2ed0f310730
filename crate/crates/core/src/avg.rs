//! Average-ε-optimal identification: uniform sampling sized by the number of
//! bases (`naive_two`), one pruning pass (`elimination`), and the round
//! structure that chains them (`avg_pac_recur_elim`).

use std::cmp::Ordering;

use log::debug;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::env::{ceil_count, SamplingSession};
use crate::error::{Error, Result};
use crate::matroid::{
    at_least, blocks_unchecked, check_weights, greedy_unchecked, total_weight, ElementId, Matroid, MatroidView,
};
use crate::pac::{check_params, pac_sample_prune, ConstantsProfile, Estimates, PacResult};
use crate::trace::TraceRecord;

/// Formula constants of the average-ε algorithms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AvgConfig;

impl AvgConfig {
    /// Split of `ε` in `elimination`: `(λ, α, β)`, each `ε/5`.
    pub fn split(eps: f64) -> (f64, f64, f64) {
        (eps / 5.0, eps / 5.0, eps / 5.0)
    }

    /// Sampling probability of `elimination`, `100·(k + ln δ⁻¹ + ln 6)/N`,
    /// clamped to `(0, 1]`.
    pub fn elimination_p(rank: usize, delta: f64, n: usize) -> f64 {
        let raw = Self::elimination_floor(rank, delta) / n as f64;
        if raw > 1.0 {
            debug!("elimination sampling probability {raw} clamped to 1");
        }
        raw.min(1.0)
    }

    /// Smallest admissible `N` for `elimination`: `100·(k + ln δ⁻¹ + ln 6)`.
    pub fn elimination_floor(rank: usize, delta: f64) -> f64 {
        100.0 * (rank as f64 + (1.0 / delta).ln() + 6f64.ln())
    }

    /// Per-arm pulls outside the sub-solution:
    /// `ceil(β⁻²·max(ln(6/δ)/k, (ln 200)/2))`.
    pub fn elimination_q0(beta: f64, delta: f64, rank: usize) -> u64 {
        let spread = ((6.0 / delta).ln() / rank as f64).max(200f64.ln() / 2.0);
        ceil_count(spread / (beta * beta))
    }

    /// Per-arm pulls of `naive_two`: `ceil(2ε⁻²·(ln 2 + ln C(n,k) + ln δ⁻¹)/k)`.
    pub fn naive_two_q0(n: usize, rank: usize, eps: f64, delta: f64) -> u64 {
        let log_bases = ln_binomial(n as u64, rank as u64);
        let numer = 2.0 / (eps * eps) * (2f64.ln() + log_bases + (1.0 / delta).ln());
        ceil_count(numer / rank as f64)
    }

    /// Accuracy and confidence of round `r`: `(ε/2^{r+1}, δ/2^{r+1})`.
    pub fn round_params(r: u32, eps: f64, delta: f64) -> (f64, f64) {
        let scale = 0.5f64.powi(r as i32 + 1);
        (eps * scale, delta * scale)
    }

    /// The round loop stops once `|S_r| ≤ (ln δ_r⁻¹ + k + ln 6)(100 + ln k + ln δ_r⁻¹)`.
    pub fn break_threshold(rank: usize, delta_r: f64) -> f64 {
        let ld = (1.0 / delta_r).ln();
        let k = rank as f64;
        (ld + k + 6f64.ln()) * (100.0 + k.ln() + ld)
    }

    /// Whether the top-level call goes straight to `naive_two`.
    pub fn is_base_case(n: usize, rank: usize, delta: f64) -> bool {
        let ratio = n as f64 / rank as f64;
        ratio <= 10.0 || (1.0 / delta).ln() > rank as f64 * ratio.ln()
    }
}

/// Average value of a set: `OPT(M|A)/rank(M)` when `A` spans, else `−∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AvgValue {
    NegInfinity,
    Finite(f64),
}

impl AvgValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            AvgValue::Finite(v) => Some(v),
            AvgValue::NegInfinity => None,
        }
    }
}

impl PartialOrd for AvgValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (AvgValue::NegInfinity, AvgValue::NegInfinity) => Some(Ordering::Equal),
            (AvgValue::NegInfinity, AvgValue::Finite(_)) => Some(Ordering::Less),
            (AvgValue::Finite(_), AvgValue::NegInfinity) => Some(Ordering::Greater),
            (AvgValue::Finite(a), AvgValue::Finite(b)) => a.partial_cmp(b),
        }
    }
}

pub fn val<M: Matroid + ?Sized>(m: &M, set: &[ElementId], w: &[f64]) -> Result<AvgValue> {
    m.check_subset(set)?;
    check_weights(m, w)?;
    let rank = m.full_rank();
    if m.rank_unchecked(set) < rank {
        return Ok(AvgValue::NegInfinity);
    }
    if rank == 0 {
        return Ok(AvgValue::Finite(0.0));
    }
    let restricted = Restricted { parent: m, ground: sorted(set) };
    let best = greedy_unchecked(&restricted, w);
    Ok(AvgValue::Finite(total_weight(&best, w) / rank as f64))
}

fn sorted(set: &[ElementId]) -> Vec<ElementId> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v
}

/// Borrowing restriction, for oracles that are not held in a view.
#[derive(Debug)]
struct Restricted<'a, M: ?Sized> {
    parent: &'a M,
    ground: Vec<ElementId>,
}

impl<M: Matroid + ?Sized> Matroid for Restricted<'_, M> {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        self.parent.rank_unchecked(set)
    }
}

/// Pulls every arm `naive_two_q0` times and returns the empirical optimum.
pub fn naive_two(session: &mut SamplingSession, m: &MatroidView, eps: f64, delta: f64) -> Result<PacResult> {
    check_params(eps, delta)?;
    let start = session.total_samples();
    let rank = m.full_rank();
    let arms = m.ground();
    if rank == 0 || arms.is_empty() {
        return Ok(PacResult::default());
    }
    let q0 = AvgConfig::naive_two_q0(arms.len(), rank, eps, delta);
    let mut table = Estimates::new(session.num_arms());
    for &e in arms {
        table.record(&[e], &[session.pull_batch(e, q0)?]);
    }
    Ok(PacResult {
        basis: greedy_unchecked(m, table.as_slice()),
        samples: session.total_samples() - start,
        transcript: Vec::new(),
    })
}

/// One pruning pass. Requires `|S| ≥ 100·(k + ln δ⁻¹ + ln 6)`. Returns the
/// surviving arms `S'`, sorted; the sub-solution found on the random subset
/// always survives.
pub fn elimination(
    session: &mut SamplingSession,
    m: &MatroidView,
    eps: f64,
    delta: f64,
    constants: &ConstantsProfile,
) -> Result<Vec<ElementId>> {
    Ok(eliminate(session, m, eps, delta, constants)?.0)
}

fn eliminate(
    session: &mut SamplingSession,
    m: &MatroidView,
    eps: f64,
    delta: f64,
    constants: &ConstantsProfile,
) -> Result<(Vec<ElementId>, Vec<TraceRecord>)> {
    check_params(eps, delta)?;
    let arms = m.ground().to_vec();
    let rank = m.full_rank();
    let floor = AvgConfig::elimination_floor(rank, delta);
    if rank == 0 || (arms.len() as f64) < floor {
        return Err(Error::Precondition(format!(
            "elimination needs at least {floor:.1} arms and positive rank, got {} arms of rank {rank}",
            arms.len()
        )));
    }
    let (lambda, alpha, beta) = AvgConfig::split(eps);
    let p = AvgConfig::elimination_p(rank, delta, arms.len());

    let sampled = session.bernoulli_subset(&arms, p);
    let pac = pac_sample_prune(session, &m.restrict(&sampled)?, lambda, delta / 6.0, constants)?;
    let solution = pac.basis;

    let mut table = Estimates::new(session.num_arms());
    let means = session.uniform_sample(&solution, alpha, delta / (6.0 * rank as f64))?;
    table.record(&solution, &means);
    let q0 = AvgConfig::elimination_q0(beta, delta, rank);
    let rest: Vec<ElementId> = arms.iter().copied().filter(|e| !solution.contains(e)).collect();
    for &e in &rest {
        table.record(&[e], &[session.pull_batch(e, q0)?]);
    }

    let mut kept = solution.clone();
    for &e in &rest {
        let heavier = at_least(&solution, table.as_slice(), table.get(e) - lambda - alpha - beta);
        if !blocks_unchecked(m, &heavier, e) {
            kept.push(e);
        }
    }
    kept.sort_unstable();
    Ok((kept, pac.transcript))
}

/// Average-ε-optimal basis with probability at least 1 − δ.
pub fn avg_pac_recur_elim(
    session: &mut SamplingSession,
    m: &MatroidView,
    eps: f64,
    delta: f64,
    constants: &ConstantsProfile,
) -> Result<PacResult> {
    check_params(eps, delta)?;
    constants.validate()?;
    let rank = m.full_rank();
    if rank == 0 || AvgConfig::is_base_case(m.len(), rank, delta) {
        return naive_two(session, m, eps, delta);
    }
    let start = session.total_samples();
    let mut transcript = Vec::new();
    let mut current = m.clone();
    let mut r = 1u32;
    loop {
        let (eps_r, delta_r) = AvgConfig::round_params(r, eps, delta);
        if current.len() as f64 <= AvgConfig::break_threshold(rank, delta_r) {
            break;
        }
        let before = session.total_samples();
        let (kept, inner) = eliminate(session, &current, eps_r, delta_r, constants)?;
        transcript.extend(inner);
        transcript.push(TraceRecord::AvgRound {
            r,
            arms: current.len(),
            eps: eps_r,
            delta: delta_r,
            kept: kept.len(),
            samples: session.total_samples() - before,
        });
        current = current.restrict(&kept)?;
        r += 1;
    }
    let last = naive_two(session, &current, eps / 2.0, delta / 2.0)?;
    Ok(PacResult { basis: last.basis, samples: session.total_samples() - start, transcript })
}
