//! ε-optimal basis identification: uniform sampling (`naive_one`) and the
//! sampling-and-pruning recursion (`pac_sample_prune`).

use serde::{Deserialize, Serialize};

use crate::env::SamplingSession;
use crate::error::{Error, Result};
use crate::matroid::{at_least, blocks_unchecked, greedy_unchecked, ElementId, Matroid, MatroidView};
use crate::trace::TraceRecord;

/// Tunable constants shared by the identification algorithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsProfile {
    pub name: String,
    /// Probability of keeping an element in the random subset `F`.
    pub p: f64,
    /// The recursion falls back to uniform sampling when
    /// `|S| ≤ multiplier · p⁻² · max(log_weight · ln(8/δ), k)`.
    pub base_case_multiplier: f64,
    pub base_case_log_weight: f64,
    /// Recursion depth at which `pac_sample_prune` aborts.
    pub max_depth: usize,
    /// Per-kind round limit of `exact_exp_gap`.
    pub max_rounds: u32,
}

impl ConstantsProfile {
    /// The constants the guarantees are proved for. Recursion only starts
    /// above roughly `2·10⁴·max(4 ln(8/δ), k)` arms.
    pub fn paper() -> Self {
        Self {
            name: "paper".into(),
            p: 0.01,
            base_case_multiplier: 2.0,
            base_case_log_weight: 4.0,
            max_depth: 64,
            max_rounds: 60,
        }
    }

    /// Smaller constants that exercise the recursive branch on instances with
    /// tens of arms. Guarantees under this profile are only empirical.
    pub fn desk() -> Self {
        Self {
            name: "desk".into(),
            p: 0.3,
            base_case_multiplier: 1.0,
            base_case_log_weight: 1.0,
            max_depth: 64,
            max_rounds: 60,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "paper" => Ok(Self::paper()),
            "desk" => Ok(Self::desk()),
            other => Err(Error::validation(format!("unknown constants profile `{other}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.base_case_multiplier > 0.0 && self.base_case_log_weight > 0.0) {
            return Err(Error::domain("base-case multipliers must be positive"));
        }
        if self.max_depth == 0 || self.max_rounds == 0 {
            return Err(Error::domain("recursion and round guards must be positive"));
        }
        Ok(())
    }

    pub fn base_case_threshold(&self, delta: f64, rank: usize) -> f64 {
        let log_term = self.base_case_log_weight * (8.0 / delta).ln();
        self.base_case_multiplier / (self.p * self.p) * log_term.max(rank as f64)
    }
}

/// Output of an identification algorithm.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PacResult {
    /// Sorted basis of the input matroid.
    pub basis: Vec<ElementId>,
    /// Pulls made by this call.
    pub samples: u64,
    pub transcript: Vec<TraceRecord>,
}

pub(crate) fn check_params(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be > 0, got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Dense table of empirical means indexed by element id; NaN where unknown.
pub(crate) struct Estimates(Vec<f64>);

impl Estimates {
    pub(crate) fn new(n: usize) -> Self {
        Estimates(vec![f64::NAN; n])
    }

    pub(crate) fn record(&mut self, arms: &[ElementId], means: &[f64]) {
        for (e, m) in arms.iter().zip(means) {
            self.0[e.index()] = *m;
        }
    }

    pub(crate) fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn get(&self, e: ElementId) -> f64 {
        self.0[e.index()]
    }
}

/// Samples every arm `ceil((ε/2)⁻²·ln(2|S|/δ)/2)` times and returns the
/// optimal basis under the empirical means.
pub fn naive_one(session: &mut SamplingSession, m: &MatroidView, eps: f64, delta: f64) -> Result<PacResult> {
    check_params(eps, delta)?;
    let start = session.total_samples();
    let basis = naive_basis(session, m, eps, delta)?;
    Ok(PacResult { basis, samples: session.total_samples() - start, transcript: Vec::new() })
}

fn naive_basis(session: &mut SamplingSession, m: &MatroidView, eps: f64, delta: f64) -> Result<Vec<ElementId>> {
    let arms = m.ground();
    if arms.is_empty() || m.full_rank() == 0 {
        return Ok(Vec::new());
    }
    let means = session.uniform_sample(arms, eps / 2.0, delta / arms.len() as f64)?;
    let mut table = Estimates::new(session.num_arms());
    table.record(arms, &means);
    Ok(greedy_unchecked(m, table.as_slice()))
}

/// Sampling-and-pruning: solve a random `p`-fraction of the arms
/// recursively, use that solution to discard arms it blocks under the
/// empirical means, then recurse on the survivors.
pub fn pac_sample_prune(
    session: &mut SamplingSession,
    m: &MatroidView,
    eps: f64,
    delta: f64,
    constants: &ConstantsProfile,
) -> Result<PacResult> {
    check_params(eps, delta)?;
    constants.validate()?;
    let start = session.total_samples();
    let mut transcript = Vec::new();
    let basis = prune(session, m, eps, delta, constants, 0, &mut transcript)?;
    Ok(PacResult { basis, samples: session.total_samples() - start, transcript })
}

fn prune(
    session: &mut SamplingSession,
    m: &MatroidView,
    eps: f64,
    delta: f64,
    c: &ConstantsProfile,
    depth: usize,
    transcript: &mut Vec<TraceRecord>,
) -> Result<Vec<ElementId>> {
    if depth > c.max_depth {
        return Err(Error::Budget(format!("recursion depth exceeded {}", c.max_depth)));
    }
    let arms = m.ground().to_vec();
    let rank = m.full_rank();
    if rank == 0 || arms.len() as f64 <= c.base_case_threshold(delta, rank) {
        transcript.push(TraceRecord::PacLevel {
            depth,
            arms: arms.len(),
            rank,
            base_case: true,
            sampled: 0,
            kept: arms.len(),
        });
        return naive_basis(session, m, eps, delta);
    }

    let sampled = session.bernoulli_subset(&arms, c.p);
    let alpha = eps / 3.0;
    let lambda = eps / 12.0;
    let sub = prune(session, &m.restrict(&sampled)?, alpha, delta / 8.0, c, depth + 1, transcript)?;

    let means = session.uniform_sample(&arms, lambda, delta * c.p / (8.0 * rank as f64))?;
    let mut table = Estimates::new(session.num_arms());
    table.record(&arms, &means);

    let mut kept = sub.clone();
    for &e in &arms {
        if sub.contains(&e) {
            continue;
        }
        let heavier = at_least(&sub, table.as_slice(), table.get(e) - alpha - 2.0 * lambda);
        if !blocks_unchecked(m, &heavier, e) {
            kept.push(e);
        }
    }
    kept.sort_unstable();

    let survivors = m.restrict(&kept)?;
    if survivors.full_rank() != rank {
        return Err(Error::internal(format!(
            "pruning lost rank: {} of {rank} at depth {depth}",
            survivors.full_rank()
        )));
    }
    transcript.push(TraceRecord::PacLevel {
        depth,
        arms: arms.len(),
        rank,
        base_case: false,
        sampled: sampled.len(),
        kept: kept.len(),
    });
    prune(session, &survivors, alpha, delta / 4.0, c, depth + 1, transcript)
}
