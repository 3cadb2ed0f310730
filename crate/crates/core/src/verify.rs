//! Ground-truth oracles over the true means. Algorithms never call these;
//! tests and the trial harness do.
//!
//! The enumeration-based oracles refuse ground sets above
//! [`ENUMERATION_LIMIT`] elements. The `*_with_opt` variants take the
//! optimum as an argument so the harness can supply a greedy one at any size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{
    above, blocks_unchecked, check_weights, greedy_unchecked, is_eps_optimal, sort_by_weight_desc, total_weight,
    ElementId, Matroid, MatroidView, WEIGHT_TOLERANCE,
};

pub const ENUMERATION_LIMIT: usize = 20;
pub const APPROX_SUBSET_LIMIT: usize = 14;

fn guard<M: Matroid + ?Sized>(m: &M, limit: usize) -> Result<()> {
    let size = m.ground().len();
    if size > limit {
        Err(Error::Capacity { size, limit })
    } else {
        Ok(())
    }
}

/// Every independent set, each sorted, in depth-first order starting from ∅.
pub fn enumerate_independent_sets<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Vec<ElementId>>> {
    guard(m, ENUMERATION_LIMIT)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(m, m.ground(), &mut current, &mut |set| out.push(set.to_vec()));
    Ok(out)
}

fn extend<M: Matroid + ?Sized>(
    m: &M,
    candidates: &[ElementId],
    current: &mut Vec<ElementId>,
    visit: &mut dyn FnMut(&[ElementId]),
) {
    visit(current);
    for (i, &e) in candidates.iter().enumerate() {
        current.push(e);
        if m.rank_unchecked(current) == current.len() {
            extend(m, &candidates[i + 1..], current, visit);
        }
        current.pop();
    }
}

pub fn enumerate_bases<M: Matroid + ?Sized>(m: &M) -> Result<Vec<Vec<ElementId>>> {
    let k = m.full_rank();
    Ok(enumerate_independent_sets(m)?.into_iter().filter(|s| s.len() == k).collect())
}

/// Maximum-weight basis by exhaustive enumeration. Among equal weights the
/// first basis found wins.
pub fn brute_force_opt<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Result<Vec<ElementId>> {
    check_weights(m, w)?;
    guard(m, ENUMERATION_LIMIT)?;
    let k = m.full_rank();
    let mut best: Option<(f64, Vec<ElementId>)> = None;
    let mut current = Vec::new();
    extend(m, m.ground(), &mut current, &mut |set| {
        if set.len() == k {
            let value = total_weight(set, w);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, set.to_vec()));
            }
        }
    });
    Ok(best.map(|(_, s)| s).unwrap_or_default())
}

fn brute_force_value<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Result<f64> {
    Ok(total_weight(&brute_force_opt(m, w)?, w))
}

fn require_distinct<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Result<()> {
    let mut values: Vec<f64> = m.ground().iter().map(|e| w[e.index()]).collect();
    values.sort_by(f64::total_cmp);
    if values.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::domain("weights must be pairwise distinct"));
    }
    Ok(())
}

fn gap_preconditions(m: &MatroidView, e: ElementId, w: &[f64]) -> Result<()> {
    check_weights(m, w)?;
    if !m.contains(e) {
        return Err(Error::OutsideGround(e));
    }
    require_distinct(m, w)?;
    if m.rank_unchecked(&[e]) == 0 {
        return Err(Error::domain(format!("element {e} is a loop and has no gap")));
    }
    Ok(())
}

fn is_isolated<M: Matroid + ?Sized>(m: &M, e: ElementId) -> bool {
    let rest: Vec<ElementId> = m.ground().iter().copied().filter(|&a| a != e).collect();
    m.rank_unchecked(&rest) < m.full_rank()
}

/// Gap from the value definition: the loss from excluding `e` when it is
/// optimal, or from forcing `e` in when it is not. `+∞` for isolated
/// elements; loops are rejected.
pub fn gap(m: &MatroidView, e: ElementId, w: &[f64]) -> Result<f64> {
    gap_preconditions(m, e, w)?;
    guard(m, ENUMERATION_LIMIT)?;
    if is_isolated(m, e) {
        return Ok(f64::INFINITY);
    }
    let opt = brute_force_opt(m, w)?;
    let value = total_weight(&opt, w);
    if opt.contains(&e) {
        let rest: Vec<ElementId> = m.ground().iter().copied().filter(|&a| a != e).collect();
        Ok(value - brute_force_value(&m.restrict(&rest)?, w)?)
    } else {
        Ok(value - brute_force_value(&m.contract(&[e])?, w)? - w[e.index()])
    }
}

/// Gap from the blocking characterization, found by sweeping thresholds over
/// the other elements in weight order.
pub fn gap_alt(m: &MatroidView, e: ElementId, w: &[f64]) -> Result<f64> {
    gap_preconditions(m, e, w)?;
    let opt = brute_force_opt(m, w)?;
    Ok(sweep_gap(m, e, w, opt.contains(&e)))
}

fn sweep_gap<M: Matroid + ?Sized>(m: &M, e: ElementId, w: &[f64], in_opt: bool) -> f64 {
    let we = w[e.index()];
    let mut order: Vec<ElementId> = m.ground().iter().copied().filter(|&a| a != e).collect();
    sort_by_weight_desc(&mut order, w);
    let mut prefix = Vec::with_capacity(order.len());
    if in_opt {
        // Largest w with (S∖e)^{>w(e)−w} not blocking e: the prefix stops
        // blocking-free at the first element whose arrival blocks e.
        for a in order {
            prefix.push(a);
            if blocks_unchecked(m, &prefix, e) {
                return we - w[a.index()];
            }
        }
        f64::INFINITY
    } else {
        // Largest w with S^{≥w(e)+w} blocking e: the shortest blocking prefix.
        for a in order.into_iter().take_while(|a| w[a.index()] > we) {
            prefix.push(a);
            if blocks_unchecked(m, &prefix, e) {
                return w[a.index()] - we;
            }
        }
        // unreachable for a non-loop outside a max-weight basis
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapEntry {
    pub element: ElementId,
    /// `+∞` (serialized as `null`) for isolated elements.
    pub gap: f64,
    pub in_opt: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GapProfile {
    pub entries: Vec<GapEntry>,
    /// Loops carry no gap and are listed separately.
    pub loops: Vec<ElementId>,
}

impl GapProfile {
    /// Smallest finite gap, if any element has one.
    pub fn min_gap(&self) -> Option<f64> {
        self.entries.iter().map(|g| g.gap).filter(|g| g.is_finite()).reduce(f64::min)
    }
}

/// Gap of every element, computed by the threshold sweep against the greedy
/// optimum. Polynomial in the ground-set size.
pub fn gap_profile(m: &MatroidView, w: &[f64]) -> Result<GapProfile> {
    check_weights(m, w)?;
    require_distinct(m, w)?;
    let opt = greedy_unchecked(m, w);
    let mut profile = GapProfile::default();
    for &e in m.ground() {
        if m.rank_unchecked(&[e]) == 0 {
            profile.loops.push(e);
            continue;
        }
        let in_opt = opt.binary_search(&e).is_ok();
        profile.entries.push(GapEntry { element: e, gap: sweep_gap(m, e, w, in_opt), in_opt });
    }
    Ok(profile)
}

pub fn min_gap(m: &MatroidView, w: &[f64]) -> Result<Option<f64>> {
    Ok(gap_profile(m, w)?.min_gap())
}

fn basis_or_err<M: Matroid + ?Sized>(m: &M, set: &[ElementId]) -> Result<()> {
    if m.is_basis(set)? {
        Ok(())
    } else {
        Err(Error::NotABasis)
    }
}

/// The i-th heaviest element of `basis` is within ε of the i-th heaviest
/// element of the optimum.
pub fn is_elementwise_eps_optimal<M: Matroid + ?Sized>(
    m: &M,
    basis: &[ElementId],
    w: &[f64],
    eps: f64,
) -> Result<bool> {
    let opt = brute_force_opt(m, w)?;
    is_elementwise_eps_optimal_with_opt(m, basis, &opt, w, eps)
}

pub fn is_elementwise_eps_optimal_with_opt<M: Matroid + ?Sized>(
    m: &M,
    basis: &[ElementId],
    opt: &[ElementId],
    w: &[f64],
    eps: f64,
) -> Result<bool> {
    check_weights(m, w)?;
    basis_or_err(m, basis)?;
    let sorted = |set: &[ElementId]| {
        let mut v: Vec<f64> = set.iter().map(|e| w[e.index()]).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (mine, best) = (sorted(basis), sorted(opt));
    Ok(mine.iter().zip(&best).all(|(a, b)| *a >= b - eps - WEIGHT_TOLERANCE))
}

/// Mean weight of `basis` is within ε of the optimal mean weight.
pub fn is_avg_eps_optimal<M: Matroid + ?Sized>(m: &M, basis: &[ElementId], w: &[f64], eps: f64) -> Result<bool> {
    let opt = brute_force_opt(m, w)?;
    is_avg_eps_optimal_with_opt(m, basis, &opt, w, eps)
}

pub fn is_avg_eps_optimal_with_opt<M: Matroid + ?Sized>(
    m: &M,
    basis: &[ElementId],
    opt: &[ElementId],
    w: &[f64],
    eps: f64,
) -> Result<bool> {
    check_weights(m, w)?;
    basis_or_err(m, basis)?;
    let k = basis.len();
    if k == 0 {
        return Ok(true);
    }
    let (mine, best) = (total_weight(basis, w) / k as f64, total_weight(opt, w) / k as f64);
    Ok(mine >= best - eps - WEIGHT_TOLERANCE * (1.0 + best.abs()))
}

/// Whether some independent set inside `a` is an ε-optimal basis of `M|b`.
pub fn is_eps_approx_subset(m: &MatroidView, a: &[ElementId], b: &[ElementId], w: &[f64], eps: f64) -> Result<bool> {
    check_weights(m, w)?;
    m.check_subset(b)?;
    if let Some(e) = a.iter().find(|e| !b.contains(e)) {
        return Err(Error::domain(format!("element {e} of A is not in B")));
    }
    let mb = m.restrict(b)?;
    guard(&mb, APPROX_SUBSET_LIMIT)?;
    let ma = m.restrict(a)?;
    let k = mb.full_rank();
    if ma.full_rank() < k {
        return Ok(false);
    }
    for basis in enumerate_bases(&ma)? {
        if is_eps_optimal(&mb, &basis, w, eps)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of elements `e` for which the part of `f` strictly heavier than
/// `e` does not block it.
pub fn count_f_good<M: Matroid + ?Sized>(m: &M, f: &[ElementId], w: &[f64]) -> Result<usize> {
    m.check_subset(f)?;
    check_weights(m, w)?;
    require_distinct(m, w)?;
    Ok(m.ground().iter().filter(|&&e| !blocks_unchecked(m, &above(f, w, w[e.index()]), e)).count())
}

/// Outcome of one trial judged against the true means.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessFlags {
    pub exact: bool,
    pub eps_optimal: bool,
    pub elementwise: bool,
    pub avg_eps: bool,
}

impl SuccessFlags {
    /// Uses the greedy optimum, so it scales to any instance size. An output
    /// that is not a basis fails every flag.
    pub fn evaluate(m: &MatroidView, output: &[ElementId], means: &[f64], eps: f64) -> Result<Self> {
        check_weights(m, means)?;
        let mut sorted = output.to_vec();
        sorted.sort_unstable();
        if m.check_subset(&sorted).is_err() || !m.is_basis(&sorted)? {
            return Ok(Self::default());
        }
        let opt = greedy_unchecked(m, means);
        Ok(Self {
            exact: sorted == opt,
            eps_optimal: is_eps_optimal(m, &sorted, means, eps)?,
            elementwise: is_elementwise_eps_optimal_with_opt(m, &sorted, &opt, means, eps)?,
            avg_eps: is_avg_eps_optimal_with_opt(m, &sorted, &opt, means, eps)?,
        })
    }
}
