//! Matroid oracles and the optimality predicates built on top of them.
//!
//! Every family implements [`Matroid`] through a single required rank
//! query. Independence, blocking and basis tests are derived from rank.
//! Element sets are plain slices of [`ElementId`]; functions that return a
//! set always return it sorted ascending.

mod families;
mod graphic;
mod transversal;
mod view;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{LaminarMatroid, PartitionMatroid, UniformMatroid};
pub use graphic::GraphicMatroid;
pub use transversal::TransversalMatroid;
pub use view::MatroidView;

/// Index of a ground-set element (an arm).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i as u32)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building element sets in tests and generators.
pub fn ids<I: IntoIterator<Item = usize>>(iter: I) -> Vec<ElementId> {
    iter.into_iter().map(ElementId::from).collect()
}

/// Rank oracle over a sorted ground set.
///
/// Implementors only provide [`Matroid::ground`] and
/// [`Matroid::rank_unchecked`]; the checked queries validate membership and
/// duplicates before delegating. Oracles are immutable once built and may be
/// shared between threads.
pub trait Matroid: fmt::Debug + Send + Sync {
    /// Ground set, sorted ascending.
    fn ground(&self) -> &[ElementId];

    /// Rank of `set`, which must be a duplicate-free subset of the ground set.
    fn rank_unchecked(&self, set: &[ElementId]) -> usize;

    fn contains(&self, e: ElementId) -> bool {
        self.ground().binary_search(&e).is_ok()
    }

    fn check_subset(&self, set: &[ElementId]) -> Result<()> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0]));
            }
        }
        match sorted.iter().find(|e| !self.contains(**e)) {
            Some(e) => Err(Error::OutsideGround(*e)),
            None => Ok(()),
        }
    }

    fn rank(&self, set: &[ElementId]) -> Result<usize> {
        self.check_subset(set)?;
        Ok(self.rank_unchecked(set))
    }

    /// Rank of the whole ground set.
    fn full_rank(&self) -> usize {
        self.rank_unchecked(self.ground())
    }

    fn is_independent(&self, set: &[ElementId]) -> Result<bool> {
        Ok(self.rank(set)? == set.len())
    }

    fn is_basis(&self, set: &[ElementId]) -> Result<bool> {
        Ok(self.is_independent(set)? && set.len() == self.full_rank())
    }

    /// `set` blocks `e` when adding `e` does not raise the rank.
    fn blocks(&self, set: &[ElementId], e: ElementId) -> Result<bool> {
        if set.contains(&e) {
            return Err(Error::ElementInSet(e));
        }
        self.check_subset(set)?;
        if !self.contains(e) {
            return Err(Error::OutsideGround(e));
        }
        Ok(blocks_unchecked(self, set, e))
    }
}

impl<M: Matroid + ?Sized> Matroid for Arc<M> {
    fn ground(&self) -> &[ElementId] {
        (**self).ground()
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        (**self).rank_unchecked(set)
    }
}

pub(crate) fn blocks_unchecked<M: Matroid + ?Sized>(m: &M, set: &[ElementId], e: ElementId) -> bool {
    let base = m.rank_unchecked(set);
    let mut with = Vec::with_capacity(set.len() + 1);
    with.extend_from_slice(set);
    with.push(e);
    m.rank_unchecked(&with) == base
}

/// Wraps a concrete oracle into the view type the algorithms operate on.
pub trait IntoView {
    fn into_view(self) -> MatroidView;
}

impl<M: Matroid + 'static> IntoView for M {
    fn into_view(self) -> MatroidView {
        MatroidView::new(Arc::new(self))
    }
}

/// Elements of `set` whose weight is at least `threshold`.
pub fn at_least(set: &[ElementId], w: &[f64], threshold: f64) -> Vec<ElementId> {
    set.iter().copied().filter(|e| w[e.index()] >= threshold).collect()
}

/// Elements of `set` whose weight is strictly above `threshold`.
pub fn above(set: &[ElementId], w: &[f64], threshold: f64) -> Vec<ElementId> {
    set.iter().copied().filter(|e| w[e.index()] > threshold).collect()
}

pub fn total_weight(set: &[ElementId], w: &[f64]) -> f64 {
    set.iter().map(|e| w[e.index()]).sum()
}

pub(crate) fn check_weights<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Result<()> {
    match m.ground().last() {
        Some(e) if e.index() >= w.len() => {
            Err(Error::domain(format!("weight vector has {} entries but element {} is in the ground set", w.len(), e)))
        }
        _ => {
            if m.ground().iter().any(|e| !w[e.index()].is_finite()) {
                return Err(Error::domain("weights must be finite"));
            }
            Ok(())
        }
    }
}

/// Orders elements by weight descending, then id ascending.
pub fn sort_by_weight_desc(set: &mut [ElementId], w: &[f64]) {
    set.sort_by(|a, b| w[b.index()].partial_cmp(&w[a.index()]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(b)));
}

/// Maximum-weight basis by the greedy algorithm. Ties are broken by id.
pub fn greedy_max_basis<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Result<Vec<ElementId>> {
    check_weights(m, w)?;
    Ok(greedy_unchecked(m, w))
}

pub(crate) fn greedy_unchecked<M: Matroid + ?Sized>(m: &M, w: &[f64]) -> Vec<ElementId> {
    let mut order = m.ground().to_vec();
    sort_by_weight_desc(&mut order, w);
    let target = m.full_rank();
    let mut basis = Vec::with_capacity(target);
    for e in order {
        if basis.len() == target {
            break;
        }
        basis.push(e);
        if m.rank_unchecked(&basis) != basis.len() {
            basis.pop();
        }
    }
    basis.sort_unstable();
    basis
}

fn require_basis<M: Matroid + ?Sized>(m: &M, set: &[ElementId]) -> Result<()> {
    if m.is_basis(set)? {
        Ok(())
    } else {
        Err(Error::NotABasis)
    }
}

/// Optimality test through blocking: every outside element is blocked by the
/// part of `basis` at least as heavy as it.
pub fn is_optimal_basis<M: Matroid + ?Sized>(m: &M, basis: &[ElementId], w: &[f64]) -> Result<bool> {
    check_weights(m, w)?;
    require_basis(m, basis)?;
    Ok(outside(m, basis).into_iter().all(|e| blocks_unchecked(m, &at_least(basis, w, w[e.index()]), e)))
}

/// ε-optimality through blocking: every outside element is blocked by the
/// part of `basis` with weight at least `w(e) − ε`.
pub fn is_eps_optimal<M: Matroid + ?Sized>(m: &M, basis: &[ElementId], w: &[f64], eps: f64) -> Result<bool> {
    check_eps(eps)?;
    check_weights(m, w)?;
    require_basis(m, basis)?;
    Ok(outside(m, basis).into_iter().all(|e| blocks_unchecked(m, &at_least(basis, w, w[e.index()] - eps), e)))
}

/// ε-optimality through the modified cost: add ε to every element of
/// `basis` and test whether it reaches the maximum weight.
pub fn is_eps_optimal_modified_cost<M: Matroid + ?Sized>(
    m: &M,
    basis: &[ElementId],
    w: &[f64],
    eps: f64,
) -> Result<bool> {
    check_eps(eps)?;
    check_weights(m, w)?;
    require_basis(m, basis)?;
    let mut lifted = w.to_vec();
    for e in basis {
        lifted[e.index()] += eps;
    }
    let best = total_weight(&greedy_unchecked(m, &lifted), &lifted);
    Ok(total_weight(basis, &lifted) >= best - WEIGHT_TOLERANCE * (1.0 + best.abs()))
}

/// Relative slack used whenever two floating-point weight sums are compared.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("eps must be a finite value >= 0, got {eps}")))
    }
}

fn outside<M: Matroid + ?Sized>(m: &M, set: &[ElementId]) -> Vec<ElementId> {
    m.ground().iter().copied().filter(|e| !set.contains(e)).collect()
}

/// Isolated elements (in every basis) and loops (in no basis).
pub fn isolated_and_loops<M: Matroid + ?Sized>(m: &M) -> (Vec<ElementId>, Vec<ElementId>) {
    let ground = m.ground();
    let full = m.full_rank();
    let mut isolated = Vec::new();
    let mut loops = Vec::new();
    let mut rest = Vec::with_capacity(ground.len());
    for (i, &e) in ground.iter().enumerate() {
        if m.rank_unchecked(&[e]) == 0 {
            loops.push(e);
            continue;
        }
        rest.clear();
        rest.extend_from_slice(&ground[..i]);
        rest.extend_from_slice(&ground[i + 1..]);
        if m.rank_unchecked(&rest) < full {
            isolated.push(e);
        }
    }
    (isolated, loops)
}
