use std::fmt;
use std::sync::Arc;

use super::{ElementId, Matroid};
use crate::error::{Error, Result};

/// A minor `(M|B)/A` of a base oracle `M`, with `A` independent in `M`.
///
/// Any sequence of restrictions and contractions by independent sets reduces
/// to this form, so views never nest: restricting or contracting a view
/// yields another view over the same base. The rank of `I` in the view is
/// `rank_M(I ∪ A) − |A|`. Element ids are those of the base oracle.
#[derive(Clone)]
pub struct MatroidView {
    base: Arc<dyn Matroid>,
    contracted: Vec<ElementId>,
    ground: Vec<ElementId>,
}

impl fmt::Debug for MatroidView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatroidView")
            .field("ground", &self.ground)
            .field("contracted", &self.contracted)
            .finish_non_exhaustive()
    }
}

impl MatroidView {
    /// The whole of `base`, nothing contracted.
    pub fn new(base: Arc<dyn Matroid>) -> Self {
        let ground = base.ground().to_vec();
        Self { base, contracted: Vec::new(), ground }
    }

    pub fn base(&self) -> &Arc<dyn Matroid> {
        &self.base
    }

    /// Elements committed by contraction so far, sorted.
    pub fn contracted(&self) -> &[ElementId] {
        &self.contracted
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Restriction to `subset`, which must lie inside the current ground set.
    pub fn restrict(&self, subset: &[ElementId]) -> Result<MatroidView> {
        self.check_subset(subset)?;
        let mut ground = subset.to_vec();
        ground.sort_unstable();
        Ok(Self { base: Arc::clone(&self.base), contracted: self.contracted.clone(), ground })
    }

    /// Contraction by `set`, which must be independent in this view.
    ///
    /// The new ground set keeps the elements that still raise the rank once
    /// `set` is committed; everything `set` spans disappears.
    pub fn contract(&self, set: &[ElementId]) -> Result<MatroidView> {
        if !self.is_independent(set)? {
            return Err(Error::DependentContraction);
        }
        let mut contracted = self.contracted.clone();
        contracted.extend_from_slice(set);
        contracted.sort_unstable();

        let base_rank = contracted.len();
        let mut probe = contracted.clone();
        let ground = self
            .ground
            .iter()
            .copied()
            .filter(|e| !set.contains(e))
            .filter(|e| {
                probe.push(*e);
                let r = self.base.rank_unchecked(&probe);
                probe.pop();
                r > base_rank
            })
            .collect();
        Ok(Self { base: Arc::clone(&self.base), contracted, ground })
    }
}

impl Matroid for MatroidView {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        if self.contracted.is_empty() {
            return self.base.rank_unchecked(set);
        }
        let mut joined = Vec::with_capacity(set.len() + self.contracted.len());
        joined.extend_from_slice(set);
        joined.extend_from_slice(&self.contracted);
        self.base.rank_unchecked(&joined) - self.contracted.len()
    }
}
