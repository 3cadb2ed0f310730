use super::{ElementId, Matroid};
use crate::error::{Error, Result};

fn range_ground(n: usize) -> Vec<ElementId> {
    (0..n).map(ElementId::from).collect()
}

/// Every set of at most `capacity` elements is independent.
#[derive(Debug, Clone)]
pub struct UniformMatroid {
    ground: Vec<ElementId>,
    capacity: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, capacity: usize) -> Self {
        Self { ground: range_ground(n), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}

impl Matroid for UniformMatroid {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        set.len().min(self.capacity)
    }
}

/// Disjoint groups, each with its own capacity.
#[derive(Debug, Clone)]
pub struct PartitionMatroid {
    ground: Vec<ElementId>,
    group_of: Vec<usize>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    /// `group_of[e]` names the group of element `e`.
    pub fn new(group_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if let Some(g) = group_of.iter().find(|g| **g >= capacities.len()) {
            return Err(Error::validation(format!("group {g} has no capacity ({} groups declared)", capacities.len())));
        }
        Ok(Self { ground: range_ground(group_of.len()), group_of, capacities })
    }

    pub fn groups(&self) -> usize {
        self.capacities.len()
    }
}

impl Matroid for PartitionMatroid {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        let mut counts = vec![0usize; self.capacities.len()];
        for e in set {
            counts[self.group_of[e.index()]] += 1;
        }
        counts.iter().zip(&self.capacities).map(|(c, cap)| (*c).min(*cap)).sum()
    }
}

/// A family of pairwise nested-or-disjoint sets with capacities. A set is
/// independent when it meets every member of the family in at most its
/// capacity. Elements covered by no member are free.
#[derive(Debug, Clone)]
pub struct LaminarMatroid {
    ground: Vec<ElementId>,
    capacities: Vec<usize>,
    /// Members ordered so that every member comes before the members that
    /// contain it; `parent[i]` is the smallest later member containing `i`.
    parent: Vec<Option<usize>>,
    /// Innermost member containing each element.
    innermost: Vec<Option<usize>>,
}

impl LaminarMatroid {
    pub fn new(n: usize, family: Vec<(Vec<ElementId>, usize)>) -> Result<Self> {
        let mut members: Vec<(Vec<ElementId>, usize)> = Vec::with_capacity(family.len());
        for (mut set, cap) in family {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation("laminar member lists an element twice"));
            }
            if let Some(e) = set.iter().find(|e| e.index() >= n) {
                return Err(Error::validation(format!("laminar member uses element {e} >= n={n}")));
            }
            members.push((set, cap));
        }
        // Stable sort keeps equal sets in declaration order.
        members.sort_by_key(|(s, _)| s.len());

        let m = members.len();
        let mut parent = vec![None; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let (a, b) = (&members[i].0, &members[j].0);
                let inter = a.iter().filter(|e| b.binary_search(e).is_ok()).count();
                if inter == 0 {
                    continue;
                }
                if inter != a.len() {
                    return Err(Error::validation("laminar family is not nested"));
                }
                if parent[i].is_none() {
                    parent[i] = Some(j);
                }
            }
        }

        let mut innermost = vec![None; n];
        for (i, (set, _)) in members.iter().enumerate() {
            for e in set {
                if innermost[e.index()].is_none() {
                    innermost[e.index()] = Some(i);
                }
            }
        }

        Ok(Self { ground: range_ground(n), capacities: members.iter().map(|(_, c)| *c).collect(), parent, innermost })
    }
}

impl Matroid for LaminarMatroid {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        let mut load = vec![0usize; self.capacities.len()];
        let mut free = 0usize;
        for e in set {
            match self.innermost[e.index()] {
                Some(i) => load[i] += 1,
                None => free += 1,
            }
        }
        // Children precede parents, so one forward pass settles every member.
        for i in 0..load.len() {
            let r = load[i].min(self.capacities[i]);
            match self.parent[i] {
                Some(p) => load[p] += r,
                None => free += r,
            }
        }
        free
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::ids;

    #[test]
    fn uniform_rank_is_capped_cardinality() {
        let m = UniformMatroid::new(5, 3);
        assert_eq!(m.rank_unchecked(&ids([0, 1])), 2);
        assert_eq!(m.rank_unchecked(&ids(0..5)), 3);
        assert_eq!(m.rank_unchecked(&[]), 0);
    }

    #[test]
    fn empty_ground_set_has_rank_zero() {
        let m = UniformMatroid::new(0, 3);
        assert_eq!(m.full_rank(), 0);
        assert!(m.is_basis(&[]).unwrap());
    }

    #[test]
    fn partition_counts_each_group() {
        let m = PartitionMatroid::new(vec![0, 0, 0, 1, 1], vec![2, 1]).unwrap();
        assert_eq!(m.rank_unchecked(&ids(0..5)), 3);
        assert_eq!(m.rank_unchecked(&ids([3, 4])), 1);
        assert!(PartitionMatroid::new(vec![0, 2], vec![1, 1]).is_err());
    }

    #[test]
    fn laminar_nests_capacities() {
        // {0,1} cap 1 inside {0,1,2,3} cap 2, element 4 free
        let m = LaminarMatroid::new(5, vec![(ids([0, 1, 2, 3]), 2), (ids([0, 1]), 1)]).unwrap();
        assert_eq!(m.rank_unchecked(&ids([0, 1])), 1);
        assert_eq!(m.rank_unchecked(&ids([0, 1, 2])), 2);
        assert_eq!(m.rank_unchecked(&ids(0..5)), 3);
        assert_eq!(m.rank_unchecked(&ids([4])), 1);
    }

    #[test]
    fn laminar_rejects_crossing_sets() {
        let err = LaminarMatroid::new(4, vec![(ids([0, 1]), 1), (ids([1, 2]), 1)]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(LaminarMatroid::new(2, vec![(ids([0, 5]), 1)]).is_err());
    }

    #[test]
    fn laminar_equal_members_take_the_tighter_capacity() {
        let m = LaminarMatroid::new(3, vec![(ids(0..3), 2), (ids(0..3), 1)]).unwrap();
        assert_eq!(m.full_rank(), 1);
    }
}
