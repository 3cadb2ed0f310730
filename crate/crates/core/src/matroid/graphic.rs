use super::{ElementId, Matroid};
use crate::error::{Error, Result};

/// Cycle matroid of a multigraph: element `i` is edge `edges[i]`, and a set
/// is independent when its edges form a forest. Self-loop edges are loops of
/// the matroid.
#[derive(Debug, Clone)]
pub struct GraphicMatroid {
    ground: Vec<ElementId>,
    vertices: usize,
    edges: Vec<(u32, u32)>,
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((u, v)) = edges.iter().find(|(u, v)| *u >= vertices || *v >= vertices) {
            return Err(Error::validation(format!("edge ({u}, {v}) references a vertex outside 0..{vertices}")));
        }
        Ok(Self {
            ground: (0..edges.len()).map(ElementId::from).collect(),
            vertices,
            edges: edges.into_iter().map(|(u, v)| (u as u32, v as u32)).collect(),
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edge(&self, e: ElementId) -> (usize, usize) {
        let (u, v) = self.edges[e.index()];
        (u as usize, v as usize)
    }
}

impl Matroid for GraphicMatroid {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        let mut forest = UnionFind::new(self.vertices);
        set.iter()
            .filter(|e| {
                let (u, v) = self.edges[e.index()];
                forest.union(u as usize, v as usize)
            })
            .count()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::ids;

    #[test]
    fn forest_rank() {
        // square with a diagonal and a parallel edge
        let g = GraphicMatroid::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 1)]).unwrap();
        assert_eq!(g.full_rank(), 3);
        assert_eq!(g.rank_unchecked(&ids([0, 5])), 1);
        assert_eq!(g.rank_unchecked(&ids([0, 1, 4])), 2);
        assert_eq!(g.rank_unchecked(&ids([0, 1, 2])), 3);
    }

    #[test]
    fn self_loop_has_rank_zero() {
        let g = GraphicMatroid::new(2, vec![(1, 1), (0, 1)]).unwrap();
        assert_eq!(g.rank_unchecked(&ids([0])), 0);
        assert_eq!(g.full_rank(), 1);
    }

    #[test]
    fn rejects_unknown_vertex() {
        assert!(GraphicMatroid::new(2, vec![(0, 2)]).is_err());
    }
}
