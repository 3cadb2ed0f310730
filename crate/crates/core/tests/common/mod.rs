#![allow(dead_code)]

use matroid_explore::harness::{Generator, Instance};
use matroid_explore::{ElementId, Matroid};

pub const FAMILIES: [&str; 5] = ["uniform", "partition", "laminar", "graphic", "transversal"];

/// Random loop-free instance of the given family on `n ≥ 3` elements with
/// distinct Bernoulli means.
pub fn random_instance(family: usize, n: usize, seed: u64) -> Instance {
    let s = seed as usize;
    let generator = match family {
        0 => Generator::RandomUniform { n, k: 1 + s % (n - 1), gap_floor: 0.0 },
        1 => Generator::RandomPartition { n, groups: 1 + s % 4 },
        2 => Generator::RandomLaminar { n },
        3 => Generator::RandomGraphic { vertices: 2 + s % 5, edges: n },
        4 => Generator::RandomTransversal { workers: n, tasks: 1 + s % 5 },
        _ => unreachable!("five families"),
    };
    generator.generate(seed).unwrap().build().unwrap()
}

/// Every subset of `ground`, indexed by bit mask.
pub fn subsets(ground: &[ElementId]) -> Vec<Vec<ElementId>> {
    (0..1u32 << ground.len()).map(|mask| from_mask(ground, mask)).collect()
}

pub fn from_mask(ground: &[ElementId], mask: u32) -> Vec<ElementId> {
    ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect()
}

pub fn minus(set: &[ElementId], remove: &[ElementId]) -> Vec<ElementId> {
    set.iter().copied().filter(|e| !remove.contains(e)).collect()
}

pub fn union(a: &[ElementId], b: &[ElementId]) -> Vec<ElementId> {
    let mut out = a.to_vec();
    out.extend(b.iter().copied().filter(|e| !a.contains(e)));
    out.sort_unstable();
    out
}

pub fn independent<M: Matroid + ?Sized>(m: &M, set: &[ElementId]) -> bool {
    m.is_independent(set).unwrap()
}
