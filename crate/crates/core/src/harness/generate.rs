//! Seeded instance generators and the named builtin instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{InstanceSpec, LaminarSet, MatroidSpec, SCHEMA_VERSION};
use crate::env::ArmDistribution;
use crate::error::{Error, Result};

/// Parameters of one instance generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum Generator {
    /// Uniform matroid where every gap lies in `[ε, 1.05·ε]`.
    UniformGap {
        n: usize,
        k: usize,
        eps: f64,
    },
    /// Uniform matroid of rank `pairs` on `2·pairs` arms: optimal arms at
    /// `0.5 + d_i`, the others at `0.5 − d_i`, with `d_i = (min_gap/2)·2^i`.
    Ladder {
        pairs: usize,
        min_gap: f64,
    },
    /// Uniform matroid with random means; every gap is at least `gap_floor`.
    RandomUniform {
        n: usize,
        k: usize,
        gap_floor: f64,
    },
    /// Random loop-free multigraph.
    RandomGraphic {
        vertices: usize,
        edges: usize,
    },
    RandomPartition {
        n: usize,
        groups: usize,
    },
    RandomLaminar {
        n: usize,
    },
    /// Every worker can take at least one task.
    RandomTransversal {
        workers: usize,
        tasks: usize,
    },
}

impl Generator {
    pub fn generate(&self, seed: u64) -> Result<InstanceSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match *self {
            Generator::UniformGap { n, k, eps } => uniform_gap(n, k, eps, &mut rng),
            Generator::Ladder { pairs, min_gap } => ladder(pairs, min_gap, &mut rng),
            Generator::RandomUniform { n, k, gap_floor } => random_uniform(n, k, gap_floor, &mut rng),
            Generator::RandomGraphic { vertices, edges } => {
                if vertices < 2 && edges > 0 {
                    return Err(Error::validation("a loop-free graph with edges needs two vertices"));
                }
                let list = (0..edges)
                    .map(|_| {
                        let u = rng.random_range(0..vertices);
                        let mut v = rng.random_range(0..vertices - 1);
                        if v >= u {
                            v += 1;
                        }
                        (u, v)
                    })
                    .collect();
                let matroid = MatroidSpec::Graphic { vertices, edges: list };
                Ok(random_arms("random-graphic", matroid, &mut rng))
            }
            Generator::RandomPartition { n, groups } => {
                if groups == 0 && n > 0 {
                    return Err(Error::validation("partition needs at least one group"));
                }
                let group_of: Vec<usize> = (0..n).map(|_| rng.random_range(0..groups)).collect();
                let capacities = (0..groups)
                    .map(|g| {
                        let size = group_of.iter().filter(|&&x| x == g).count();
                        rng.random_range(1..=size.max(1))
                    })
                    .collect();
                let matroid = MatroidSpec::Partition { group_of, capacities };
                Ok(random_arms("random-partition", matroid, &mut rng))
            }
            Generator::RandomLaminar { n } => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let mut sets = Vec::new();
                split(&order, 0, &mut rng, &mut sets);
                let matroid = MatroidSpec::Laminar { n, sets };
                Ok(random_arms("random-laminar", matroid, &mut rng))
            }
            Generator::RandomTransversal { workers, tasks } => {
                if tasks == 0 && workers > 0 {
                    return Err(Error::validation("transversal instance needs at least one task"));
                }
                let adjacency = (0..workers)
                    .map(|_| {
                        let mut adj: Vec<usize> = (0..tasks).filter(|_| rng.random_bool(0.4)).collect();
                        if adj.is_empty() {
                            adj.push(rng.random_range(0..tasks));
                        }
                        adj
                    })
                    .collect();
                let matroid = MatroidSpec::Transversal { tasks, adjacency };
                Ok(random_arms("random-transversal", matroid, &mut rng))
            }
        }
    }
}

/// Carves `elements` into disjoint runs, each a member with a random
/// capacity, and recurses into the longer runs.
fn split(elements: &[usize], depth: usize, rng: &mut ChaCha8Rng, out: &mut Vec<LaminarSet>) {
    if elements.len() < 2 || depth > 3 {
        return;
    }
    let mut start = 0;
    while start < elements.len() {
        let len = rng.random_range(1..=elements.len() - start);
        let run = &elements[start..start + len];
        start += len;
        if run.len() == elements.len() && depth > 0 {
            continue;
        }
        if rng.random_bool(0.7) {
            out.push(LaminarSet { elements: run.to_vec(), capacity: rng.random_range(1..=run.len()) });
        }
        split(run, depth + 1, rng, out);
    }
}

fn bernoulli(means: Vec<f64>) -> Vec<ArmDistribution> {
    means.into_iter().map(|mean| ArmDistribution::Bernoulli { mean }).collect()
}

fn spec(name: String, matroid: MatroidSpec, means: Vec<f64>, gap_floor: Option<f64>) -> InstanceSpec {
    InstanceSpec {
        schema_version: SCHEMA_VERSION,
        name,
        notes: String::new(),
        matroid,
        arms: bernoulli(means),
        allow_ties: false,
        gap_floor,
    }
}

/// Distinct means drawn uniformly from `[lo, hi)`.
fn distinct_means(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut means: Vec<f64> = Vec::with_capacity(n);
    while means.len() < n {
        let x = rng.random_range(lo..hi);
        if !means.contains(&x) {
            means.push(x);
        }
    }
    means
}

fn random_arms(name: &str, matroid: MatroidSpec, rng: &mut ChaCha8Rng) -> InstanceSpec {
    let means = distinct_means(matroid.len(), 0.05, 0.95, rng);
    spec(format!("{name}-{}", matroid.len()), matroid, means, None)
}

fn check_uniform(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::validation(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Places optimal and suboptimal means on shuffled element ids.
fn assign(top: Vec<f64>, bottom: Vec<f64>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut means = top;
    means.extend(bottom);
    means.shuffle(rng);
    means
}

fn uniform_gap(n: usize, k: usize, eps: f64, rng: &mut ChaCha8Rng) -> Result<InstanceSpec> {
    check_uniform(n, k)?;
    if !(eps > 0.0 && eps < 0.9) {
        return Err(Error::validation(format!("uniform-gap eps must lie in (0, 0.9), got {eps}")));
    }
    let step = eps / (20.0 * n as f64);
    let top = (0..k).map(|j| 0.5 + eps / 2.0 + j as f64 * step).collect();
    let bottom = (0..n - k).map(|j| 0.5 - eps / 2.0 - j as f64 * step).collect();
    let means = assign(top, bottom, rng);
    Ok(spec(format!("uniform-gap-{n}-{k}"), MatroidSpec::Uniform { n, k }, means, Some(eps)))
}

fn ladder(pairs: usize, min_gap: f64, rng: &mut ChaCha8Rng) -> Result<InstanceSpec> {
    if pairs == 0 {
        return Err(Error::validation("ladder needs at least one pair"));
    }
    let widest = min_gap / 2.0 * 2f64.powi(pairs as i32 - 1);
    if !(min_gap > 0.0 && widest < 0.5) {
        return Err(Error::validation(format!(
            "ladder with {pairs} pairs and min gap {min_gap} does not fit in (0, 1)"
        )));
    }
    let d = |i: usize| min_gap / 2.0 * 2f64.powi(i as i32);
    let top = (0..pairs).map(|i| 0.5 + d(i)).collect();
    let bottom = (0..pairs).map(|i| 0.5 - d(i)).collect();
    let means = assign(top, bottom, rng);
    let n = 2 * pairs;
    Ok(spec(format!("ladder-{n}"), MatroidSpec::Uniform { n, k: pairs }, means, Some(min_gap)))
}

fn random_uniform(n: usize, k: usize, gap_floor: f64, rng: &mut ChaCha8Rng) -> Result<InstanceSpec> {
    check_uniform(n, k)?;
    if !(0.0..0.5).contains(&gap_floor) {
        return Err(Error::validation(format!("gap floor must lie in [0, 0.5), got {gap_floor}")));
    }
    let means = if gap_floor == 0.0 {
        distinct_means(n, 0.05, 0.95, rng)
    } else {
        let centre = rng.random_range(0.4..0.6);
        let top = distinct_means(k, centre + gap_floor / 2.0, 0.95, rng);
        let bottom = distinct_means(n - k, 0.05, centre - gap_floor / 2.0, rng);
        assign(top, bottom, rng)
    };
    let floor = (gap_floor > 0.0).then_some(gap_floor);
    Ok(spec(format!("random-uniform-{n}-{k}"), MatroidSpec::Uniform { n, k }, means, floor))
}

pub const BUILTINS: [&str; 7] = ["prop1", "ladder10", "uniform-gap", "graphic", "partition", "laminar", "transversal"];

pub fn builtin(name: &str) -> Result<InstanceSpec> {
    let fixed = |matroid: MatroidSpec, means: Vec<f64>, notes: &str| {
        let mut s = spec(name.to_string(), matroid, means, None);
        s.notes = notes.to_string();
        s
    };
    let mut spec = match name {
        "prop1" => fixed(
            MatroidSpec::Uniform { n: 4, k: 2 },
            vec![0.91, 0.9, 0.89, 0.875],
            "four arms, pick two; {2,3} separates elementwise from full eps-optimality",
        ),
        "ladder10" => Generator::Ladder { pairs: 5, min_gap: 0.05 }.generate(10)?,
        "uniform-gap" => Generator::UniformGap { n: 20, k: 4, eps: 0.1 }.generate(20)?,
        "graphic" => fixed(
            MatroidSpec::Graphic { vertices: 5, edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)] },
            vec![0.82, 0.35, 0.6, 0.71, 0.44, 0.27, 0.55],
            "K4 plus a pendant edge (6), which lies in every spanning tree",
        ),
        "partition" => fixed(
            MatroidSpec::Partition { group_of: vec![0, 0, 0, 1, 1, 1, 2, 2], capacities: vec![2, 1, 1] },
            vec![0.3, 0.75, 0.6, 0.45, 0.2, 0.52, 0.9, 0.66],
            "",
        ),
        "laminar" => fixed(
            MatroidSpec::Laminar {
                n: 8,
                sets: vec![
                    LaminarSet { elements: vec![0, 1, 2], capacity: 1 },
                    LaminarSet { elements: vec![3, 4], capacity: 1 },
                    LaminarSet { elements: vec![0, 1, 2, 3, 4], capacity: 2 },
                    LaminarSet { elements: vec![5, 6, 7], capacity: 2 },
                ],
            },
            vec![0.8, 0.7, 0.35, 0.62, 0.58, 0.25, 0.4, 0.93],
            "",
        ),
        "transversal" => fixed(
            MatroidSpec::Transversal {
                tasks: 3,
                adjacency: vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2], vec![0, 2]],
            },
            vec![0.56, 0.81, 0.3, 0.67, 0.15, 0.42],
            "six workers competing for three tasks",
        ),
        other => return Err(Error::validation(format!("unknown builtin instance `{other}`"))),
    };
    spec.name = name.to_string();
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::gap_profile;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTINS {
            let spec = builtin(name).unwrap();
            let inst = spec.build().unwrap();
            assert_eq!(inst.name(), name);
            assert!(inst.rank() > 0);
        }
        let prop1 = builtin("prop1").unwrap().build().unwrap();
        assert_eq!(prop1.means, vec![0.91, 0.9, 0.89, 0.875]);
        assert_eq!(prop1.rank(), 2);
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn uniform_gap_band() {
        let spec = Generator::UniformGap { n: 20, k: 4, eps: 0.1 }.generate(3).unwrap();
        let inst = spec.build().unwrap();
        for g in gap_profile(&inst.view, &inst.means).unwrap().entries {
            assert!((0.09..=0.11).contains(&g.gap), "gap {}", g.gap);
        }
    }

    #[test]
    fn ladder_gaps() {
        let inst = Generator::Ladder { pairs: 5, min_gap: 0.05 }.generate(0).unwrap().build().unwrap();
        let mut gaps: Vec<f64> = gap_profile(&inst.view, &inst.means).unwrap().entries.iter().map(|g| g.gap).collect();
        gaps.sort_by(f64::total_cmp);
        assert!((gaps[0] - 0.05).abs() < 1e-12);
        assert!((gaps[9] - 0.425).abs() < 1e-12);
        assert!(Generator::Ladder { pairs: 6, min_gap: 0.05 }.generate(0).is_err());
    }

    #[test]
    fn random_uniform_respects_floor() {
        for seed in 0..20 {
            let inst =
                Generator::RandomUniform { n: 60, k: 5, gap_floor: 0.05 }.generate(seed).unwrap().build().unwrap();
            assert!(gap_profile(&inst.view, &inst.means).unwrap().min_gap().unwrap() >= 0.05);
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let gens = [
            Generator::UniformGap { n: 12, k: 3, eps: 0.1 },
            Generator::Ladder { pairs: 3, min_gap: 0.1 },
            Generator::RandomUniform { n: 30, k: 4, gap_floor: 0.02 },
            Generator::RandomGraphic { vertices: 5, edges: 9 },
            Generator::RandomPartition { n: 10, groups: 3 },
            Generator::RandomLaminar { n: 10 },
            Generator::RandomTransversal { workers: 8, tasks: 4 },
        ];
        for g in gens {
            let a = g.generate(42).unwrap();
            let b = g.generate(42).unwrap();
            assert_eq!(a.to_json(), b.to_json());
            a.build().unwrap();
            assert_ne!(a.to_json(), g.generate(43).unwrap().to_json());
        }
    }

    #[test]
    fn random_families_have_no_loops() {
        use crate::matroid::isolated_and_loops;
        for seed in 0..50 {
            for g in [
                Generator::RandomGraphic { vertices: 4, edges: 8 },
                Generator::RandomPartition { n: 9, groups: 4 },
                Generator::RandomLaminar { n: 9 },
                Generator::RandomTransversal { workers: 9, tasks: 3 },
            ] {
                let inst = g.generate(seed).unwrap().build().unwrap();
                assert!(isolated_and_loops(&inst.view).1.is_empty());
            }
        }
    }
}
