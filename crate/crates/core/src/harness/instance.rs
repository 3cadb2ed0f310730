use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::ArmDistribution;
use crate::error::{Error, Result};
use crate::matroid::{
    ElementId, GraphicMatroid, IntoView, LaminarMatroid, Matroid, MatroidView, PartitionMatroid, TransversalMatroid,
    UniformMatroid,
};
use crate::verify::min_gap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaminarSet {
    pub elements: Vec<usize>,
    pub capacity: usize,
}

/// Matroid block of an instance file, tagged by `family`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        n: usize,
        k: usize,
    },
    /// `group_of[e]` is the group of element `e`.
    Partition {
        group_of: Vec<usize>,
        capacities: Vec<usize>,
    },
    Laminar {
        n: usize,
        sets: Vec<LaminarSet>,
    },
    /// Edge `e` joins `edges[e].0` and `edges[e].1`; equal endpoints make a loop.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// `adjacency[e]` lists the tasks worker `e` can take.
    Transversal {
        tasks: usize,
        adjacency: Vec<Vec<usize>>,
    },
}

impl MatroidSpec {
    pub fn len(&self) -> usize {
        match self {
            MatroidSpec::Uniform { n, .. } | MatroidSpec::Laminar { n, .. } => *n,
            MatroidSpec::Partition { group_of, .. } => group_of.len(),
            MatroidSpec::Graphic { edges, .. } => edges.len(),
            MatroidSpec::Transversal { adjacency, .. } => adjacency.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn family(&self) -> &'static str {
        match self {
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Partition { .. } => "partition",
            MatroidSpec::Laminar { .. } => "laminar",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::Transversal { .. } => "transversal",
        }
    }

    pub fn build(&self) -> Result<MatroidView> {
        Ok(match self.clone() {
            MatroidSpec::Uniform { n, k } => {
                if k > n {
                    return Err(Error::validation(format!("uniform capacity {k} exceeds n={n}")));
                }
                UniformMatroid::new(n, k).into_view()
            }
            MatroidSpec::Partition { group_of, capacities } => PartitionMatroid::new(group_of, capacities)?.into_view(),
            MatroidSpec::Laminar { n, sets } => {
                let family = sets
                    .into_iter()
                    .map(|s| (s.elements.into_iter().map(ElementId::from).collect(), s.capacity))
                    .collect();
                LaminarMatroid::new(n, family)?.into_view()
            }
            MatroidSpec::Graphic { vertices, edges } => GraphicMatroid::new(vertices, edges)?.into_view(),
            MatroidSpec::Transversal { tasks, adjacency } => TransversalMatroid::new(tasks, adjacency)?.into_view(),
        })
    }
}

/// On-disk description of a bandit instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub matroid: MatroidSpec,
    pub arms: Vec<ArmDistribution>,
    /// Permit repeated means; exact identification then has no unique target.
    #[serde(default)]
    pub allow_ties: bool,
    /// Every finite gap must be at least this large.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_floor: Option<f64>,
}

impl InstanceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Same instance with every arm replaced by a point mass at its mean.
    pub fn noiseless(&self) -> Self {
        let mut spec = self.clone();
        spec.arms = self.arms.iter().map(ArmDistribution::noiseless).collect();
        spec
    }

    pub fn build(&self) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let view = self.matroid.build()?;
        if self.arms.len() != self.matroid.len() {
            return Err(Error::validation(format!(
                "{} arms declared for a ground set of {} elements",
                self.arms.len(),
                self.matroid.len()
            )));
        }
        for arm in &self.arms {
            arm.validate()?;
            let mean = arm.mean();
            if !(mean > 0.0 && mean < 1.0) {
                return Err(Error::validation(format!("arm mean {mean} must lie strictly inside (0, 1)")));
            }
        }
        let means: Vec<f64> = self.arms.iter().map(ArmDistribution::mean).collect();
        let mut sorted = means.clone();
        sorted.sort_by(f64::total_cmp);
        if !self.allow_ties && sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("arm means must be pairwise distinct (set allow_ties to permit repeats)"));
        }
        if let Some(floor) = self.gap_floor {
            if self.allow_ties {
                return Err(Error::validation("gap_floor requires distinct means"));
            }
            if let Some(g) = min_gap(&view, &means)? {
                if g < floor - 1e-12 {
                    return Err(Error::validation(format!("smallest gap {g} is below the declared floor {floor}")));
                }
            }
        }
        Ok(Instance { spec: self.clone(), view, means })
    }
}

/// A validated instance ready for trials.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub view: MatroidView,
    /// True means, for verification only.
    pub means: Vec<f64>,
}

impl Instance {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.spec.arms
    }

    pub fn rank(&self) -> usize {
        self.view.full_rank()
    }

    /// Smallest difference between two distinct means.
    pub fn min_mean_spacing(&self) -> Option<f64> {
        let mut sorted = self.means.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).reduce(f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROP1: &str = r#"{
        "schema_version": 1,
        "name": "prop1",
        "matroid": {"family": "uniform", "n": 4, "k": 2},
        "arms": [
            {"kind": "bernoulli", "mean": 0.91},
            {"kind": "bernoulli", "mean": 0.9},
            {"kind": "bernoulli", "mean": 0.89},
            {"kind": "bernoulli", "mean": 0.875}
        ]
    }"#;

    #[test]
    fn parses_and_builds() {
        let spec = InstanceSpec::from_json(PROP1).unwrap();
        let inst = spec.build().unwrap();
        assert_eq!(inst.rank(), 2);
        assert_eq!(inst.means, vec![0.91, 0.9, 0.89, 0.875]);
        assert!((inst.min_mean_spacing().unwrap() - 0.01).abs() < 1e-12);
        let again = InstanceSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_bad_instances() {
        let mut spec = InstanceSpec::from_json(PROP1).unwrap();
        spec.arms.pop();
        assert!(matches!(spec.build(), Err(Error::Validation(_))));

        let mut spec = InstanceSpec::from_json(PROP1).unwrap();
        spec.arms[0] = ArmDistribution::Bernoulli { mean: 0.9 };
        assert!(spec.build().is_err());
        spec.allow_ties = true;
        assert!(spec.build().is_ok());

        let mut spec = InstanceSpec::from_json(PROP1).unwrap();
        spec.arms[0] = ArmDistribution::Bernoulli { mean: 1.0 };
        assert!(spec.build().is_err());

        let mut spec = InstanceSpec::from_json(PROP1).unwrap();
        spec.gap_floor = Some(0.02);
        assert!(spec.build().is_err());
        spec.gap_floor = Some(0.01);
        assert!(spec.build().is_ok());

        let mut spec = InstanceSpec::from_json(PROP1).unwrap();
        spec.schema_version = 7;
        assert!(spec.build().is_err());

        assert!(InstanceSpec::from_json(&PROP1.replace("\"k\": 2", "\"k\": 2, \"extra\": 1")).is_err());
    }

    #[test]
    fn laminar_nesting_is_validated() {
        let spec = MatroidSpec::Laminar {
            n: 4,
            sets: vec![
                LaminarSet { elements: vec![0, 1], capacity: 1 },
                LaminarSet { elements: vec![1, 2], capacity: 1 },
            ],
        };
        assert!(matches!(spec.build(), Err(Error::Validation(_))));
    }

    #[test]
    fn every_family_round_trips() {
        let specs = [
            MatroidSpec::Uniform { n: 3, k: 1 },
            MatroidSpec::Partition { group_of: vec![0, 1, 1], capacities: vec![1, 1] },
            MatroidSpec::Laminar { n: 3, sets: vec![LaminarSet { elements: vec![0, 1], capacity: 1 }] },
            MatroidSpec::Graphic { vertices: 3, edges: vec![(0, 1), (1, 2), (0, 2)] },
            MatroidSpec::Transversal { tasks: 2, adjacency: vec![vec![0], vec![0, 1], vec![1]] },
        ];
        for s in specs {
            let text = serde_json::to_string(&s).unwrap();
            assert!(text.contains(&format!("\"family\":\"{}\"", s.family())));
            let back: MatroidSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.build().unwrap().len(), 3);
        }
    }
}
