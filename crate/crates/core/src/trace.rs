use serde::{Deserialize, Serialize};

use crate::matroid::ElementId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundKind {
    Elimination,
    Selection,
}

/// One structured record of an algorithm run, written as a JSON line by the
/// CLI under `--trace`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceRecord {
    /// One call of the sampling-and-pruning recursion.
    PacLevel { depth: usize, arms: usize, rank: usize, base_case: bool, sampled: usize, kept: usize },
    /// One round of exact identification.
    ExactRound {
        kind: RoundKind,
        r: u32,
        arms: usize,
        n_opt: usize,
        n_bad: usize,
        /// `|S_new|` after an elimination round, `|U|` after a selection round.
        changed: usize,
        /// Arms committed by a selection round or discarded by an
        /// elimination round.
        affected: Vec<ElementId>,
        cumulative_samples: u64,
    },
    /// One elimination round of average-ε identification.
    AvgRound { r: u32, arms: usize, eps: f64, delta: f64, kept: usize, samples: u64 },
}
