//! Pure-exploration bandits under matroid constraints.
//!
//! Arms are the elements of a matroid; an algorithm pulls arms through a
//! [`SamplingSession`] and reports a basis. Three targets are covered:
//!
//! * the optimal basis itself ([`exact_exp_gap`]),
//! * an ε-optimal basis ([`naive_one`], [`pac_sample_prune`]),
//! * an average-ε-optimal basis ([`naive_two`], [`avg_pac_recur_elim`]).
//!
//! [`verify`] holds the exhaustive ground-truth oracles and [`harness`] the
//! instance files and Monte Carlo trial runner.

pub mod avg;
pub mod env;
pub mod error;
pub mod exact;
pub mod harness;
pub mod matroid;
pub mod pac;
pub mod trace;
pub mod verify;

pub use avg::{avg_pac_recur_elim, elimination, naive_two, val, AvgConfig, AvgValue};
pub use env::{derive_trial_seed, uniform_sample_count, ArmDistribution, SamplingSession};
pub use error::{Error, Result};
pub use exact::{exact_exp_gap, round_schedule};
pub use matroid::{
    greedy_max_basis, ids, is_eps_optimal, is_eps_optimal_modified_cost, is_optimal_basis, isolated_and_loops,
    ElementId, GraphicMatroid, IntoView, LaminarMatroid, Matroid, MatroidView, PartitionMatroid, TransversalMatroid,
    UniformMatroid,
};
pub use pac::{naive_one, pac_sample_prune, ConstantsProfile, PacResult};
pub use trace::{RoundKind, TraceRecord};
