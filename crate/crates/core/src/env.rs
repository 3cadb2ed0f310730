//! Stochastic arms with an exact pull ledger.
//!
//! Algorithms only ever see a [`SamplingSession`]: they can pull arms and
//! draw random subsets, but the distributions (and so the true means) stay
//! private to the session. The harness keeps its own copy of the means for
//! verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::ElementId;

/// Reward distribution of one arm. All supports lie in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArmDistribution {
    Bernoulli {
        mean: f64,
    },
    /// Two-point distribution on `support = [low, high]` with the given mean.
    ScaledBernoulli {
        mean: f64,
        support: [f64; 2],
    },
    PointMass {
        mean: f64,
    },
}

impl ArmDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            ArmDistribution::Bernoulli { mean }
            | ArmDistribution::ScaledBernoulli { mean, .. }
            | ArmDistribution::PointMass { mean } => mean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mean = self.mean();
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::validation(format!("arm mean {mean} outside [0, 1]")));
        }
        if let ArmDistribution::ScaledBernoulli { support: [lo, hi], .. } = *self {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return Err(Error::validation(format!("support [{lo}, {hi}] is not an interval in [0, 1]")));
            }
            if !(lo..=hi).contains(&mean) {
                return Err(Error::validation(format!("mean {mean} outside support [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Same mean, no noise.
    pub fn noiseless(&self) -> Self {
        ArmDistribution::PointMass { mean: self.mean() }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            ArmDistribution::Bernoulli { mean } => f64::from(u8::from(rng.random::<f64>() < mean)),
            ArmDistribution::ScaledBernoulli { mean, support: [lo, hi] } => {
                if rng.random::<f64>() < (mean - lo) / (hi - lo) {
                    hi
                } else {
                    lo
                }
            }
            ArmDistribution::PointMass { mean } => mean,
        }
    }

    /// Sum of `count` i.i.d. rewards. Two-point arms draw the number of high
    /// outcomes from a binomial, which has the same law as `count` single
    /// pulls.
    fn sample_sum<R: Rng>(&self, rng: &mut R, count: u64) -> f64 {
        match *self {
            ArmDistribution::Bernoulli { mean } => binomial(rng, count, mean) as f64,
            ArmDistribution::ScaledBernoulli { mean, support: [lo, hi] } => {
                let highs = binomial(rng, count, (mean - lo) / (hi - lo)) as f64;
                lo * count as f64 + (hi - lo) * highs
            }
            ArmDistribution::PointMass { mean } => mean * count as f64,
        }
    }
}

fn binomial<R: Rng>(rng: &mut R, n: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("p is clamped to [0, 1]").sample(rng)
}

/// Number of pulls per arm that makes one empirical mean ε-accurate with
/// probability at least 1 − δ: `ceil(ε⁻²·ln(2/δ)/2)`, at least 1.
pub fn uniform_sample_count(eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be > 0, got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(ceil_count((2.0 / delta).ln() / (2.0 * eps * eps)))
}

/// Real-valued sample counts are rounded up, with a floor of one pull.
pub(crate) fn ceil_count(x: f64) -> u64 {
    if x.is_nan() || x <= 1.0 {
        1
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

/// Seed of trial `trial` under `master`, independent of scheduling order.
pub fn derive_trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(master) ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One trial's arms, RNG stream and pull ledger.
#[derive(Debug, Clone)]
pub struct SamplingSession {
    rng: ChaCha8Rng,
    arms: Vec<ArmDistribution>,
    pulls: Vec<u64>,
    sums: Vec<f64>,
    total: u64,
    budget: Option<u64>,
}

impl SamplingSession {
    pub fn new(arms: Vec<ArmDistribution>, seed: u64) -> Self {
        let n = arms.len();
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            arms,
            pulls: vec![0; n],
            sums: vec![0.0; n],
            total: 0,
            budget: None,
        }
    }

    /// Caps the total number of pulls; exceeding it is a budget error.
    pub fn with_budget(mut self, max_pulls: u64) -> Self {
        self.budget = Some(max_pulls);
        self
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    fn charge(&mut self, e: ElementId, count: u64) -> Result<()> {
        if e.index() >= self.arms.len() {
            return Err(Error::OutsideGround(e));
        }
        let after = self.total.saturating_add(count);
        if let Some(limit) = self.budget {
            if after > limit {
                return Err(Error::Budget(format!("pull budget of {limit} exhausted")));
            }
        }
        self.total = after;
        self.pulls[e.index()] += count;
        Ok(())
    }

    /// One reward from arm `e`.
    pub fn pull(&mut self, e: ElementId) -> Result<f64> {
        self.charge(e, 1)?;
        let x = self.arms[e.index()].sample(&mut self.rng);
        self.sums[e.index()] += x;
        Ok(x)
    }

    /// Pulls arm `e` `count` times and returns the mean of this batch only.
    pub fn pull_batch(&mut self, e: ElementId, count: u64) -> Result<f64> {
        if count == 0 {
            return Err(Error::domain("batch size must be positive"));
        }
        self.charge(e, count)?;
        let sum = self.arms[e.index()].sample_sum(&mut self.rng, count);
        self.sums[e.index()] += sum;
        Ok(sum / count as f64)
    }

    /// Pulls every arm of `arms` `ceil(ε⁻²·ln(2/δ)/2)` times and returns the
    /// fresh batch means in the same order.
    pub fn uniform_sample(&mut self, arms: &[ElementId], eps: f64, delta: f64) -> Result<Vec<f64>> {
        let q = uniform_sample_count(eps, delta)?;
        arms.iter().map(|&e| self.pull_batch(e, q)).collect()
    }

    /// Keeps each element independently with probability `p`.
    pub fn bernoulli_subset(&mut self, set: &[ElementId], p: f64) -> Vec<ElementId> {
        set.iter().copied().filter(|_| self.rng.random::<f64>() < p).collect()
    }

    pub fn total_samples(&self) -> u64 {
        self.total
    }

    pub fn pulls(&self, e: ElementId) -> u64 {
        self.pulls.get(e.index()).copied().unwrap_or(0)
    }

    pub fn per_arm_pulls(&self) -> &[u64] {
        &self.pulls
    }

    /// Mean over every pull of `e` in this session, if it was pulled.
    pub fn empirical_mean(&self, e: ElementId) -> Option<f64> {
        match self.pulls(e) {
            0 => None,
            n => Some(self.sums[e.index()] / n as f64),
        }
    }
}
