use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};
use statrs::statistics::{Data, Max, Min, OrderStatistics};

/// One-sided exact (Clopper–Pearson) lower confidence bound on a binomial
/// success probability at the given confidence level.
pub fn clopper_pearson_lower(successes: u64, trials: u64, confidence: f64) -> f64 {
    if trials == 0 || successes == 0 {
        return 0.0;
    }
    let beta = Beta::new(successes as f64, (trials - successes + 1) as f64).expect("positive shape parameters");
    beta.inverse_cdf(1.0 - confidence)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub successes: u64,
    pub trials: u64,
    pub rate: f64,
    /// 95% one-sided lower confidence bound.
    pub lcb95: f64,
}

impl Rate {
    pub fn new(successes: u64, trials: u64) -> Self {
        Self {
            successes,
            trials,
            rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            lcb95: clopper_pearson_lower(successes, trials, 0.95),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

impl Quantiles {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut data = Data::new(values.to_vec());
        Some(Self { min: data.min(), median: data.median(), p90: data.quantile(0.9), max: data.max() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_reference_values() {
        // all successes: 0.05^(1/n)
        let n = 100;
        assert!((clopper_pearson_lower(n, n, 0.95) - 0.05f64.powf(1.0 / n as f64)).abs() < 1e-9);
        assert_eq!(clopper_pearson_lower(0, 10, 0.95), 0.0);
        assert_eq!(clopper_pearson_lower(0, 0, 0.95), 0.0);
        // one success out of 1: lower bound solves p = 0.05
        assert!((clopper_pearson_lower(1, 1, 0.95) - 0.05).abs() < 1e-9);
        let mid = clopper_pearson_lower(90, 100, 0.95);
        assert!(mid > 0.83 && mid < 0.9);
    }

    #[test]
    fn quantiles() {
        assert!(Quantiles::of(&[]).is_none());
        let q = Quantiles::of(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((q.min, q.median, q.max), (1.0, 2.0, 3.0));
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let q = Quantiles::of(&v).unwrap();
        assert!(q.p90 > 89.0 && q.p90 < 92.0);
    }
}
