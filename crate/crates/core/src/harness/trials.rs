//! Seeded Monte Carlo trials and their report.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::Instance;
use super::stats::{Quantiles, Rate};
use crate::avg::{avg_pac_recur_elim, naive_two};
use crate::env::{derive_trial_seed, SamplingSession};
use crate::error::{Error, Result};
use crate::exact::exact_exp_gap;
use crate::matroid::ElementId;
use crate::pac::{check_params, naive_one, pac_sample_prune, ConstantsProfile, PacResult};
use crate::trace::TraceRecord;
use crate::verify::SuccessFlags;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    Pac,
    Avgpac,
    Naive1,
    Naive2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Exact, Algorithm::Pac, Algorithm::Avgpac, Algorithm::Naive1, Algorithm::Naive2];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Pac => "pac",
            Algorithm::Avgpac => "avgpac",
            Algorithm::Naive1 => "naive1",
            Algorithm::Naive2 => "naive2",
        }
    }

    /// The success flag this algorithm is judged by.
    pub fn target(self, flags: &SuccessFlags) -> bool {
        match self {
            Algorithm::Exact => flags.exact,
            Algorithm::Pac | Algorithm::Naive1 => flags.eps_optimal,
            Algorithm::Avgpac | Algorithm::Naive2 => flags.avg_eps,
        }
    }

    pub fn run(
        self,
        session: &mut SamplingSession,
        instance: &Instance,
        eps: f64,
        delta: f64,
        constants: &ConstantsProfile,
    ) -> Result<PacResult> {
        let m = &instance.view;
        match self {
            Algorithm::Exact => exact_exp_gap(session, m, delta, constants),
            Algorithm::Pac => pac_sample_prune(session, m, eps, delta, constants),
            Algorithm::Avgpac => avg_pac_recur_elim(session, m, eps, delta, constants),
            Algorithm::Naive1 => naive_one(session, m, eps, delta),
            Algorithm::Naive2 => naive_two(session, m, eps, delta),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Also the tolerance of the ε-type success flags for `exact`.
    pub eps: f64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub constants: ConstantsProfile,
    /// Worker threads; the report does not depend on it.
    #[serde(skip)]
    pub jobs: usize,
    /// Abort a trial once it has pulled this many times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub trace: bool,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, eps: f64, delta: f64, trials: u64, seed: u64) -> Self {
        Self {
            algorithm,
            eps,
            delta,
            trials,
            seed,
            constants: ConstantsProfile::desk(),
            jobs: 1,
            budget: None,
            trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.eps, self.delta)?;
        self.constants.validate()?;
        if self.jobs == 0 {
            return Err(Error::domain("jobs must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub basis: Vec<ElementId>,
    pub samples: u64,
    pub per_arm_samples: Vec<u64>,
    pub flags: SuccessFlags,
    pub success: bool,
    /// Set when the trial aborted with a budget error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Vec<TraceRecord>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u64,
    /// Rate of the algorithm's own target flag.
    pub success: Rate,
    pub exact: Rate,
    pub eps_optimal: Rate,
    pub elementwise: Rate,
    pub avg_eps: Rate,
    pub aborted: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Quantiles>,
    /// Median samples divided by `n·ε⁻²·(1 + ln δ⁻¹ / k)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_median_samples: Option<f64>,
    /// Mean pulls of each arm across trials.
    pub pull_heatmap: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub instance: String,
    pub config: RunConfig,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub trials: Vec<TrialReport>,
}

impl Report {
    /// Drops every wall-clock field, leaving only seed-determined content.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.wall_time_ms = None;
        for t in &mut r.trials {
            t.wall_time_ms = None;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// One row per trial.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "trial",
            "seed",
            "algorithm",
            "samples",
            "success",
            "exact",
            "eps_optimal",
            "elementwise",
            "avg_eps",
            "basis",
            "error",
            "wall_time_ms",
        ])?;
        for t in &self.trials {
            let basis: Vec<String> = t.basis.iter().map(ToString::to_string).collect();
            w.write_record([
                t.trial.to_string(),
                t.seed.to_string(),
                t.algorithm.to_string(),
                t.samples.to_string(),
                t.success.to_string(),
                t.flags.exact.to_string(),
                t.flags.eps_optimal.to_string(),
                t.flags.elementwise.to_string(),
                t.flags.avg_eps.to_string(),
                basis.join(" "),
                t.error.clone().unwrap_or_default(),
                t.wall_time_ms.map(|x| format!("{x:.3}")).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Runs one trial. Budget errors are recorded in the report; any other
/// error aborts.
pub fn run_trial(instance: &Instance, config: &RunConfig, trial: u64) -> Result<TrialReport> {
    let seed = derive_trial_seed(config.seed, trial);
    let mut session = SamplingSession::new(instance.arms().to_vec(), seed);
    if let Some(limit) = config.budget {
        session = session.with_budget(limit);
    }
    let started = Instant::now();
    let outcome = config.algorithm.run(&mut session, instance, config.eps, config.delta, &config.constants);
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    let (basis, transcript, error) = match outcome {
        Ok(result) => (result.basis, result.transcript, None),
        Err(Error::Budget(msg)) => (Vec::new(), Vec::new(), Some(msg)),
        Err(e) => return Err(e),
    };
    let flags = if error.is_some() {
        SuccessFlags::default()
    } else {
        SuccessFlags::evaluate(&instance.view, &basis, &instance.means, config.eps)?
    };
    Ok(TrialReport {
        trial,
        seed,
        algorithm: config.algorithm,
        basis,
        samples: session.total_samples(),
        per_arm_samples: session.per_arm_pulls().to_vec(),
        success: config.algorithm.target(&flags),
        flags,
        error,
        wall_time_ms: Some(elapsed),
        transcript: config.trace.then_some(transcript),
    })
}

/// Runs `config.trials` independent trials on `config.jobs` threads. Reports
/// come back in trial order whatever the thread count.
pub fn run_trials(instance: &Instance, config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::internal(format!("thread pool: {e}")))?;
    let trials: Vec<TrialReport> = pool.install(|| {
        (0..config.trials).into_par_iter().map(|t| run_trial(instance, config, t)).collect::<Result<_>>()
    })?;
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: instance.name().to_string(),
        summary: summarize(instance, config, &trials),
        config: config.clone(),
        wall_time_ms: Some(started.elapsed().as_secs_f64() * 1e3),
        trials,
    })
}

fn summarize(instance: &Instance, config: &RunConfig, trials: &[TrialReport]) -> Summary {
    let n = trials.len() as u64;
    let count = |f: fn(&TrialReport) -> bool| Rate::new(trials.iter().filter(|t| f(t)).count() as u64, n);
    let samples: Vec<f64> = trials.iter().map(|t| t.samples as f64).collect();
    let quantiles = Quantiles::of(&samples);
    let k = instance.rank();
    let normalized = quantiles.as_ref().filter(|_| k > 0).map(|q| {
        let scale =
            instance.means.len() as f64 / (config.eps * config.eps) * (1.0 + (1.0 / config.delta).ln() / k as f64);
        q.median / scale
    });
    let mut heatmap = vec![0.0; instance.means.len()];
    for t in trials {
        for (h, p) in heatmap.iter_mut().zip(&t.per_arm_samples) {
            *h += *p as f64;
        }
    }
    if n > 0 {
        heatmap.iter_mut().for_each(|h| *h /= n as f64);
    }
    Summary {
        trials: n,
        success: count(|t| t.success),
        exact: count(|t| t.flags.exact),
        eps_optimal: count(|t| t.flags.eps_optimal),
        elementwise: count(|t| t.flags.elementwise),
        avg_eps: count(|t| t.flags.avg_eps),
        aborted: trials.iter().filter(|t| t.error.is_some()).count() as u64,
        samples: quantiles,
        normalized_median_samples: normalized,
        pull_heatmap: heatmap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::builtin;

    fn prop1() -> Instance {
        builtin("prop1").unwrap().build().unwrap()
    }

    #[test]
    fn zero_trials() {
        let r = run_trials(&prop1(), &RunConfig::new(Algorithm::Exact, 0.1, 0.1, 0, 1)).unwrap();
        assert_eq!(r.summary.trials, 0);
        assert!(r.trials.is_empty());
        assert!(r.summary.samples.is_none());
    }

    #[test]
    fn noiseless_runs_always_succeed() {
        let inst = builtin("prop1").unwrap().noiseless().build().unwrap();
        for algo in Algorithm::ALL {
            let r = run_trials(&inst, &RunConfig::new(algo, 0.005, 0.1, 50, 3)).unwrap();
            assert_eq!(r.summary.exact.rate, 1.0, "{algo}");
            assert_eq!(r.summary.success.rate, 1.0, "{algo}");
        }
    }

    #[test]
    fn order_and_content_do_not_depend_on_jobs() {
        let inst = prop1();
        let mut cfg = RunConfig::new(Algorithm::Naive1, 0.1, 0.1, 16, 99);
        let one = run_trials(&inst, &cfg).unwrap().without_timing();
        cfg.jobs = 4;
        let four = run_trials(&inst, &cfg).unwrap().without_timing();
        assert_eq!(one.to_json(), four.to_json());
        assert!(one.trials.iter().enumerate().all(|(i, t)| t.trial == i as u64));
    }

    #[test]
    fn budget_errors_count_as_failures() {
        let mut cfg = RunConfig::new(Algorithm::Exact, 0.1, 0.1, 5, 0);
        cfg.budget = Some(100);
        let r = run_trials(&prop1(), &cfg).unwrap();
        assert_eq!(r.summary.trials, 5);
        assert_eq!(r.summary.aborted, 5);
        assert_eq!(r.summary.success.successes, 0);
        assert!(r.trials.iter().all(|t| t.error.is_some() && !t.success));
    }

    #[test]
    fn config_errors_reject_the_batch() {
        assert!(run_trials(&prop1(), &RunConfig::new(Algorithm::Pac, -1.0, 0.1, 5, 0)).is_err());
        assert!("bogus".parse::<Algorithm>().is_err());
        assert_eq!("avgpac".parse::<Algorithm>().unwrap(), Algorithm::Avgpac);
    }

    #[test]
    fn csv_has_one_row_per_trial() {
        let r = run_trials(&prop1(), &RunConfig::new(Algorithm::Naive2, 0.1, 0.1, 3, 0)).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("trial,seed,algorithm"));
    }
}
