//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{minus, random_instance, union, FAMILIES};
use matroid_explore::harness::{builtin, run_trials, Algorithm, Generator, Instance, RunConfig, BUILTINS};
use matroid_explore::matroid::{above, at_least};
use matroid_explore::verify::{
    brute_force_opt, count_f_good, enumerate_bases, gap, gap_alt, is_elementwise_eps_optimal,
};
use matroid_explore::{
    greedy_max_basis, ids, is_eps_optimal, is_eps_optimal_modified_cost, is_optimal_basis, naive_one, ConstantsProfile,
    Matroid, MatroidView, SamplingSession,
};
use statrs::distribution::{Binomial, DiscreteCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn trials(
    instance: &Instance,
    algorithm: Algorithm,
    eps: f64,
    delta: f64,
    count: u64,
    seed: u64,
    constants: ConstantsProfile,
) -> matroid_explore::harness::Report {
    let mut config = RunConfig::new(algorithm, eps, delta, count, seed);
    config.constants = constants;
    config.jobs = jobs();
    run_trials(instance, &config).expect("trial batch runs")
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took <= limit, format!("{:.1}s of {}s", took.as_secs_f64(), limit.as_secs()))
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let per_family = 1000;
    let mut mismatches = 0;
    for family in 0..FAMILIES.len() {
        for i in 0..per_family {
            let n = 3 + i % 10;
            let inst = random_instance(family, n, 1_000_000 + (family * per_family + i) as u64);
            if greedy_max_basis(&inst.view, &inst.means).unwrap() != brute_force_opt(&inst.view, &inst.means).unwrap() {
                mismatches += 1;
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(
        mismatches == 0 && fast,
        format!("{per_family} instances x {} families, n in 3..=12, {mismatches} mismatches, {time}", FAMILIES.len()),
    )
}

fn gap_duality() -> Outcome {
    let start = Instant::now();
    let count = 500;
    let (mut elements, mut worst) = (0, 0.0f64);
    let mut bad = 0;
    for i in 0..count {
        let inst = random_instance(i % FAMILIES.len(), 3 + i % 8, 2_000_000 + i as u64);
        for &e in inst.view.ground() {
            let (a, b) = (gap(&inst.view, e, &inst.means).unwrap(), gap_alt(&inst.view, e, &inst.means).unwrap());
            elements += 1;
            if a.is_infinite() || b.is_infinite() {
                bad += usize::from(a != b);
            } else {
                worst = worst.max((a - b).abs());
                bad += usize::from((a - b).abs() > 1e-12);
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start);
    outcome(
        bad == 0 && fast,
        format!("{count} instances, {elements} elements, {bad} disagreements, max diff {worst:.1e}, {time}"),
    )
}

fn prop1_golden() -> Outcome {
    let start = Instant::now();
    let inst = builtin("prop1").unwrap().build().unwrap();
    let basis = ids([2, 3]);
    let elementwise = is_elementwise_eps_optimal(&inst.view, &basis, &inst.means, 0.3).unwrap();
    let eps_optimal = is_eps_optimal(&inst.view, &basis, &inst.means, 0.3).unwrap();
    let (fast, time) = within(Duration::from_secs(1), start);
    outcome(
        elementwise && !eps_optimal && fast,
        format!("I={{a3,a4}} at eps=0.3: elementwise {elementwise} (want true), eps-optimal {eps_optimal} (want false), {time}"),
    )
}

/// Optimality and ε-optimality characterizations over every basis.
fn basis_conditions_agree(m: &MatroidView, w: &[f64], eps: f64) -> bool {
    let ground = m.ground().to_vec();
    let opt = brute_force_opt(m, w).unwrap();
    for basis in enumerate_bases(m).unwrap() {
        let is_opt = basis == opt;
        let unblocked = basis.iter().all(|&e| !m.blocks(&above(&ground, w, w[e.index()]), e).unwrap());
        let outside = minus(&ground, &basis);
        let blocked = outside.iter().all(|&e| m.blocks(&at_least(&basis, w, w[e.index()]), e).unwrap());
        let levels = |shift: f64, probes: &[f64]| {
            probes.iter().all(|&r| {
                let top = at_least(&basis, w, r);
                let d = union(&at_least(&outside, w, r + shift), &top);
                m.restrict(&d).unwrap().is_basis(&top).unwrap()
            })
        };
        let exact_probes: Vec<f64> = w.to_vec();
        let exact_levels = levels(0.0, &exact_probes);
        if [unblocked, blocked, exact_levels, is_optimal_basis(m, &basis, w).unwrap()].iter().any(|&c| c != is_opt) {
            return false;
        }

        let by_blocking = is_eps_optimal(m, &basis, w, eps).unwrap();
        let by_cost = is_eps_optimal_modified_cost(m, &basis, w, eps).unwrap();
        let mut breaks: Vec<f64> = basis.iter().map(|e| w[e.index()]).collect();
        breaks.extend(outside.iter().map(|e| w[e.index()] - eps));
        breaks.sort_by(f64::total_cmp);
        let mut probes = vec![breaks[0] - 1.0, breaks[breaks.len() - 1] + 1.0];
        probes.extend(breaks.windows(2).map(|p| (p[0] + p[1]) / 2.0));
        if by_blocking != by_cost || by_blocking != levels(eps, &probes) {
            return false;
        }
    }
    true
}

fn lemma_equivalences() -> Outcome {
    let start = Instant::now();
    let per_family = 60;
    let epsilons = [0.0, 0.0137, 0.0491, 0.1123, 0.2871];
    let (mut bad, mut checked) = (0, 0);
    for family in 0..FAMILIES.len() {
        for i in 0..per_family {
            let inst = random_instance(family, 3 + i % 7, 3_000_000 + (family * per_family + i) as u64);
            for &eps in &epsilons {
                checked += 1;
                bad += usize::from(!basis_conditions_agree(&inst.view, &inst.means, eps));
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(300), start);
    outcome(bad == 0 && fast, format!("{checked} (instance, eps) pairs, n in 3..=9, {bad} disagreements, {time}"))
}

fn pac_success() -> Outcome {
    let start = Instant::now();
    let inst = Generator::RandomUniform { n: 60, k: 5, gap_floor: 0.05 }.generate(5).unwrap().build().unwrap();
    let report = trials(&inst, Algorithm::Pac, 0.15, 0.1, 200, 5, ConstantsProfile::desk());
    let r = &report.summary.eps_optimal;
    let (fast, time) = within(Duration::from_secs(600), start);
    outcome(
        r.lcb95 >= 0.85 && fast,
        format!("{}/{} eps-optimal, LCB {:.3} (need 0.85), {time}", r.successes, r.trials, r.lcb95),
    )
}

fn exact_success() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["prop1", "ladder10"] {
        let inst = builtin(name).unwrap().build().unwrap();
        let report = trials(&inst, Algorithm::Exact, 0.1, 0.1, 100, 6, ConstantsProfile::paper());
        let r = &report.summary.exact;
        pass &= r.lcb95 >= 0.8;
        parts.push(format!("{name} {}/{} LCB {:.3}", r.successes, r.trials, r.lcb95));
    }
    let (fast, time) = within(Duration::from_secs(900), start);
    outcome(pass && fast, format!("{} (need 0.8), {time}", parts.join(", ")))
}

fn avg_success() -> Outcome {
    let start = Instant::now();
    let inst = Generator::RandomUniform { n: 2000, k: 3, gap_floor: 0.0 }.generate(7).unwrap().build().unwrap();
    let report = trials(&inst, Algorithm::Avgpac, 0.3, 0.2, 100, 7, ConstantsProfile::paper());
    let r = &report.summary.avg_eps;
    let (fast, time) = within(Duration::from_secs(1200), start);
    outcome(
        r.lcb95 >= 0.7 && fast,
        format!("{}/{} average-eps-optimal, LCB {:.3} (need 0.7), {time}", r.successes, r.trials, r.lcb95),
    )
}

fn scaling() -> Outcome {
    let start = Instant::now();
    let inst = builtin("prop1").unwrap().build().unwrap();
    let naive = |eps: f64| {
        let mut s = SamplingSession::new(inst.arms().to_vec(), 8);
        naive_one(&mut s, &inst.view, eps, 0.1).unwrap().samples as f64
    };
    let naive_ratio = naive(0.05) / naive(0.1);

    let median = |min_gap: f64| {
        let inst = Generator::Ladder { pairs: 3, min_gap }.generate(8).unwrap().build().unwrap();
        let report = trials(&inst, Algorithm::Exact, 0.1, 0.1, 50, 8, ConstantsProfile::paper());
        report.summary.samples.expect("trials ran").median
    };
    let exact_ratio = median(0.05) / median(0.1);
    let (fast, time) = within(Duration::from_secs(900), start);
    outcome(
        (3.8..=4.2).contains(&naive_ratio) && (3.0..=6.0).contains(&exact_ratio) && fast,
        format!("naive1 eps/2 ratio {naive_ratio:.3} (need 3.8..4.2), exact halved-gap median ratio {exact_ratio:.3} (need 3.0..6.0), {time}"),
    )
}

fn f_good_domination() -> Outcome {
    let start = Instant::now();
    let (p, n, draws) = (0.3, 40usize, 1000);
    let pn = (p * n as f64).round() as u64;
    let generators = [
        Generator::RandomUniform { n, k: 3, gap_floor: 0.0 },
        Generator::RandomPartition { n, groups: 4 },
        Generator::RandomLaminar { n },
        Generator::RandomGraphic { vertices: 8, edges: n },
        Generator::RandomTransversal { workers: n, tasks: 5 },
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let inst = g.generate(9 + i as u64).unwrap().build().unwrap();
        let k = inst.rank();
        let ground = inst.view.ground().to_vec();
        let mut rng = SamplingSession::new(inst.arms().to_vec(), 900 + i as u64);
        let (mut total, mut over) = (0usize, 0usize);
        for _ in 0..draws {
            let f = rng.bernoulli_subset(&ground, p);
            let c = count_f_good(&inst.view, &f, &inst.means).unwrap();
            total += c;
            over += usize::from(c as u64 > pn);
        }
        let mean = total as f64 / draws as f64;
        let tail = if k == 0 { 0.0 } else { Binomial::new(p, pn).unwrap().cdf(k as u64 - 1) };
        let over_rate = over as f64 / draws as f64;
        pass &= mean <= 1.2 * k as f64 / p && over_rate <= 2.0 * tail;
        parts.push(format!(
            "{} k={k} mean {mean:.2}/{:.2} tail {over_rate:.3}/{:.3}",
            inst.spec.matroid.family(),
            1.2 * k as f64 / p,
            2.0 * tail
        ));
    }
    let (fast, time) = within(Duration::from_secs(300), start);
    outcome(pass && fast, format!("{}, {time}", parts.join("; ")))
}

fn noiseless_end_to_end() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for name in BUILTINS {
        let inst = builtin(name).unwrap().noiseless().build().unwrap();
        let eps = inst.min_mean_spacing().map_or(0.1, |s| (s / 2.0).min(0.1));
        for algorithm in Algorithm::ALL {
            let report = trials(&inst, algorithm, eps, 0.1, 5, 10, ConstantsProfile::desk());
            if report.summary.exact.rate != 1.0 {
                failures.push(format!("{algorithm} on {name}"));
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    let combos = BUILTINS.len() * Algorithm::ALL.len();
    let detail = if failures.is_empty() {
        format!("{combos} builtin x algorithm pairs exact, {time}")
    } else {
        format!("not exact: {}, {time}", failures.join(", "))
    };
    outcome(failures.is_empty() && fast, detail)
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let mut identical = true;
    for (name, algorithm) in [("prop1", Algorithm::Exact), ("ladder10", Algorithm::Pac), ("graphic", Algorithm::Avgpac)]
    {
        let inst = builtin(name).unwrap().build().unwrap();
        let render = |jobs: usize| {
            let mut config = RunConfig::new(algorithm, 0.1, 0.1, 20, 11);
            config.jobs = jobs;
            config.trace = true;
            let report = run_trials(&inst, &config).unwrap().without_timing();
            let mut csv = Vec::new();
            report.write_csv(&mut csv).unwrap();
            (report.to_json(), csv)
        };
        identical &= render(1) == render(1) && render(1) == render(2);
    }
    let (fast, time) = within(Duration::from_secs(120), start);
    outcome(identical && fast, format!("JSON and CSV identical across repeats and job counts: {identical}, {time}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("oracle agreement", oracle_agreement),
        ("gap duality", gap_duality),
        ("prop1 golden", prop1_golden),
        ("optimality characterizations", lemma_equivalences),
        ("pac success probability", pac_success),
        ("exact success probability", exact_success),
        ("average-eps success", avg_success),
        ("inverse-square scaling", scaling),
        ("f-good domination", f_good_domination),
        ("noiseless end-to-end", noiseless_end_to_end),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let o = check();
        println!("{} {id:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
