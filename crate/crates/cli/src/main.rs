use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use matroid_explore::harness::{resolve_instance, run_trials, Algorithm, Generator, Instance, RunConfig, BUILTINS};
use matroid_explore::verify::{self, ENUMERATION_LIMIT};
use matroid_explore::{greedy_max_basis, is_optimal_basis, isolated_and_loops, ConstantsProfile, Error, Matroid};

#[derive(Parser)]
#[command(name = "mexplore", version, about = "Pure-exploration bandits under matroid constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of one algorithm and write a JSON report plus a CSV.
    Run(RunArgs),
    /// Cross-check the matroid and optimality oracles on one instance.
    Verify {
        #[arg(long)]
        instance: String,
    },
    /// Print the gap of every arm.
    Gaps {
        #[arg(long)]
        instance: String,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Write a generated instance file.
    Generate {
        #[command(subcommand)]
        generator: GenerateKind,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// List the builtin instances.
    Builtins,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Instance file, or `builtin:NAME`.
    #[arg(long)]
    instance: String,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ConstantsArg::Paper)]
    constants: ConstantsArg,
    /// Report path; the CSV goes next to it with a `.csv` extension.
    #[arg(long)]
    out: PathBuf,
    /// Also write per-round records as JSON lines to `<out>.trace.jsonl`.
    #[arg(long)]
    trace: bool,
    #[arg(long, env = "MEXPLORE_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Per-trial pull limit; trials that hit it count as failures.
    #[arg(long)]
    budget: Option<u64>,
    /// Replace every arm by a point mass at its mean.
    #[arg(long)]
    noiseless: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Exact,
    Pac,
    Avgpac,
    Naive1,
    Naive2,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Exact => Algorithm::Exact,
            AlgoArg::Pac => Algorithm::Pac,
            AlgoArg::Avgpac => Algorithm::Avgpac,
            AlgoArg::Naive1 => Algorithm::Naive1,
            AlgoArg::Naive2 => Algorithm::Naive2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantsArg {
    Paper,
    Desk,
}

#[derive(Subcommand)]
enum GenerateKind {
    UniformGap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
    },
    Ladder {
        #[arg(long)]
        pairs: usize,
        #[arg(long)]
        min_gap: f64,
    },
    RandomUniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        gap_floor: f64,
    },
    RandomGraphic {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
    },
    RandomPartition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        groups: usize,
    },
    RandomLaminar {
        #[arg(long)]
        n: usize,
    },
    RandomTransversal {
        #[arg(long)]
        workers: usize,
        #[arg(long)]
        tasks: usize,
    },
}

impl From<GenerateKind> for Generator {
    fn from(g: GenerateKind) -> Self {
        match g {
            GenerateKind::UniformGap { n, k, eps } => Generator::UniformGap { n, k, eps },
            GenerateKind::Ladder { pairs, min_gap } => Generator::Ladder { pairs, min_gap },
            GenerateKind::RandomUniform { n, k, gap_floor } => Generator::RandomUniform { n, k, gap_floor },
            GenerateKind::RandomGraphic { vertices, edges } => Generator::RandomGraphic { vertices, edges },
            GenerateKind::RandomPartition { n, groups } => Generator::RandomPartition { n, groups },
            GenerateKind::RandomLaminar { n } => Generator::RandomLaminar { n },
            GenerateKind::RandomTransversal { workers, tasks } => Generator::RandomTransversal { workers, tasks },
        }
    }
}

/// Exit status: 1 for configuration problems, 2 for I/O, 3 when `verify`
/// finds a disagreement.
enum Failure {
    Core(Error),
    Mismatch(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(n)) => {
            eprintln!("error: {n} oracle check(s) disagreed");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(args) => run(args),
        Command::Verify { instance } => verify_instance(&load(&instance)?),
        Command::Gaps { instance, json } => gaps(&load(&instance)?, json),
        Command::Generate { generator, seed, out } => {
            let spec = Generator::from(generator).generate(seed)?;
            spec.build()?;
            match out {
                Some(path) => spec.save(&path)?,
                None => println!("{}", spec.to_json()),
            }
            Ok(())
        }
        Command::Builtins => {
            for name in BUILTINS {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn load(arg: &str) -> Result<Instance, Error> {
    resolve_instance(arg)?.build()
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut spec = resolve_instance(&args.instance)?;
    if args.noiseless {
        spec = spec.noiseless();
    }
    let instance = spec.build()?;
    let constants = match args.constants {
        ConstantsArg::Paper => ConstantsProfile::paper(),
        ConstantsArg::Desk => ConstantsProfile::desk(),
    };
    let config = RunConfig {
        algorithm: args.algo.into(),
        eps: args.eps,
        delta: args.delta,
        trials: args.trials,
        seed: args.seed,
        constants,
        jobs: args.jobs,
        budget: args.budget,
        trace: args.trace,
    };
    let report = run_trials(&instance, &config)?;

    report.write_json(&args.out)?;
    report.write_csv_file(&args.out.with_extension("csv"))?;
    if args.trace {
        write_trace(&report, &trace_path(&args.out))?;
    }

    let s = &report.summary;
    println!(
        "{} on {}: {}/{} successes (rate {:.3}, 95% lower bound {:.3}), {} aborted",
        config.algorithm, report.instance, s.success.successes, s.trials, s.success.rate, s.success.lcb95, s.aborted
    );
    if let Some(q) = &s.samples {
        println!("samples: min {:.0}, median {:.0}, p90 {:.0}, max {:.0}", q.min, q.median, q.p90, q.max);
    }
    Ok(())
}

fn trace_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".trace.jsonl");
    out.with_file_name(name)
}

fn write_trace(report: &matroid_explore::harness::Report, path: &Path) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    for t in &report.trials {
        for record in t.transcript.iter().flatten() {
            let mut value = serde_json::to_value(record).map_err(Error::from)?;
            value["trial"] = t.trial.into();
            writeln!(w, "{value}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn verify_instance(inst: &Instance) -> Result<(), Failure> {
    let m = &inst.view;
    let w = &inst.means;
    let (isolated, loops) = isolated_and_loops(m);
    println!(
        "{}: {} family, {} arms, rank {}, {} isolated, {} loops",
        inst.name(),
        inst.spec.matroid.family(),
        m.len(),
        m.full_rank(),
        isolated.len(),
        loops.len()
    );
    let greedy = greedy_max_basis(m, w)?;
    let mut failures = 0;
    let mut check = |label: &str, ok: bool| {
        println!("{} {label}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    check("greedy optimum passes the blocking test", is_optimal_basis(m, &greedy, w)?);
    if m.len() > ENUMERATION_LIMIT {
        println!("skip enumeration checks ({} arms > {ENUMERATION_LIMIT})", m.len());
    } else {
        check("greedy optimum equals brute force", verify::brute_force_opt(m, w)? == greedy);
        if !inst.spec.allow_ties {
            let mut agree = true;
            for &e in m.ground().iter().filter(|e| !loops.contains(e)) {
                let (a, b) = (verify::gap(m, e, w)?, verify::gap_alt(m, e, w)?);
                agree &= a == b || (a - b).abs() <= 1e-12;
            }
            check("both gap characterizations agree", agree);
            let mut agree = true;
            for basis in verify::enumerate_bases(m)? {
                agree &= is_optimal_basis(m, &basis, w)? == (basis == greedy);
            }
            check("blocking test accepts exactly the optimum", agree);
        }
    }
    if failures > 0 {
        Err(Failure::Mismatch(failures))
    } else {
        Ok(())
    }
}

fn gaps(inst: &Instance, json: bool) -> Result<(), Failure> {
    let profile = verify::gap_profile(&inst.view, &inst.means)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&profile).map_err(Error::from)?);
        return Ok(());
    }
    println!("{:>7}  {:>8}  {:>10}  opt", "element", "mean", "gap");
    for g in &profile.entries {
        let gap = if g.gap.is_finite() { format!("{:.6}", g.gap) } else { "inf".to_string() };
        println!(
            "{:>7}  {:>8.4}  {:>10}  {}",
            g.element,
            inst.means[g.element.index()],
            gap,
            if g.in_opt { "yes" } else { "no" }
        );
    }
    for e in &profile.loops {
        println!("{e:>7}  loop");
    }
    if let Some(g) = profile.min_gap() {
        println!("min gap {g:.6}");
    }
    Ok(())
}
