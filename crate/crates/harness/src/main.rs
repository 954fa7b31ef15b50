use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use freefield_harness::{load_scenario, run_scenario_timed, HarnessError, Status};

/// Runs a verification scenario and writes a JSON report.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Args {
    scenario: PathBuf,
    /// Report path; defaults to the scenario's `output`, else stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    max_weight: Option<u32>,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Put per-task wall times into the report (it is then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

fn run(args: Args) -> Result<bool, HarnessError> {
    let mut s = load_scenario(&args.scenario)?;
    if let Some(w) = args.max_weight {
        s.bounds.max_weight = w;
    }
    if let Some(d) = args.max_degree {
        s.bounds.max_degree = d;
    }
    if let Some(seed) = args.seed {
        s.bounds.seed = seed;
    }
    s.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let (mut report, times) = pool.install(|| run_scenario_timed(&s));
    for (t, d) in report.tasks.iter_mut().zip(&times) {
        let status = match t.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        eprintln!("[{}] {} {status} in {:.2?}: {}", t.index, t.task, d, t.summary);
        if args.timings {
            t.elapsed_ms = Some(d.as_millis() as u64);
        }
    }
    let json = report.to_json();
    match args.report.or(s.output.as_ref().map(PathBuf::from)) {
        Some(p) => {
            std::fs::write(&p, json).map_err(|source| HarnessError::Io { path: p.display().to_string(), source })?
        }
        None => print!("{json}"),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(2)
        }
    }
}
