//! Scenario runner: builds the systems a scenario names, runs its tasks in
//! parallel and assembles a report ordered by task index.

pub mod error;
pub mod report;
pub mod scenario;
mod tasks;

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use error::{HarnessError, Result};
pub use report::{Report, Status, TaskReport};
pub use scenario::{parse_scenario, Scenario, Task};

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text)
}

fn run_task(s: &Scenario, index: usize) -> TaskReport {
    let task = &s.tasks[index];
    let outcome = task
        .system_override()
        .unwrap_or(s.system)
        .build()
        .and_then(|sys| tasks::run(&tasks::Ctx { scenario: s, sys, bounds: s.bounds }, task));
    let (status, outcome) = match outcome {
        Ok(o) => (if o.ok { Status::Pass } else { Status::Fail }, o),
        Err(e) => (Status::Error, report::Outcome { summary: e.to_string(), ..Default::default() }),
    };
    TaskReport {
        index,
        task: task.name().to_string(),
        status,
        summary: outcome.summary,
        measured: outcome.measured,
        witnesses: outcome.witnesses,
        elapsed_ms: None,
    }
}

/// Runs every task; the report also carries the wall time of each.
pub fn run_scenario_timed(s: &Scenario) -> (Report, Vec<Duration>) {
    let results: Vec<(TaskReport, Duration)> = (0..s.tasks.len())
        .into_par_iter()
        .map(|i| {
            let t = Instant::now();
            let r = run_task(s, i);
            (r, t.elapsed())
        })
        .collect();
    let (tasks, times): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let passed = tasks.iter().all(|t| t.status == Status::Pass);
    let report = Report {
        tool: report::TOOL.to_string(),
        version: report::VERSION.to_string(),
        scenario: s.clone(),
        tasks,
        passed,
    };
    (report, times)
}

pub fn run_scenario(s: &Scenario) -> Report {
    run_scenario_timed(s).0
}
