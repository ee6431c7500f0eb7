//! Scenario-driven batch runs: parse a JSON scenario, execute its tasks and
//! emit a report as JSON, text or CSV.

mod emit;
mod report;
mod schema;
mod tasks;

use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use emit::{emit_report, render_csv, render_json, render_text};
pub use report::*;
pub use tasks::ssb_analysis;
pub use schema::{
    parse_matrix, ActionSpec, AlgebraSpec, Entry, GeneratorSpec, GroupPreset, GroupSpec, HamiltonianSpec, MatrixSpec,
    MixtureComponent, Scenario, ScenarioSpec, StateKind, StateSpec, TaskSpec, Tolerances,
};

/// Failures that end a run, each with its process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("tolerance breach: {0}")]
    Tolerance(String),
    #[error("io error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) | RunError::Io(_) => 2,
            RunError::Hypothesis(_) => 3,
            RunError::Tolerance(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            RunError::Schema(_) => "schema",
            RunError::Hypothesis(_) => "hypothesis",
            RunError::Tolerance(_) => "tolerance",
            RunError::Io(_) => "io",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
    Csv,
}

impl FromStr for Format {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, RunError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(RunError::Schema(format!("unsupported format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Overrides the scenario's acceptance tolerance.
    pub tolerance: Option<f64>,
    /// Worker threads for independent tasks.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { tolerance: None, jobs: 1 }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    Scenario::parse(&text)
}

pub fn run_scenario(path: &Path, options: RunOptions) -> Result<Report, RunError> {
    run(load_scenario(path)?, options)
}

/// Runs every task. A failing task is recorded with its error and no partial
/// result; the others still run.
pub fn run(mut scenario: Scenario, options: RunOptions) -> Result<Report, RunError> {
    if let Some(t) = options.tolerance {
        if !(t > 0.0) {
            return Err(RunError::Schema(format!("tolerance must be positive, got {t}")));
        }
        scenario.tolerances.acceptance = t;
    }
    let n = scenario.tasks.len();
    let slots: Vec<Mutex<Option<TaskOutcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= n {
            break;
        }
        let task = &scenario.tasks[i];
        let outcome = match tasks::run_task(&scenario, task) {
            Ok(r) => TaskOutcome { index: i, kind: task.kind(), status: TaskStatus::Ok, result: Some(r), error: None },
            Err(e) => TaskOutcome {
                index: i,
                kind: task.kind(),
                status: TaskStatus::Failed,
                result: None,
                error: Some(TaskError { code: e.exit_code(), kind: e.kind(), message: e.to_string() }),
            },
        };
        *slots[i].lock().expect("unpoisoned") = Some(outcome);
    };
    let jobs = options.jobs.clamp(1, n.max(1));
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }
    let tasks = slots.into_iter().map(|m| m.into_inner().expect("unpoisoned").expect("every task ran")).collect();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        scenario: scenario.name,
        tolerances: scenario.tolerances,
        tasks,
    })
}
