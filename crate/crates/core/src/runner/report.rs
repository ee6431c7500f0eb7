use serde::Serialize;

use super::schema::Tolerances;
use crate::scaling::{FlowRecord, ScaleGrid};
use crate::symmetry::{AugmentedCentreReport, BreakingVerdict};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub scenario: String,
    pub tolerances: Tolerances,
    pub tasks: Vec<TaskOutcome>,
}

impl Report {
    /// 0 when every task succeeded, otherwise the largest failure code.
    pub fn exit_code(&self) -> i32 {
        self.tasks.iter().filter_map(|t| t.error.as_ref().map(|e| e.code)).max().unwrap_or(0)
    }

    pub fn flow_tables(&self) -> impl Iterator<Item = &FlowResult> {
        self.tasks.iter().filter_map(|t| match &t.result {
            Some(TaskResult::Scaleflow(f)) => Some(f),
            _ => None,
        })
    }

    pub fn divergence_tables(&self) -> impl Iterator<Item = &DivergenceResult> {
        self.tasks.iter().filter_map(|t| match &t.result {
            Some(TaskResult::Divergence(d)) => Some(d),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskOutcome {
    pub index: usize,
    pub kind: &'static str,
    pub status: TaskStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<TaskResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<TaskError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Sectors(SectorsResult),
    Ssb(Box<SsbResult>),
    Kmscheck(KmsResult),
    Scaleflow(FlowResult),
    Divergence(DivergenceResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub label: String,
    pub block: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSectors {
    pub state: String,
    pub factor: bool,
    pub components: Vec<ComponentSummary>,
    pub reassembly_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRelation {
    pub state_1: String,
    pub state_2: String,
    pub disjoint: bool,
    pub quasi_equivalent: bool,
    /// Block whose central projection separates the two states.
    pub witness_block: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorsResult {
    pub states: Vec<StateSectors>,
    pub pairs: Vec<PairRelation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedSummary {
    pub hilbert_dimension: usize,
    pub hat_covariance_defect: f64,
    pub bar_covariance_defect: f64,
    /// Present when the GNS representation of the state is factorial.
    pub augmented_centre: Option<AugmentedCentreReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsbResult {
    pub state: String,
    pub group: String,
    pub verdict: BreakingVerdict,
    pub central_points: usize,
    pub orbits: Vec<Vec<usize>>,
    pub labels: Vec<String>,
    pub unbroken_subgroup: Vec<usize>,
    pub cosets: usize,
    pub covariance_defect: f64,
    pub augmented_fixed_dim: usize,
    pub subgroup_fixed_dim: usize,
    pub induced: InducedSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsRow {
    pub beta: f64,
    pub defect: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsResult {
    pub state: String,
    pub hamiltonian: String,
    pub rows: Vec<KmsRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult {
    pub hamiltonian: String,
    pub grid: ScaleGrid,
    pub rows: Vec<FlowRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub state_1: String,
    pub state_2: String,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceResult {
    pub reference: String,
    pub rows: Vec<DivergenceRow>,
}
