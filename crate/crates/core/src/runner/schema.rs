//! JSON scenario documents and their resolution into library objects.

use serde::{Deserialize, Serialize};

use super::RunError;
use crate::algebra::BlockShape;
use crate::infogeo::AlphaParams;
use crate::linalg::{c, CMatrix};
use crate::scaling::ScaleGrid;
use crate::states::{mix_states, StateFunctional};
use crate::symmetry::{verify_action, AutomorphicAction, Automorphism, FiniteGroup};
use crate::thermal::{gibbs_state, ground_state, Dynamics};

/// A matrix entry: `[re, im]` or a bare real number.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// Row-major nested rows of entries.
pub type MatrixSpec = Vec<Vec<Entry>>;

pub fn parse_matrix(rows: &MatrixSpec, n: usize, what: &str) -> Result<CMatrix, RunError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(RunError::Schema(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Real(x) => c(x, 0.0),
        Entry::Complex([x, y]) => c(x, y),
    }))
}

fn parse_blocks(shape: &BlockShape, blocks: &[MatrixSpec], what: &str) -> Result<Vec<CMatrix>, RunError> {
    if blocks.len() != shape.num_blocks() {
        return Err(RunError::Schema(format!("{what}: expected {} blocks, got {}", shape.num_blocks(), blocks.len())));
    }
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| parse_matrix(b, shape.block_dim(i), &format!("{what} block {i}")))
        .collect()
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Rank, clustering and spectrum matching.
    pub rank: f64,
    /// Threshold for self-consistency checks; larger values are tolerance breaches.
    pub acceptance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank: 1e-10, acceptance: 1e-9 }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub name: String,
    pub blocks: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub state: String,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateKind {
    Densities {
        densities: Vec<MatrixSpec>,
        #[serde(default)]
        normalize: bool,
    },
    Gibbs {
        hamiltonian: String,
        beta: f64,
    },
    Ground {
        hamiltonian: String,
    },
    MaximallyMixed,
    Mixture {
        components: Vec<MixtureComponent>,
    },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct StateSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: StateKind,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Preset(GroupPreset),
    Table { name: String, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupPreset {
    Cyclic { order: usize },
    Dihedral { n: usize },
    Symmetric3,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub element: usize,
    /// Target block of each block; identity if omitted.
    #[serde(default)]
    pub permutation: Option<Vec<usize>>,
    /// Unitary attached to each target block; identities if omitted.
    #[serde(default)]
    pub unitaries: Option<Vec<MatrixSpec>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub generators: Vec<GeneratorSpec>,
}

fn default_probes() -> usize {
    4
}

fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Sectors {
        states: Vec<String>,
    },
    Ssb {
        state: String,
    },
    Kmscheck {
        state: String,
        hamiltonian: String,
        betas: Vec<f64>,
        #[serde(default = "default_probes")]
        probes: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    Scaleflow {
        hamiltonian: String,
        beta: f64,
        #[serde(default = "default_probes")]
        probes: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    Divergence {
        pairs: Vec<[String; 2]>,
        reference: String,
        /// Exponents `p`; `q` is the conjugate.
        exponents: Vec<f64>,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Sectors { .. } => "sectors",
            TaskSpec::Ssb { .. } => "ssb",
            TaskSpec::Kmscheck { .. } => "kmscheck",
            TaskSpec::Scaleflow { .. } => "scaleflow",
            TaskSpec::Divergence { .. } => "divergence",
        }
    }
}

/// The document as written.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: String,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub hamiltonians: Vec<HamiltonianSpec>,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub action: Option<ActionSpec>,
    #[serde(default)]
    pub scale_grid: Option<ScaleGrid>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

/// A scenario with every name resolved and every object constructed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub shape: BlockShape,
    pub hamiltonians: Vec<(String, Dynamics)>,
    pub states: Vec<(String, StateFunctional)>,
    pub action: Option<AutomorphicAction>,
    pub scale_grid: Option<ScaleGrid>,
    pub tolerances: Tolerances,
    pub tasks: Vec<TaskSpec>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, what: &str) -> Result<&'a T, RunError> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, t)| t)
        .ok_or_else(|| RunError::Schema(format!("unknown {what} '{name}'")))
}

fn check_unique<'a>(names: impl Iterator<Item = &'a String>, what: &str) -> Result<(), RunError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(RunError::Schema(format!("duplicate {what} name '{n}'")));
        }
    }
    Ok(())
}

fn schema(e: crate::Error) -> RunError {
    RunError::Schema(e.to_string())
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let spec: ScenarioSpec =
            serde_json::from_str(text).map_err(|e| RunError::Schema(format!("scenario does not parse: {e}")))?;
        Self::resolve(spec)
    }

    pub fn hamiltonian(&self, name: &str) -> Result<&Dynamics, RunError> {
        lookup(&self.hamiltonians, name, "hamiltonian")
    }

    pub fn state(&self, name: &str) -> Result<&StateFunctional, RunError> {
        lookup(&self.states, name, "state")
    }

    pub fn resolve(spec: ScenarioSpec) -> Result<Self, RunError> {
        let shape = BlockShape::new(spec.algebra.blocks.clone()).map_err(schema)?;
        let tol = spec.tolerances;
        if !(tol.rank > 0.0 && tol.acceptance > 0.0) {
            return Err(RunError::Schema("tolerances must be positive".into()));
        }
        check_unique(spec.hamiltonians.iter().map(|h| &h.name), "hamiltonian")?;
        check_unique(spec.states.iter().map(|s| &s.name), "state")?;

        let mut hamiltonians = Vec::new();
        for h in &spec.hamiltonians {
            let blocks = parse_blocks(&shape, &h.blocks, &format!("hamiltonian '{}'", h.name))?;
            let d = Dynamics::new(shape.clone(), blocks, tol.rank.sqrt()).map_err(schema)?;
            hamiltonians.push((h.name.clone(), d));
        }

        // States may refer to earlier states (mixtures) and to hamiltonians.
        let mut states: Vec<(String, StateFunctional)> = Vec::new();
        for s in &spec.states {
            let what = format!("state '{}'", s.name);
            let built = match &s.kind {
                StateKind::Densities { densities, normalize } => {
                    let blocks = parse_blocks(&shape, densities, &what)?;
                    if *normalize {
                        StateFunctional::from_unnormalized(shape.clone(), blocks)
                    } else {
                        StateFunctional::new(shape.clone(), blocks, tol.rank.sqrt())
                    }
                }
                StateKind::Gibbs { hamiltonian, beta } => gibbs_state(lookup(&hamiltonians, hamiltonian, "hamiltonian")?, *beta),
                StateKind::Ground { hamiltonian } => ground_state(lookup(&hamiltonians, hamiltonian, "hamiltonian")?, tol.rank),
                StateKind::MaximallyMixed => Ok(StateFunctional::maximally_mixed(&shape)),
                StateKind::Mixture { components } => {
                    let parts = components
                        .iter()
                        .map(|m| Ok((m.weight, lookup(&states, &m.state, "state")?.clone())))
                        .collect::<Result<Vec<_>, RunError>>()?;
                    mix_states(&parts)
                }
            }
            .map_err(|e| RunError::Schema(format!("{what}: {e}")))?;
            states.push((s.name.clone(), built));
        }

        let action = match (&spec.group, &spec.action) {
            (None, None) => None,
            (Some(_), None) | (None, Some(_)) => {
                return Err(RunError::Schema("'group' and 'action' must be given together".into()))
            }
            (Some(g), Some(a)) => Some(build_action(&shape, g, a, tol.acceptance)?),
        };

        let scenario = Self {
            name: spec.name,
            shape,
            hamiltonians,
            states,
            action,
            scale_grid: spec.scale_grid,
            tolerances: tol,
            tasks: spec.tasks,
        };
        scenario.check_tasks()?;
        Ok(scenario)
    }

    fn check_tasks(&self) -> Result<(), RunError> {
        for (i, task) in self.tasks.iter().enumerate() {
            let ctx = |e: RunError| match e {
                RunError::Schema(m) => RunError::Schema(format!("task {i} ({}): {m}", task.kind())),
                other => other,
            };
            match task {
                TaskSpec::Sectors { states } => {
                    if states.is_empty() {
                        return Err(ctx(RunError::Schema("needs at least one state".into())));
                    }
                    for s in states {
                        self.state(s).map_err(ctx)?;
                    }
                }
                TaskSpec::Ssb { state } => {
                    self.state(state).map_err(ctx)?;
                    if self.action.is_none() {
                        return Err(ctx(RunError::Schema("requires 'group' and 'action'".into())));
                    }
                }
                TaskSpec::Kmscheck { state, hamiltonian, betas, probes, .. } => {
                    self.state(state).map_err(ctx)?;
                    self.hamiltonian(hamiltonian).map_err(ctx)?;
                    if betas.is_empty() || *probes == 0 {
                        return Err(ctx(RunError::Schema("needs at least one β and one probe".into())));
                    }
                }
                TaskSpec::Scaleflow { hamiltonian, beta, probes, .. } => {
                    self.hamiltonian(hamiltonian).map_err(ctx)?;
                    if self.scale_grid.is_none() {
                        return Err(ctx(RunError::Schema("requires 'scale_grid'".into())));
                    }
                    if !(*beta > 0.0 && beta.is_finite()) || *probes == 0 {
                        return Err(ctx(RunError::Schema("needs a finite positive β and at least one probe".into())));
                    }
                }
                TaskSpec::Divergence { pairs, reference, exponents } => {
                    self.state(reference).map_err(ctx)?;
                    for [a, b] in pairs {
                        self.state(a).map_err(ctx)?;
                        self.state(b).map_err(ctx)?;
                    }
                    for &p in exponents {
                        AlphaParams::from_p(p).map_err(|e| ctx(schema(e)))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn build_group(spec: &GroupSpec) -> crate::Result<FiniteGroup> {
    match spec {
        GroupSpec::Preset(GroupPreset::Cyclic { order }) => FiniteGroup::cyclic(*order),
        GroupSpec::Preset(GroupPreset::Dihedral { n }) => FiniteGroup::dihedral(*n),
        GroupSpec::Preset(GroupPreset::Symmetric3) => Ok(FiniteGroup::symmetric3()),
        GroupSpec::Table { name, table } => FiniteGroup::from_table(name.clone(), table.clone()),
    }
}

fn build_action(shape: &BlockShape, group: &GroupSpec, action: &ActionSpec, tol: f64) -> Result<AutomorphicAction, RunError> {
    let group = build_group(group).map_err(schema)?;
    let mut gens = Vec::with_capacity(action.generators.len());
    for (i, g) in action.generators.iter().enumerate() {
        let perm = g.permutation.clone().unwrap_or_else(|| (0..shape.num_blocks()).collect());
        let unitaries = match &g.unitaries {
            Some(u) => parse_blocks(shape, u, &format!("generator {i} unitaries"))?,
            None => shape.dims().iter().map(|&n| CMatrix::identity(n, n)).collect(),
        };
        gens.push((g.element, Automorphism::new(shape.clone(), perm, unitaries).map_err(schema)?));
    }
    let action = AutomorphicAction::from_generators(group, shape, &gens).map_err(schema)?;
    let audit = verify_action(&action, tol);
    if !audit.ok {
        return Err(RunError::Schema(format!(
            "generators do not define a group action (defect {:.3e}: {:?})",
            audit.max_defect, audit.worst
        )));
    }
    Ok(action)
}
