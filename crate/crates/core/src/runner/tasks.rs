use super::report::*;
use super::schema::{Scenario, TaskSpec, Tolerances};
use super::RunError;
use crate::error::Error;
use crate::infogeo::{alpha_divergence, AlphaParams};
use crate::scaling::flow_table;
use crate::states::{
    central_decomposition, central_witness, gns, is_disjoint, is_quasi_equivalent, reassembly_error, StateFunctional,
};
use crate::symmetry::{
    augmented_center, average_over_group, classify_breaking, fixed_point_algebra, induce_covariant_representation,
    maximal_unbroken_subgroup, AugmentedAlgebra, AutomorphicAction,
};
use crate::thermal::{default_probes, kms_defect};

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(m) => RunError::Tolerance(m),
            Error::ShapeMismatch(..)
            | Error::InvalidShape(_)
            | Error::InvalidMatrix(_)
            | Error::InvalidArgument(_)
            | Error::InvalidGroup(_)
            | Error::InvalidAction(_) => RunError::Schema(e.to_string()),
            other => RunError::Hypothesis(other.to_string()),
        }
    }
}

fn breach(what: &str, value: f64, tol: f64) -> Result<(), RunError> {
    if value > tol || value.is_nan() {
        return Err(RunError::Tolerance(format!("{what} {value:.3e} exceeds {tol:.1e}")));
    }
    Ok(())
}

pub(super) fn run_task(scenario: &Scenario, task: &TaskSpec) -> Result<TaskResult, RunError> {
    match task {
        TaskSpec::Sectors { states } => sectors(scenario, states).map(TaskResult::Sectors),
        TaskSpec::Ssb { state } => {
            let action = scenario.action.as_ref().ok_or_else(|| RunError::Schema("ssb needs an action".into()))?;
            ssb_analysis(action, scenario.state(state)?, state, scenario.tolerances).map(|r| TaskResult::Ssb(Box::new(r)))
        }
        TaskSpec::Kmscheck { state, hamiltonian, betas, probes, seed } => {
            let omega = scenario.state(state)?;
            let d = scenario.hamiltonian(hamiltonian)?;
            let probes = default_probes(&scenario.shape, *probes, *seed);
            let rows = betas
                .iter()
                .map(|&beta| {
                    let defect = kms_defect(omega, d, beta, &probes)?;
                    Ok(KmsRow { beta, defect, within_tolerance: defect <= scenario.tolerances.acceptance })
                })
                .collect::<Result<_, RunError>>()?;
            Ok(TaskResult::Kmscheck(KmsResult { state: state.clone(), hamiltonian: hamiltonian.clone(), rows }))
        }
        TaskSpec::Scaleflow { hamiltonian, beta, probes, seed } => {
            let d = scenario.hamiltonian(hamiltonian)?;
            let grid = scenario.scale_grid.ok_or_else(|| RunError::Schema("missing scale_grid".into()))?;
            let probes = default_probes(&scenario.shape, *probes, *seed);
            let rows = flow_table(d, *beta, grid, &probes)?;
            for r in &rows {
                breach(&format!("KMS defect of the scaled Gibbs state at λ = {}", r.lambda), r.kms_defect, scenario.tolerances.acceptance)?;
            }
            Ok(TaskResult::Scaleflow(FlowResult { hamiltonian: hamiltonian.clone(), grid, rows }))
        }
        TaskSpec::Divergence { pairs, reference, exponents } => {
            let phi0 = scenario.state(reference)?;
            let mut rows = Vec::new();
            for [a, b] in pairs {
                for &p in exponents {
                    let params = AlphaParams::from_p(p)?;
                    let d = alpha_divergence(scenario.state(a)?, scenario.state(b)?, params, phi0, scenario.tolerances.rank)?;
                    breach("negative divergence", -d, scenario.tolerances.acceptance)?;
                    rows.push(DivergenceRow {
                        state_1: a.clone(),
                        state_2: b.clone(),
                        p: params.p(),
                        q: params.q(),
                        alpha: params.alpha(),
                        divergence: d,
                    });
                }
            }
            Ok(TaskResult::Divergence(DivergenceResult { reference: reference.clone(), rows }))
        }
    }
}

fn sectors(scenario: &Scenario, names: &[String]) -> Result<SectorsResult, RunError> {
    let tol = scenario.tolerances;
    let mut states = Vec::with_capacity(names.len());
    for name in names {
        let omega = scenario.state(name)?;
        let dec = central_decomposition(omega, tol.rank)?;
        let err = reassembly_error(omega, &dec)?;
        breach(&format!("reassembly error of '{name}'"), err, tol.acceptance)?;
        for (i, a) in dec.components.iter().enumerate() {
            if !a.state.is_factor(tol.rank) {
                return Err(RunError::Tolerance(format!("component {i} of '{name}' is not a factor state")));
            }
            for b in &dec.components[i + 1..] {
                if !is_disjoint(&a.state, &b.state, tol.rank)? {
                    return Err(RunError::Tolerance(format!("components of '{name}' are not mutually disjoint")));
                }
            }
        }
        states.push(StateSectors {
            state: name.clone(),
            factor: omega.is_factor(tol.rank),
            components: dec
                .components
                .iter()
                .map(|c| ComponentSummary { label: c.label.clone(), block: c.block, weight: c.weight })
                .collect(),
            reassembly_error: err,
        });
    }
    let mut pairs = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let (x, y) = (scenario.state(a)?, scenario.state(b)?);
            pairs.push(PairRelation {
                state_1: a.clone(),
                state_2: b.clone(),
                disjoint: is_disjoint(x, y, tol.rank)?,
                quasi_equivalent: is_quasi_equivalent(x, y, tol.rank)?,
                witness_block: central_witness(x, y, tol.rank)?.map(|(k, _)| k),
            });
        }
    }
    Ok(SectorsResult { states, pairs })
}

/// Breaking analysis of `omega` under `action`.
///
/// Classification runs on the G-averaged state, whose representation is
/// G-stable; the unbroken subgroup and the induced representation use the
/// state itself.
pub fn ssb_analysis(
    action: &AutomorphicAction,
    omega: &StateFunctional,
    name: &str,
    tol: Tolerances,
) -> Result<SsbResult, RunError> {
    let shape = action.shape().clone();

    let averaged = average_over_group(action, &omega.density_element())?;
    let invariant = StateFunctional::new(shape, averaged.into_blocks(), tol.rank.sqrt())?;
    let orbit_gns = gns(&invariant, tol.rank)?;
    let class = classify_breaking(action, orbit_gns.structure(), tol.rank)?;

    let g = gns(omega, tol.rank)?;
    let unbroken = maximal_unbroken_subgroup(action, g.structure(), tol.rank)?;
    breach("covariance defect of (π, U)", unbroken.covariance_defect, tol.acceptance)?;
    let subgroup = unbroken.subgroup().clone();

    let augmented = AugmentedAlgebra::new(action.clone(), &subgroup)?;
    let augmented_fixed_dim = augmented.fixed_point_algebra(tol.rank)?.dim();
    let subgroup_fixed_dim = fixed_point_algebra(action, &subgroup, tol.rank)?.dim();
    if augmented_fixed_dim != subgroup_fixed_dim {
        return Err(RunError::Tolerance(format!(
            "G-fixed augmented algebra has dimension {augmented_fixed_dim}, H-fixed algebra {subgroup_fixed_dim}"
        )));
    }

    let induced = induce_covariant_representation(&augmented, &unbroken.pair, tol.rank)?;
    let hat = induced.hat_covariance_defect()?;
    let bar = induced.bar_covariance_defect()?;
    breach("covariance defect of the induced representation", hat.max(bar), tol.acceptance)?;
    let augmented_centre = if g.structure().is_factor() {
        let report = augmented_center(&induced, &unbroken.pair, tol.rank)?;
        if !report.holds() {
            return Err(RunError::Tolerance(format!(
                "augmented centre is not the algebra of functions on the {} cosets: {report:?}",
                report.coset_count
            )));
        }
        Some(report)
    } else {
        None
    };

    Ok(SsbResult {
        state: name.to_string(),
        group: action.group().name().to_string(),
        verdict: class.verdict,
        central_points: class.labels.len(),
        orbits: class.orbits,
        labels: class.labels,
        unbroken_subgroup: subgroup.elements().to_vec(),
        cosets: augmented.cosets().len(),
        covariance_defect: unbroken.covariance_defect,
        augmented_fixed_dim,
        subgroup_fixed_dim,
        induced: InducedSummary {
            hilbert_dimension: induced.hilbert_dimension(),
            hat_covariance_defect: hat,
            bar_covariance_defect: bar,
            augmented_centre,
        },
    })
}
