use serde::Serialize;

use super::{scaled_lift, sigma_index, LiftedState, ScaleGrid, ScalingSection};
use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{c, re, C64};
use crate::thermal::{gibbs_state, heisenberg_evolve, Dynamics, KMS_TIME_GRID};

/// Fiber Hamiltonians `H(λ)` over a scale grid.
#[derive(Debug, Clone)]
pub struct ScaledDynamicsFamily {
    grid: ScaleGrid,
    fibers: Vec<Dynamics>,
}

impl ScaledDynamicsFamily {
    /// `H(λ) = H` on every fiber.
    pub fn constant(grid: ScaleGrid, d: &Dynamics) -> Self {
        Self { grid, fibers: vec![d.clone(); grid.len()] }
    }

    /// `H(λ) = H₀ + λ^{d_m} m₀ M`, explicit breaking by a scaled mass term.
    pub fn mass_scaled(
        grid: ScaleGrid,
        h0: &AlgebraElement,
        mass_term: &AlgebraElement,
        m0: f64,
        d_m: f64,
        tol: f64,
    ) -> Result<Self> {
        let fibers = (0..grid.len())
            .map(|k| {
                let m = grid.lambda(k).powf(d_m) * m0;
                Dynamics::from_element(&h0.try_add(&mass_term.scale_real(m))?, tol)
            })
            .collect::<Result<_>>()?;
        Ok(Self { grid, fibers })
    }

    pub fn grid(&self) -> &ScaleGrid {
        &self.grid
    }

    pub fn shape(&self) -> &BlockShape {
        self.fibers[0].shape()
    }

    pub fn fiber(&self, k: usize) -> &Dynamics {
        &self.fibers[k]
    }
}

/// `(α̂_t Â)(λ) = α^{(λ)}_{λt}(Â(λ))`.
pub fn lifted_dynamics(family: &ScaledDynamicsFamily, t: C64, a: &ScalingSection) -> Result<ScalingSection> {
    if a.grid() != family.grid() {
        return Err(Error::InvalidArgument("scale grids differ".into()));
    }
    let values = a
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| heisenberg_evolve(&family.fibers[k], v, t * family.grid.lambda(k)))
        .collect::<Result<_>>()?;
    ScalingSection::new(family.grid, values)
}

/// Worst fiber distance between `σ̂_{r^m}∘α̂_t` and `α̂_{r^m t}∘σ̂_{r^m}`,
/// split into fibers whose source index stays in the window and fibers that
/// wrap (cyclic mode only; there the two sides use different dilation factors).
pub fn sigma_alpha_covariance(
    family: &ScaledDynamicsFamily,
    m: i64,
    t: f64,
    a: &ScalingSection,
) -> Result<(f64, f64)> {
    let grid = family.grid;
    let lhs = sigma_index(m, &lifted_dynamics(family, re(t), a)?)?;
    let mu = grid.ratio().powi(m as i32);
    let rhs = lifted_dynamics(family, re(mu * t), &sigma_index(m, a)?)?;
    let (mut inside, mut wrapped) = (0.0f64, 0.0f64);
    for k in 0..grid.len() {
        let d = lhs.value(k).distance(rhs.value(k))?;
        if grid.wraps(k, m) {
            wrapped = wrapped.max(d);
        } else {
            inside = inside.max(d);
        }
    }
    Ok((inside, wrapped))
}

/// KMS defect of a lifted state with respect to `α̂` at inverse temperature
/// `beta`, over probe sections and the standard time grid.
pub fn lifted_kms_defect(
    state: &LiftedState,
    family: &ScaledDynamicsFamily,
    beta: f64,
    probes: &[(ScalingSection, ScalingSection)],
) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("KMS check needs at least one probe pair".into()));
    }
    let mut worst = 0.0f64;
    for (a, b) in probes {
        for &t in &KMS_TIME_GRID {
            let lhs = state.evaluate(&a.try_mul(&lifted_dynamics(family, c(t, beta), b)?)?)?;
            let rhs = state.evaluate(&lifted_dynamics(family, re(t), b)?.try_mul(a)?)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRecord {
    pub lambda: f64,
    pub beta_in: f64,
    pub beta_out: f64,
    pub kms_defect: f64,
}

/// KMS defect of `ω_β∘δ̂_λ` at `target` with respect to the lifted constant
/// family, probing with constant sections.
pub fn scaled_gibbs_defect(
    d: &Dynamics,
    beta: f64,
    grid: ScaleGrid,
    lambda: f64,
    target: f64,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<f64> {
    let lifted = scaled_lift(&gibbs_state(d, beta)?, grid, lambda)?;
    let family = ScaledDynamicsFamily::constant(grid, d);
    let sections: Vec<(ScalingSection, ScalingSection)> = probes
        .iter()
        .map(|(a, b)| (ScalingSection::constant(grid, a), ScalingSection::constant(grid, b)))
        .collect();
    lifted_kms_defect(&lifted, &family, target, &sections)
}

/// The scaled lift of `gibbs_state(H, β)` at `λ`, checked for the KMS
/// condition at `β/λ`.
pub fn rg_flow_of_gibbs(
    d: &Dynamics,
    beta: f64,
    grid: ScaleGrid,
    lambda: f64,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<FlowRecord> {
    let beta_out = beta / lambda;
    let kms_defect = scaled_gibbs_defect(d, beta, grid, lambda, beta_out, probes)?;
    Ok(FlowRecord { lambda, beta_in: beta, beta_out, kms_defect })
}

/// [`rg_flow_of_gibbs`] at every grid point, in increasing `λ`.
pub fn flow_table(
    d: &Dynamics,
    beta: f64,
    grid: ScaleGrid,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<Vec<FlowRecord>> {
    grid.points().into_iter().map(|l| rg_flow_of_gibbs(d, beta, grid, l, probes)).collect()
}
