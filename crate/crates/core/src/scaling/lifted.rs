use serde::Serialize;

use super::{ScaleGrid, ScalingSection};
use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{re, CMatrix, C64};
use crate::states::{evaluate, mix_states, StateFunctional};

/// A probability measure on the grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleMeasure {
    #[serde(skip)]
    grid: ScaleGrid,
    weights: Vec<f64>,
}

impl ScaleMeasure {
    pub fn new(grid: ScaleGrid, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::InvalidArgument(format!("need {} weights, got {}", grid.len(), weights.len())));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("scale weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("scale weights sum to {total}, expected 1")));
        }
        Ok(Self { grid, weights })
    }

    pub fn dirac(grid: ScaleGrid, index: usize) -> Result<Self> {
        if index >= grid.len() {
            return Err(Error::InvalidArgument(format!("grid index {index} out of range")));
        }
        let weights = (0..grid.len()).map(|k| if k == index { 1.0 } else { 0.0 }).collect();
        Self::new(grid, weights)
    }

    pub fn dirac_at(grid: ScaleGrid, lambda: f64) -> Result<Self> {
        Self::dirac(grid, grid.index_of(lambda)?)
    }

    pub fn grid(&self) -> &ScaleGrid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Indices with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&k| self.weights[k] > 0.0).collect()
    }
}

/// `μ̂(Â) = Σ_k μ_k Â(λ_k)`.
pub fn conditional_expectation_mu(mu: &ScaleMeasure, a: &ScalingSection) -> Result<AlgebraElement> {
    if mu.grid != *a.grid() {
        return Err(Error::InvalidArgument("scale grids differ".into()));
    }
    let mut acc = AlgebraElement::zero(a.shape());
    for (k, &w) in mu.weights.iter().enumerate() {
        if w > 0.0 {
            acc = acc.try_add(&a.value(k).scale_real(w))?;
        }
    }
    Ok(acc)
}

/// `ω̂ = Σ_k ρ_k (ω_k ⊗ δ_{λ_k})`, a state on the scaling algebra.
#[derive(Debug, Clone)]
pub struct LiftedState {
    measure: ScaleMeasure,
    fibers: Vec<Option<StateFunctional>>,
    shape: BlockShape,
}

impl LiftedState {
    /// Fiber states must be given exactly where the weight is positive.
    pub fn new(measure: ScaleMeasure, fibers: Vec<Option<StateFunctional>>) -> Result<Self> {
        if fibers.len() != measure.weights.len() {
            return Err(Error::InvalidArgument("one fiber slot per grid point required".into()));
        }
        let mut shape = None;
        for (k, (w, f)) in measure.weights.iter().zip(&fibers).enumerate() {
            match (w > &0.0, f) {
                (true, Some(s)) => {
                    if let Some(sh) = &shape {
                        s.shape().check_same(sh)?;
                    } else {
                        shape = Some(s.shape().clone());
                    }
                }
                (true, None) => return Err(Error::InvalidState(format!("fiber {k} has weight but no state"))),
                (false, _) => {}
            }
        }
        let shape = shape.ok_or_else(|| Error::InvalidState("lifted state has no support".into()))?;
        let fibers = fibers
            .into_iter()
            .zip(&measure.weights)
            .map(|(f, &w)| if w > 0.0 { f } else { None })
            .collect();
        Ok(Self { measure, fibers, shape })
    }

    pub fn grid(&self) -> &ScaleGrid {
        &self.measure.grid
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn measure(&self) -> &ScaleMeasure {
        &self.measure
    }

    pub fn fiber(&self, k: usize) -> Option<&StateFunctional> {
        self.fibers[k].as_ref()
    }

    pub fn evaluate(&self, a: &ScalingSection) -> Result<C64> {
        if a.grid() != self.grid() {
            return Err(Error::InvalidArgument("scale grids differ".into()));
        }
        let mut acc = re(0.0);
        for (k, f) in self.fibers.iter().enumerate() {
            if let Some(s) = f {
                acc += evaluate(s, a.value(k))? * self.measure.weights[k];
            }
        }
        Ok(acc)
    }

    /// `ω̂∘σ̂_{r^m}`: the weight at index `k` moves to index `k + m`.
    pub fn compose_sigma_index(&self, m: i64) -> Result<Self> {
        let grid = *self.grid();
        let mut weights = vec![0.0; grid.len()];
        let mut fibers = vec![None; grid.len()];
        for k in self.measure.support() {
            let j = grid.shifted(k, m).ok_or(Error::WindowOverflow { shift: m })?;
            weights[j] = self.measure.weights[k];
            fibers[j] = self.fibers[k].clone();
        }
        Self::new(ScaleMeasure::new(grid, weights)?, fibers)
    }

    pub fn compose_sigma(&self, mu: f64) -> Result<Self> {
        self.compose_sigma_index(self.grid().exponent_of(mu)?)
    }

    /// The same functional as a state on `F^{⊕(2K+1)}`.
    pub fn as_state(&self) -> Result<StateFunctional> {
        let mut densities = Vec::new();
        for (k, f) in self.fibers.iter().enumerate() {
            match f {
                Some(s) => densities.extend(s.densities().iter().map(|d| d * re(self.measure.weights[k]))),
                None => densities.extend(self.shape.dims().iter().map(|&n| CMatrix::zeros(n, n))),
            }
        }
        StateFunctional::new(self.shape.repeat(self.grid().len())?, densities, 1e-9)
    }

    /// Reads a state on `F^{⊕(2K+1)}` back as a lifted state.
    pub fn from_state(grid: ScaleGrid, base: &BlockShape, state: &StateFunctional) -> Result<Self> {
        let expected = base.repeat(grid.len())?;
        state.shape().check_same(&expected)?;
        let nb = base.num_blocks();
        let mut weights = Vec::with_capacity(grid.len());
        let mut fibers = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let dens = &state.densities()[k * nb..(k + 1) * nb];
            let w: f64 = dens.iter().map(|d| d.trace().re).sum();
            if w > 0.0 {
                fibers.push(Some(StateFunctional::from_unnormalized(base.clone(), dens.to_vec())?));
            } else {
                fibers.push(None);
            }
            weights.push(w.max(0.0));
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(ScaleMeasure::new(grid, weights)?, fibers)
    }
}

/// `μ̂*(ω) = ω ⊗ μ`.
pub fn lift_state(state: &StateFunctional, mu: &ScaleMeasure) -> Result<LiftedState> {
    let fibers = mu.weights.iter().map(|&w| (w > 0.0).then(|| state.clone())).collect();
    LiftedState::new(mu.clone(), fibers)
}

/// `ω̂_λ = ω̂∘σ̂_λ = ω∘δ̂_λ`.
pub fn scaled_lift(state: &StateFunctional, grid: ScaleGrid, lambda: f64) -> Result<LiftedState> {
    lift_state(state, &ScaleMeasure::dirac_at(grid, lambda)?)
}

/// The canonical lift `ω ⊗ δ_1`.
pub fn canonical_lift(state: &StateFunctional, grid: ScaleGrid) -> Result<LiftedState> {
    lift_state(state, &ScaleMeasure::dirac(grid, grid.unit_index())?)
}

/// Convex combination of lifted states.
pub fn mix_lifted(parts: &[(f64, LiftedState)]) -> Result<LiftedState> {
    let (_, first) = parts.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
    let grid = *first.grid();
    let states = parts
        .iter()
        .map(|(w, s)| Ok((*w, s.as_state()?)))
        .collect::<Result<Vec<_>>>()?;
    LiftedState::from_state(grid, first.shape(), &mix_states(&states)?)
}

/// `ρ_ω̂ = κ*(ω̂)`, the weights `ω̂(χ_k)` of the grid indicators.
pub fn center_restriction(state: &LiftedState) -> Result<ScaleMeasure> {
    let grid = *state.grid();
    let weights = (0..grid.len())
        .map(|k| Ok(state.evaluate(&ScalingSection::indicator(grid, state.shape(), k)?)?.re))
        .collect::<Result<Vec<_>>>()?;
    ScaleMeasure::new(grid, weights)
}

#[derive(Debug, Clone)]
pub struct Disintegration {
    /// `(k, ρ_k, ω_k)` for every grid index with `ρ_k > tol`.
    pub components: Vec<(usize, f64, StateFunctional)>,
    /// `ι*(ω̂) = Σ ρ_k ω_k`.
    pub pullback: StateFunctional,
}

/// Radon-Nikodym components `ω_k(a) = ω̂(χ_k ι(a)) / ρ_k`.
pub fn central_disintegration(state: &LiftedState, tol: f64) -> Result<Disintegration> {
    let grid = *state.grid();
    let rho = center_restriction(state)?;
    let shape = state.shape().clone();
    let mut components = Vec::new();
    for (k, &w) in rho.weights().iter().enumerate() {
        if w <= tol {
            continue;
        }
        let chi = ScalingSection::indicator(grid, &shape, k)?;
        let mut densities = Vec::with_capacity(shape.num_blocks());
        for (b, &n) in shape.dims().iter().enumerate() {
            // Read the density off the functional: ρ(i,j) = ω(e_ji).
            let mut d = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut e = CMatrix::zeros(n, n);
                    e[(j, i)] = re(1.0);
                    let a = AlgebraElement::from_block(&shape, b, e)?;
                    let probe = chi.try_mul(&ScalingSection::constant(grid, &a))?;
                    d[(i, j)] = state.evaluate(&probe)? / w;
                }
            }
            densities.push(d);
        }
        components.push((k, w, StateFunctional::new(shape.clone(), densities, 1e-9)?));
    }
    let total: f64 = components.iter().map(|c| c.1).sum();
    let parts: Vec<(f64, StateFunctional)> = components.iter().map(|(_, w, s)| (w / total, s.clone())).collect();
    Ok(Disintegration { components, pullback: mix_states(&parts)? })
}

/// `ι*(ω̂)`: the state `a ↦ ω̂(ι(a))`.
pub fn pullback(state: &LiftedState, tol: f64) -> Result<StateFunctional> {
    Ok(central_disintegration(state, tol)?.pullback)
}

/// A grid indicator `χ_k` with `ω̂₁(χ_k) = 1` and `ω̂₂(χ_k) = 0`, if the two
/// scale supports are disjoint. Returns the index and the section.
pub fn scale_sector_witness(a: &LiftedState, b: &LiftedState) -> Result<Option<(usize, ScalingSection)>> {
    if a.grid() != b.grid() {
        return Err(Error::InvalidArgument("scale grids differ".into()));
    }
    let (sa, sb) = (a.measure.support(), b.measure.support());
    if sa.iter().any(|k| sb.contains(k)) {
        return Ok(None);
    }
    // With disjoint supports the indicator of a's whole support separates; a
    // single index suffices when a is supported at one point.
    let grid = *a.grid();
    let f: Vec<f64> = (0..grid.len()).map(|k| if sa.contains(&k) { 1.0 } else { 0.0 }).collect();
    Ok(Some((sa[0], ScalingSection::scalar(grid, a.shape(), &f)?)))
}

/// Orthogonality of the scale-centre supports of two lifted states.
pub fn scale_disjoint(a: &LiftedState, b: &LiftedState) -> Result<bool> {
    Ok(scale_sector_witness(a, b)?.is_some())
}
