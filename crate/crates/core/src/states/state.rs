use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix, C64, DEFAULT_TOL};

/// A state `ω(a) = Σᵢ Tr(ρᵢ aᵢ)` given by one positive block density per block.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional {
    shape: BlockShape,
    densities: Vec<CMatrix>,
}

impl StateFunctional {
    /// Validated constructor: Hermitian, positive semidefinite to `tol`, total
    /// trace one to `tol`.
    pub fn new(shape: BlockShape, densities: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let elem = AlgebraElement::new(shape.clone(), densities).map_err(|e| Error::InvalidState(e.to_string()))?;
        let densities = elem.into_blocks();
        let mut total = 0.0;
        for (i, rho) in densities.iter().enumerate() {
            let herm = linalg::hermiticity_defect(rho);
            if herm > tol.max(1e-12) * rho.norm().max(1.0) {
                return Err(Error::InvalidState(format!("block {i} is not Hermitian (defect {herm:.3e})")));
            }
            let (vals, _) = linalg::eigh(rho);
            if let Some(&min) = vals.first() {
                if min < -tol.max(1e-12) {
                    return Err(Error::InvalidState(format!("block {i} has negative eigenvalue {min:.3e}")));
                }
            }
            total += rho.trace().re;
        }
        if (total - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::InvalidState(format!("total trace is {total}, expected 1")));
        }
        let densities = densities.iter().map(linalg::hermitian_part).collect();
        Ok(Self { shape, densities })
    }

    /// Normalizes positive block matrices by their total trace.
    pub fn from_unnormalized(shape: BlockShape, densities: Vec<CMatrix>) -> Result<Self> {
        let total: f64 = densities.iter().map(|d| d.trace().re).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidState("densities have zero total trace".into()));
        }
        let scaled = densities.into_iter().map(|d| d * re(1.0 / total)).collect();
        Self::new(shape, scaled, 1e-9)
    }

    /// Normalized trace `Tr/Σnᵢ`.
    pub fn maximally_mixed(shape: &BlockShape) -> Self {
        let total: usize = shape.dims().iter().sum();
        let densities = shape
            .dims()
            .iter()
            .map(|&n| CMatrix::identity(n, n) * re(1.0 / total as f64))
            .collect();
        Self { shape: shape.clone(), densities }
    }

    /// State supported on a single block with density `rho` (trace one).
    pub fn on_block(shape: &BlockShape, block: usize, rho: CMatrix) -> Result<Self> {
        if block >= shape.num_blocks() {
            return Err(Error::InvalidArgument(format!("block {block} out of range")));
        }
        let mut densities: Vec<CMatrix> = shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        densities[block] = rho;
        Self::new(shape.clone(), densities, 1e-9)
    }

    /// Vector state `a ↦ ⟨v, aᵢ v⟩` on block `block`.
    pub fn vector_state(shape: &BlockShape, block: usize, v: &[C64]) -> Result<Self> {
        let v = linalg::CVector::from_column_slice(v);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v.unscale(n);
        Self::on_block(shape, block, &v * v.adjoint())
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn densities(&self) -> &[CMatrix] {
        &self.densities
    }

    pub fn density(&self, i: usize) -> &CMatrix {
        &self.densities[i]
    }

    /// The density as an algebra element (useful for trace pairings).
    pub fn density_element(&self) -> AlgebraElement {
        AlgebraElement::new(self.shape.clone(), self.densities.clone()).expect("validated shape")
    }

    /// `Tr ρᵢ` for each block.
    pub fn block_weights(&self) -> Vec<f64> {
        self.densities.iter().map(|d| d.trace().re).collect()
    }

    /// Blocks with `Tr ρᵢ > tol`.
    pub fn charged_blocks(&self, tol: f64) -> Vec<usize> {
        self.block_weights()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Factor state: exactly one charged block.
    pub fn is_factor(&self, tol: f64) -> bool {
        self.charged_blocks(tol).len() == 1
    }

    /// Every block density is strictly positive definite.
    pub fn is_faithful(&self, tol: f64) -> bool {
        self.min_eigenvalue() > tol
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.densities
            .iter()
            .flat_map(|d| linalg::eigh(d).0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance(&self, other: &StateFunctional) -> Result<f64> {
        self.density_element().distance(&other.density_element())
    }
}

/// `ω(a) = Σᵢ Tr(ρᵢ aᵢ)`.
pub fn evaluate(state: &StateFunctional, a: &AlgebraElement) -> Result<C64> {
    state.shape.check_same(a.shape())?;
    Ok(state
        .densities
        .iter()
        .zip(a.blocks())
        .map(|(rho, ai)| (rho * ai).trace())
        .sum())
}

/// Convex combination `Σ wₖ ωₖ`.
pub fn mix_states(pairs: &[(f64, StateFunctional)]) -> Result<StateFunctional> {
    let (_, first) = pairs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
    let mut total = 0.0;
    let mut densities: Vec<CMatrix> = first.shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
    for (w, s) in pairs {
        if !(*w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidArgument(format!("mixture weight {w} is not a nonnegative number")));
        }
        first.shape.check_same(&s.shape)?;
        total += w;
        for (d, rho) in densities.iter_mut().zip(&s.densities) {
            *d += rho * re(*w);
        }
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("mixture weights sum to {total}, expected 1")));
    }
    StateFunctional::new(first.shape.clone(), densities, DEFAULT_TOL)
}
