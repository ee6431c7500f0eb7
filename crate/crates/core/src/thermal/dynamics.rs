use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{self, c, re, CMatrix, C64};
use crate::states::StateFunctional;

/// `α_t(a) = e^{itH} a e^{−itH}` with `H = ⊕ Hᵢ` (ħ = 1).
///
/// Each block Hamiltonian is diagonalized once; evolution in complex time is
/// then an entrywise phase in the eigenbasis.
#[derive(Debug, Clone)]
pub struct Dynamics {
    shape: BlockShape,
    hamiltonians: Vec<CMatrix>,
    spectra: Vec<(Vec<f64>, CMatrix)>,
}

impl Dynamics {
    pub fn new(shape: BlockShape, hamiltonians: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let h = AlgebraElement::new(shape.clone(), hamiltonians)?;
        if !h.is_self_adjoint(tol) {
            return Err(Error::InvalidMatrix("Hamiltonian is not self-adjoint".into()));
        }
        let hamiltonians: Vec<CMatrix> = h.blocks().iter().map(linalg::hermitian_part).collect();
        let spectra = hamiltonians.iter().map(linalg::eigh).collect();
        Ok(Self { shape, hamiltonians, spectra })
    }

    pub fn from_element(h: &AlgebraElement, tol: f64) -> Result<Self> {
        Self::new(h.shape().clone(), h.blocks().to_vec(), tol)
    }

    /// `H = 0`.
    pub fn trivial(shape: &BlockShape) -> Self {
        let zeros = shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self::new(shape.clone(), zeros, 0.0).expect("zero is self-adjoint")
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn hamiltonians(&self) -> &[CMatrix] {
        &self.hamiltonians
    }

    pub fn hamiltonian(&self) -> AlgebraElement {
        AlgebraElement::new(self.shape.clone(), self.hamiltonians.clone()).expect("validated")
    }

    /// Eigenvalues of every block, ascending within each block.
    pub fn energies(&self) -> Vec<Vec<f64>> {
        self.spectra.iter().map(|(v, _)| v.clone()).collect()
    }

    /// The dynamics generated by `λH`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let spectra = self
            .spectra
            .iter()
            .map(|(v, w)| (v.iter().map(|e| e * lambda).collect(), w.clone()))
            .collect();
        Self {
            shape: self.shape.clone(),
            hamiltonians: self.hamiltonians.iter().map(|h| h * re(lambda)).collect(),
            spectra,
        }
    }

    pub fn evolve(&self, a: &AlgebraElement, z: C64) -> Result<AlgebraElement> {
        heisenberg_evolve(self, a, z)
    }
}

/// Entire continuation `α_z(a) = e^{izH} a e^{−izH}`, computed blockwise as
/// `V (e^{iz(Eⱼ−Eₖ)} (V*aV)ⱼₖ) V*`.
pub fn heisenberg_evolve(d: &Dynamics, a: &AlgebraElement, z: C64) -> Result<AlgebraElement> {
    d.shape.check_same(a.shape())?;
    let i_z = c(0.0, 1.0) * z;
    Ok(a.map_blocks(|i, ai| {
        let (e, v) = &d.spectra[i];
        let mut m = v.adjoint() * ai * v;
        for j in 0..e.len() {
            for k in 0..e.len() {
                m[(j, k)] *= (i_z * (e[j] - e[k])).exp();
            }
        }
        v * m * v.adjoint()
    }))
}

/// `ρ = ⊕ e^{−βHᵢ}/Z` with one partition function over all blocks.
pub fn gibbs_state(d: &Dynamics, beta: f64) -> Result<StateFunctional> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive and finite, got {beta}; use ground_state for the vacuum"
        )));
    }
    let e_min = d.spectra.iter().flat_map(|(e, _)| e.iter().copied()).fold(f64::INFINITY, f64::min);
    let mut blocks: Vec<CMatrix> = d
        .spectra
        .iter()
        .map(|(e, v)| linalg::spectral_sum(e, v, |x| re((-beta * (x - e_min)).exp())))
        .collect();
    let z: f64 = blocks.iter().map(|b| b.trace().re).sum();
    for b in &mut blocks {
        *b *= re(1.0 / z);
    }
    StateFunctional::new(d.shape.clone(), blocks, 1e-9)
}

/// Normalized projector onto the global lowest-energy eigenspace (`β = ∞`).
/// Levels within `tol` of the minimum count as degenerate.
pub fn ground_state(d: &Dynamics, tol: f64) -> Result<StateFunctional> {
    let e_min = d.spectra.iter().flat_map(|(e, _)| e.iter().copied()).fold(f64::INFINITY, f64::min);
    let scale = tol * e_min.abs().max(1.0);
    let mut blocks: Vec<CMatrix> = d
        .spectra
        .iter()
        .map(|(e, v)| linalg::spectral_sum(e, v, |x| re(if x - e_min <= scale { 1.0 } else { 0.0 })))
        .collect();
    let n: f64 = blocks.iter().map(|b| b.trace().re).sum();
    for b in &mut blocks {
        *b *= re(1.0 / n);
    }
    StateFunctional::new(d.shape.clone(), blocks, 1e-9)
}
