use super::{evaluate, StateFunctional};
use crate::algebra::{AlgebraElement, Representation, RepresentationStructure};
use crate::error::Result;
use crate::linalg::{self, re, CMatrix, CVector};

/// GNS triple `(π_ω, ℋ_ω, Ω)` of a state together with the structure of
/// `π_ω(A)″`.
///
/// `ℋ_ω = A / N_ω` with `N_ω = {a : ω(a*a) = 0}` is realized isometrically by
/// `[a] ↦ (aᵢ ρᵢ^{1/2})ᵢ`, whose range on block `i` is the `nᵢ × rᵢ` matrices
/// supported on the range of `ρᵢ`. So `ℋ_ω ≅ ⊕ᵢ ℂ^{nᵢ} ⊗ ℂ^{rᵢ}`,
/// `π_ω(a) = ⊕ᵢ aᵢ ⊗ 1_{rᵢ}` and `Ω = ⊕ᵢ ρᵢ^{1/2}`.
#[derive(Debug, Clone)]
pub struct GnsData {
    structure: RepresentationStructure,
    cyclic_vector: CVector,
    ranks: Vec<usize>,
}

impl GnsData {
    pub fn gns_dimension(&self) -> usize {
        self.structure.representation.dim()
    }

    pub fn representation(&self) -> &Representation {
        &self.structure.representation
    }

    pub fn structure(&self) -> &RepresentationStructure {
        &self.structure
    }

    pub fn cyclic_vector(&self) -> &CVector {
        &self.cyclic_vector
    }

    /// Rank of each block density (the multiplicity of block `i` in `π_ω`).
    pub fn multiplicities(&self) -> &[usize] {
        &self.ranks
    }

    /// `⟨Ω, X Ω⟩` for an operator on the GNS space.
    pub fn vector_expectation(&self, x: &CMatrix) -> linalg::C64 {
        self.cyclic_vector.dotc(&(x * &self.cyclic_vector))
    }

    /// `max |ω(e) − ⟨Ω, π(e) Ω⟩|` over matrix units.
    pub fn reproduction_defect(&self, state: &StateFunctional) -> Result<f64> {
        let shape = state.shape();
        let mut worst = 0.0f64;
        for i in 0..shape.algebra_dim() {
            let e = AlgebraElement::matrix_unit(shape, i);
            let lhs = evaluate(state, &e)?;
            let rhs = self.vector_expectation(&self.representation().apply(&e)?);
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }

    /// Dimension of `span{π(e)Ω}`; equals the GNS dimension iff Ω is cyclic.
    pub fn cyclic_span_dim(&self, tol: f64) -> usize {
        let mut set = linalg::OrthonormalSet::new();
        for img in self.representation().unit_images() {
            set.try_add(&(img * &self.cyclic_vector), tol);
        }
        set.len()
    }
}

/// GNS construction for `state`. Eigenvalues of block densities at or below
/// `tol` are treated as zero.
pub fn gns(state: &StateFunctional, tol: f64) -> Result<GnsData> {
    let shape = state.shape().clone();
    let mut supports: Vec<(CMatrix, Vec<f64>)> = Vec::with_capacity(shape.num_blocks());
    for rho in state.densities() {
        let (vals, vecs) = linalg::eigh(rho);
        let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > tol).collect();
        let mut w = CMatrix::zeros(rho.nrows(), keep.len());
        let mut p = Vec::with_capacity(keep.len());
        for (j, &k) in keep.iter().enumerate() {
            w.set_column(j, &vecs.column(k));
            p.push(vals[k]);
        }
        supports.push((w, p));
    }
    let ranks: Vec<usize> = supports.iter().map(|(_, p)| p.len()).collect();
    let dim: usize = shape.dims().iter().zip(&ranks).map(|(n, r)| n * r).sum();

    let mut omega = CVector::zeros(dim);
    let mut off = 0;
    for ((w, p), &n) in supports.iter().zip(shape.dims()) {
        let r = p.len();
        for k in 0..n {
            for j in 0..r {
                omega[off + k * r + j] = w[(k, j)] * re(p[j].sqrt());
            }
        }
        off += n * r;
    }

    let ranks_for_rep = ranks.clone();
    let representation = Representation::from_fn(&shape, dim, move |a| {
        let mut m = CMatrix::zeros(dim, dim);
        let mut off = 0;
        for (i, &r) in ranks_for_rep.iter().enumerate() {
            let n = a.block(i).nrows();
            if r > 0 {
                let piece = a.block(i).kronecker(&CMatrix::identity(r, r));
                m.view_mut((off, off), (n * r, n * r)).copy_from(&piece);
            }
            off += n * r;
        }
        m
    })?;
    let structure = representation.structure(tol)?;
    Ok(GnsData { structure, cyclic_vector: omega, ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockShape;
    use crate::linalg::{random_complex_matrix, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn faithful_state_on_m2_is_standard_form() {
        let s = BlockShape::full(2).unwrap();
        let w = StateFunctional::new(
            s.clone(),
            vec![CMatrix::from_row_slice(2, 2, &[re(0.7), re(0.1), re(0.1), re(0.3)])],
            1e-12,
        )
        .unwrap();
        let g = gns(&w, DEFAULT_TOL).unwrap();
        assert_eq!(g.gns_dimension(), 4);
        assert_eq!(g.structure().represented_algebra.dim(), 4);
        assert_eq!(g.structure().centre.dim(), 1);
        assert!(g.reproduction_defect(&w).unwrap() < 1e-14);
        assert_eq!(g.cyclic_span_dim(1e-10), 4);
    }

    #[test]
    fn vector_state_gns_dimension_two() {
        let s = BlockShape::full(2).unwrap();
        let w = StateFunctional::vector_state(&s, 0, &[re(1.0), re(0.0)]).unwrap();
        let g = gns(&w, DEFAULT_TOL).unwrap();
        assert_eq!(g.gns_dimension(), 2);
        assert_eq!(g.structure().centre.dim(), 1);
        assert!(g.reproduction_defect(&w).unwrap() < 1e-14);
    }

    #[test]
    fn block_one_state_kills_block_two() {
        let s = BlockShape::new(vec![2, 3]).unwrap();
        let w = StateFunctional::on_block(&s, 0, CMatrix::identity(2, 2) * re(0.5)).unwrap();
        let g = gns(&w, DEFAULT_TOL).unwrap();
        assert_eq!(g.structure().represented_algebra.dim(), 4);
        assert_eq!(g.representation().kernel(DEFAULT_TOL).unwrap().len(), 9);
        assert_eq!(g.structure().point_blocks(), &[vec![0]]);
    }

    #[test]
    fn random_state_is_a_homomorphism_with_cyclic_vector() {
        let s = BlockShape::new(vec![1, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dens: Vec<CMatrix> = s
            .dims()
            .iter()
            .map(|&n| {
                let g = random_complex_matrix(&mut rng, n, n);
                &g * g.adjoint()
            })
            .collect();
        let w = StateFunctional::from_unnormalized(s, dens).unwrap();
        let g = gns(&w, DEFAULT_TOL).unwrap();
        assert_eq!(g.gns_dimension(), 1 + 4 + 9);
        assert!(g.representation().homomorphism_defect() < 1e-12);
        assert!(g.reproduction_defect(&w).unwrap() < 1e-12);
        assert_eq!(g.cyclic_span_dim(1e-10), g.gns_dimension());
        assert_eq!(g.structure().centre.dim(), 3);
    }
}
