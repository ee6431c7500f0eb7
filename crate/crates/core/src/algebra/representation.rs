use super::{center, commutant, minimal_central_projections, AlgebraElement, BlockShape, CentralSpectrum, OperatorSubalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// A linear map `π: ⊕ M_{nᵢ} → M_d`, stored by its values on matrix units.
#[derive(Debug, Clone)]
pub struct Representation {
    source: BlockShape,
    dim: usize,
    images: Vec<CMatrix>,
}

impl Representation {
    pub fn new(source: BlockShape, dim: usize, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != source.algebra_dim() {
            return Err(Error::InvalidArgument(format!(
                "representation needs {} matrix-unit images, got {}",
                source.algebra_dim(),
                images.len()
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("representation space must be nonzero".into()));
        }
        if images.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::InvalidArgument(format!("images must be {dim}x{dim}")));
        }
        Ok(Self { source, dim, images })
    }

    /// Tabulates a linear map given as a closure.
    pub fn from_fn(source: &BlockShape, dim: usize, f: impl Fn(&AlgebraElement) -> CMatrix) -> Result<Self> {
        let images = (0..source.algebra_dim())
            .map(|i| f(&AlgebraElement::matrix_unit(source, i)))
            .collect();
        Self::new(source.clone(), dim, images)
    }

    pub fn source(&self) -> &BlockShape {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target_shape(&self) -> BlockShape {
        BlockShape::full(self.dim).expect("dim > 0")
    }

    pub fn unit_images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<CMatrix> {
        self.source.check_same(a.shape())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (coef, img) in a.to_vector().iter().zip(&self.images) {
            if coef.norm_sqr() > 0.0 {
                out += img * *coef;
            }
        }
        Ok(out)
    }

    pub fn apply_element(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        AlgebraElement::new(self.target_shape(), vec![self.apply(a)?])
    }

    /// Worst violation of unitality, *-preservation and multiplicativity on
    /// matrix units.
    pub fn homomorphism_defect(&self) -> f64 {
        let s = &self.source;
        let n = s.algebra_dim();
        let one = self.apply(&AlgebraElement::unit(s)).expect("own shape");
        let mut worst = (one - CMatrix::identity(self.dim, self.dim)).norm();
        for i in 0..n {
            let (bi, ri, ci) = s.locate(i);
            let adj_idx = s.offset(bi) + ci * s.block_dim(bi) + ri;
            worst = worst.max((self.images[i].adjoint() - &self.images[adj_idx]).norm());
            for j in 0..n {
                let (bj, rj, cj) = s.locate(j);
                let prod = &self.images[i] * &self.images[j];
                let expected = if bi == bj && ci == rj {
                    self.images[s.offset(bi) + ri * s.block_dim(bi) + cj].clone()
                } else {
                    CMatrix::zeros(self.dim, self.dim)
                };
                worst = worst.max((prod - expected).norm());
            }
        }
        worst
    }

    /// Basis of `ker π` as elements of the source algebra.
    pub fn kernel(&self, tol: f64) -> Result<Vec<AlgebraElement>> {
        let n = self.source.algebra_dim();
        let d2 = self.dim * self.dim;
        let mut system = CMatrix::zeros(d2, n);
        for (i, img) in self.images.iter().enumerate() {
            let v = CVector::from_iterator(d2, linalg::flatten(img));
            system.set_column(i, &v);
        }
        linalg::nullspace(&system, tol)
            .iter()
            .map(|v| AlgebraElement::from_vector(&self.source, v))
            .collect()
    }

    /// `π₁ ⊕ π₂` on the direct sum of the two spaces.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.source.check_same(&other.source)?;
        let d = self.dim + other.dim;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Representation::new(self.source.clone(), d, images)
    }

    /// `π(A)` as a subalgebra of `M_d`; in finite dimensions this is `π(A)″`.
    pub fn represented_algebra(&self, tol: f64) -> Result<OperatorSubalgebra> {
        let shape = self.target_shape();
        let elems = self
            .images
            .iter()
            .map(|m| AlgebraElement::new(shape.clone(), vec![m.clone()]))
            .collect::<Result<Vec<_>>>()?;
        OperatorSubalgebra::from_spanning(&shape, &elems, tol)
    }

    pub fn structure(&self, tol: f64) -> Result<RepresentationStructure> {
        RepresentationStructure::analyze(self.clone(), tol)
    }
}

/// A representation together with `π(A)″`, its commutant, centre and central
/// spectrum. Each spectrum point is tied to the ambient blocks it carries.
#[derive(Debug, Clone)]
pub struct RepresentationStructure {
    pub representation: Representation,
    pub represented_algebra: OperatorSubalgebra,
    pub commutant: OperatorSubalgebra,
    pub centre: OperatorSubalgebra,
    pub central_spectrum: CentralSpectrum,
    point_blocks: Vec<Vec<usize>>,
}

impl RepresentationStructure {
    pub fn analyze(representation: Representation, tol: f64) -> Result<Self> {
        let represented_algebra = representation.represented_algebra(tol)?;
        let commutant = commutant(&represented_algebra, tol)?;
        let centre = center(&represented_algebra, tol)?;
        let mut central_spectrum = minimal_central_projections(&centre, tol)?;
        let source = representation.source().clone();
        let block_images: Vec<CMatrix> = (0..source.num_blocks())
            .map(|i| representation.apply(&AlgebraElement::block_identity(&source, i)))
            .collect::<Result<_>>()?;
        let mut point_blocks = Vec::with_capacity(central_spectrum.len());
        for q in central_spectrum.projections() {
            let q = q.block(0);
            let blocks: Vec<usize> = block_images
                .iter()
                .enumerate()
                .filter(|(_, p)| (*p * q).norm() > 0.5)
                .map(|(i, _)| i)
                .collect();
            point_blocks.push(blocks);
        }
        let labels = point_blocks
            .iter()
            .map(|bs| {
                let parts: Vec<String> = bs.iter().map(|b| format!("block{b}")).collect();
                parts.join("+")
            })
            .collect();
        central_spectrum.relabel(labels)?;
        Ok(Self { representation, represented_algebra, commutant, centre, central_spectrum, point_blocks })
    }

    /// Ambient blocks whose identity maps onto (part of) each spectrum point.
    pub fn point_blocks(&self) -> &[Vec<usize>] {
        &self.point_blocks
    }

    /// The ambient central projection `Σ_{i ∈ point} Pᵢ` of spectrum point `k`.
    pub fn ambient_projection(&self, k: usize) -> AlgebraElement {
        let s = self.representation.source();
        let mut p = AlgebraElement::zero(s);
        for &b in &self.point_blocks[k] {
            p = &p + &AlgebraElement::block_identity(s, b);
        }
        p
    }

    pub fn is_factor(&self) -> bool {
        self.centre.dim() == 1
    }

    /// Ambient blocks not annihilated by the representation.
    pub fn charged_blocks(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.point_blocks.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Orthonormal basis (Frobenius) of `{T : T π₁(a) = π₂(a) T ∀a}`, `T: ℋ₁ → ℋ₂`,
/// read off the off-diagonal corner of the commutant of `π₁ ⊕ π₂`.
pub fn intertwiner_space(r1: &Representation, r2: &Representation, tol: f64) -> Result<Vec<CMatrix>> {
    let sum = r1.direct_sum(r2)?;
    let comm = commutant(&sum.represented_algebra(tol)?, tol)?;
    let (d1, d2) = (r1.dim(), r2.dim());
    let corners: Vec<CVector> = comm
        .basis()
        .iter()
        .map(|x| {
            let t = x.block(0).view((d1, 0), (d2, d1)).into_owned();
            CVector::from_iterator(d1 * d2, linalg::flatten(&t))
        })
        .collect();
    Ok(linalg::orthonormalize(&corners, tol.sqrt())
        .into_iter()
        .map(|v| CMatrix::from_row_slice(d2, d1, v.as_slice()))
        .collect())
}
