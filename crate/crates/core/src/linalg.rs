//! Dense complex linear algebra helpers shared by every layer.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default relative tolerance for rank, nullspace and clustering decisions.
pub const DEFAULT_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&x| re(x))))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let (values, vectors) = eigh(m);
    spectral_sum(&values, &vectors, f)
}

pub fn spectral_sum(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    scaled * vectors.adjoint()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().copied().fold(0.0, f64::max)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Orthonormal basis of the right nullspace of `a`.
///
/// A singular value counts as zero when it is at most `tol` times the largest
/// one. Tall systems are first reduced with a QR factorization so the SVD only
/// ever sees a square matrix.
pub fn nullspace(a: &CMatrix, tol: f64) -> Vec<CVector> {
    nullspace_with_floor(a, tol, 0.0)
}

/// [`nullspace`] where singular values at or below `floor` also count as zero,
/// for systems whose entries are known to be of order one.
pub fn nullspace_with_floor(a: &CMatrix, tol: f64, floor: f64) -> Vec<CVector> {
    let cols = a.ncols();
    if cols == 0 {
        return Vec::new();
    }
    if a.nrows() == 0 {
        return (0..cols).map(|i| unit_vector(cols, i)).collect();
    }
    let reduced = if a.nrows() > cols {
        a.clone().qr().r()
    } else {
        a.clone()
    };
    // Pad to square so every right singular vector is available.
    let square = if reduced.nrows() < cols {
        let mut s = CMatrix::zeros(cols, cols);
        s.view_mut((0, 0), (reduced.nrows(), cols)).copy_from(&reduced);
        s
    } else {
        reduced
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thresh = (tol * s_max).max(floor);
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= thresh || s_max == 0.0 {
            out.push(v_t.row(i).adjoint());
        }
    }
    orthonormalize(&out, tol)
}

pub fn unit_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = re(1.0);
    v
}

/// Incrementally grown orthonormal set (modified Gram-Schmidt, two passes).
#[derive(Debug, Clone, Default)]
pub struct OrthonormalSet {
    vectors: Vec<CVector>,
}

impl OrthonormalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<CVector> {
        self.vectors
    }

    pub fn residual(&self, v: &CVector) -> CVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.vectors {
                let coeff = b.dotc(&r);
                r.axpy(-coeff, b, re(1.0));
            }
        }
        r
    }

    /// Adds the normalized residual of `v` if it is not already (to `tol`,
    /// relative to `|v|`) in the span. Returns whether the set grew.
    pub fn try_add(&mut self, v: &CVector, tol: f64) -> bool {
        let scale = v.norm();
        if scale == 0.0 {
            return false;
        }
        let r = self.residual(v);
        let rn = r.norm();
        if rn <= tol * scale {
            return false;
        }
        self.vectors.push(r.unscale(rn));
        true
    }
}

pub fn orthonormalize(vs: &[CVector], tol: f64) -> Vec<CVector> {
    let mut set = OrthonormalSet::new();
    for v in vs {
        set.try_add(v, tol);
    }
    set.into_vectors()
}

/// Groups ascending values into clusters whose consecutive gaps are at most
/// `tol * max(1, max|v|)`. Returns index ranges into `values`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    if values.is_empty() {
        return Vec::new();
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > tol * scale {
            out.push(start..i);
            start = i;
        }
    }
    out.push(start..values.len());
    out
}

/// Row-major flattening.
pub fn flatten(m: &CMatrix) -> impl Iterator<Item = C64> + '_ {
    (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m[(i, j)]))
}

pub fn from_row_major(rows: usize, cols: usize, data: &[C64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, data)
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Random Hermitian matrix with standard Gaussian entries (GUE up to scale).
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = random_complex_matrix(rng, n, n);
    hermitian_part(&g)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
