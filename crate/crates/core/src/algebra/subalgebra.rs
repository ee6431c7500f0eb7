use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AlgebraElement, BlockShape};
use crate::error::Result;
use crate::linalg::{self, c, re, CMatrix, CVector, OrthonormalSet};

/// A *-subalgebra of `⊕ M_{nᵢ}` given by an orthonormal basis under the trace
/// inner product.
#[derive(Debug, Clone)]
pub struct OperatorSubalgebra {
    shape: BlockShape,
    basis: Vec<AlgebraElement>,
}

impl OperatorSubalgebra {
    /// Span of `elements`, orthonormalized. No closure is performed; callers
    /// pass sets that are already *-closed subalgebras (e.g. the image of a
    /// *-homomorphism).
    pub fn from_spanning(shape: &BlockShape, elements: &[AlgebraElement], tol: f64) -> Result<Self> {
        let mut set = OrthonormalSet::new();
        for e in elements {
            shape.check_same(e.shape())?;
            set.try_add(&e.to_vector(), tol);
        }
        Self::from_orthonormal_vectors(shape, set.vectors())
    }

    pub(crate) fn from_orthonormal_vectors(shape: &BlockShape, vs: &[CVector]) -> Result<Self> {
        let basis = vs
            .iter()
            .map(|v| AlgebraElement::from_vector(shape, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { shape: shape.clone(), basis })
    }

    /// The whole ambient algebra.
    pub fn full(shape: &BlockShape) -> Self {
        let basis = (0..shape.algebra_dim()).map(|i| AlgebraElement::matrix_unit(shape, i)).collect();
        Self { shape: shape.clone(), basis }
    }

    pub fn scalars(shape: &BlockShape) -> Self {
        let one = AlgebraElement::unit(shape);
        let n = one.frobenius_norm();
        Self { shape: shape.clone(), basis: vec![one.scale_real(1.0 / n)] }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(&self.shape);
        for b in &self.basis {
            out = &out + &b.scale(b.inner(a)?);
        }
        Ok(out)
    }

    pub fn contains(&self, a: &AlgebraElement, tol: f64) -> Result<bool> {
        let p = self.project(a)?;
        Ok(p.distance(a)? <= tol * a.frobenius_norm().max(1.0))
    }

    /// Largest distance of a basis element of `other` from this span.
    pub fn contains_subspace(&self, other: &OperatorSubalgebra, tol: f64) -> Result<bool> {
        for b in other.basis() {
            if !self.contains(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_span(&self, other: &OperatorSubalgebra, tol: f64) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_subspace(other, tol)?)
    }

    /// Maximal commutator norm `‖[x, b]‖` over `x` in `elements`, `b` in the basis.
    pub fn max_commutator_with(&self, elements: &[AlgebraElement]) -> Result<f64> {
        let mut worst = 0.0f64;
        for x in elements {
            for b in &self.basis {
                worst = worst.max(x.commutator(b)?.frobenius_norm());
            }
        }
        Ok(worst)
    }

    pub fn is_commutative(&self, tol: f64) -> Result<bool> {
        Ok(self.max_commutator_with(&self.basis)? <= tol)
    }

    /// A self-adjoint element with pseudo-random coefficients. Fixed seed, so
    /// results are reproducible.
    pub(crate) fn generic_self_adjoint(&self, seed: u64) -> AlgebraElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = AlgebraElement::zero(&self.shape);
        for b in &self.basis {
            let sa = &b.clone() + &b.adjoint();
            let sk = (&b.clone() - &b.adjoint()).scale(c(0.0, 1.0));
            h = &h + &sa.scale_real(linalg::gaussian(&mut rng));
            h = &h + &sk.scale_real(linalg::gaussian(&mut rng));
        }
        h
    }
}

/// The unital *-algebra generated by `generators`: repeated pairwise products
/// are added to an orthonormal basis until the dimension stops growing.
pub fn close_under_multiplication(
    shape: &BlockShape,
    generators: &[AlgebraElement],
    tol: f64,
) -> Result<OperatorSubalgebra> {
    let mut set = OrthonormalSet::new();
    let mut elems: Vec<AlgebraElement> = Vec::new();
    let push = |e: AlgebraElement, set: &mut OrthonormalSet, elems: &mut Vec<AlgebraElement>| {
        let v = e.to_vector();
        if set.try_add(&v, tol) {
            let last = set.vectors().last().expect("just added");
            elems.push(AlgebraElement::from_vector(shape, last).expect("same shape"));
        }
    };
    push(AlgebraElement::unit(shape), &mut set, &mut elems);
    for g in generators {
        shape.check_same(g.shape())?;
        push(g.clone(), &mut set, &mut elems);
        push(g.adjoint(), &mut set, &mut elems);
    }
    // Products b_i b_j with at least one index in the newest layer.
    let mut done = 0;
    loop {
        let current = elems.len();
        if done == current {
            break;
        }
        for i in 0..current {
            for j in 0..current {
                if i < done && j < done {
                    continue;
                }
                let p = &elems[i] * &elems[j];
                push(p, &mut set, &mut elems);
            }
        }
        done = current;
    }
    Ok(OperatorSubalgebra { shape: shape.clone(), basis: elems })
}

/// Commutant of `s` inside the ambient algebra.
///
/// Commutation constraints decouple across ambient blocks. Within a block the
/// unknown is first restricted to the commutant of one generic self-adjoint
/// element of `s` (block-diagonal in its eigenbasis); the remaining
/// constraints are then solved as a nullspace on that much smaller space.
/// Eigenvalue clusters are merged generously: merging only enlarges the trial
/// space, so it never loses solutions.
pub fn commutant(s: &OperatorSubalgebra, tol: f64) -> Result<OperatorSubalgebra> {
    let shape = s.shape().clone();
    let h = s.generic_self_adjoint(0x5eed_c0de);
    let mut out: Vec<CVector> = Vec::new();
    let total = shape.algebra_dim();
    for (blk, &n) in shape.dims().iter().enumerate() {
        let (vals, v) = linalg::eigh(h.block(blk));
        let clusters = linalg::cluster_sorted(&vals, 1e-6);
        // Trial unknowns E_pq with p, q in the same cluster.
        let mut unknowns: Vec<(usize, usize)> = Vec::new();
        for cl in &clusters {
            for p in cl.clone() {
                for q in cl.clone() {
                    unknowns.push((p, q));
                }
            }
        }
        let rotated: Vec<CMatrix> = s
            .basis()
            .iter()
            .map(|b| v.adjoint() * b.block(blk) * &v)
            .filter(|b| b.norm() > 0.0)
            .collect();
        let m = unknowns.len();
        let mut system = CMatrix::zeros(rotated.len() * n * n, m);
        for (k, b) in rotated.iter().enumerate() {
            let base = k * n * n;
            for (col, &(p, q)) in unknowns.iter().enumerate() {
                // [E_pq, b] = E_pq b - b E_pq: row p gets b[q, :], column q gets -b[:, p].
                for j in 0..n {
                    system[(base + p * n + j, col)] += b[(q, j)];
                }
                for i in 0..n {
                    system[(base + i * n + q, col)] -= b[(i, p)];
                }
            }
        }
        for y in linalg::nullspace(&system, tol) {
            let mut x = CMatrix::zeros(n, n);
            for (col, &(p, q)) in unknowns.iter().enumerate() {
                x[(p, q)] = y[col];
            }
            let x = &v * x * v.adjoint();
            let mut full = CVector::zeros(total);
            let off = shape.offset(blk);
            for (i, val) in linalg::flatten(&x).enumerate() {
                full[off + i] = val;
            }
            out.push(full);
        }
    }
    let vs = linalg::orthonormalize(&out, tol);
    OperatorSubalgebra::from_orthonormal_vectors(&shape, &vs)
}

/// Centre `s ∩ s′`: the elements of `s` commuting with every basis element.
pub fn center(s: &OperatorSubalgebra, tol: f64) -> Result<OperatorSubalgebra> {
    let shape = s.shape();
    let k = s.dim();
    let big_n = shape.algebra_dim();
    let mut system = CMatrix::zeros(k * big_n, k);
    for (l, bl) in s.basis().iter().enumerate() {
        for (i, bi) in s.basis().iter().enumerate() {
            let comm = bi.commutator(bl)?.to_vector();
            system.view_mut((l * big_n, i), (big_n, 1)).copy_from(&comm);
        }
    }
    let coeffs = linalg::nullspace(&system, tol);
    let mut vs = Vec::with_capacity(coeffs.len());
    for cvec in coeffs {
        let mut x = CVector::zeros(big_n);
        for (i, b) in s.basis().iter().enumerate() {
            x.axpy(cvec[i], &b.to_vector(), re(1.0));
        }
        vs.push(x);
    }
    let vs = linalg::orthonormalize(&vs, tol);
    OperatorSubalgebra::from_orthonormal_vectors(shape, &vs)
}
