use std::sync::Arc;

use super::{fixed_subspace, AutomorphicAction, CosetSpace, Subgroup};
use crate::algebra::{AlgebraElement, BlockShape, OperatorSubalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Sections `F̂: G → F` with `F̂(hg) = τ_h(F̂(g))`, i.e. `Γ(G ×_H F)`.
///
/// A section is stored by its values at the right-coset representatives, so
/// as a vector space it is `F^{⊕[G:H]}` with the repeated block shape.
#[derive(Debug, Clone)]
pub struct AugmentedAlgebra {
    action: AutomorphicAction,
    cosets: Arc<CosetSpace>,
    shape: BlockShape,
}

#[derive(Debug, Clone)]
pub struct AugmentedElement {
    cosets: Arc<CosetSpace>,
    values: Vec<AlgebraElement>,
}

impl AugmentedElement {
    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    fn zip(&self, other: &Self, f: impl Fn(&AlgebraElement, &AlgebraElement) -> Result<AlgebraElement>) -> Result<Self> {
        if self.cosets != other.cosets {
            return Err(Error::CosetMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(Self { cosets: self.cosets.clone(), values })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_mul(b))
    }

    pub fn scale(&self, s: linalg::C64) -> Self {
        Self { cosets: self.cosets.clone(), values: self.values.iter().map(|v| v.scale(s)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self { cosets: self.cosets.clone(), values: self.values.iter().map(AlgebraElement::adjoint).collect() }
    }

    /// Sup-norm over cosets.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(AlgebraElement::norm).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.cosets != other.cosets {
            return Err(Error::CosetMismatch);
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance(b))
            .try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
    }

    /// Concatenated values as one element of `F^{⊕[G:H]}`.
    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::concat(&self.values).expect("values share a shape")
    }
}

impl AugmentedAlgebra {
    pub fn new(action: AutomorphicAction, subgroup: &Subgroup) -> Result<Self> {
        let cosets = Arc::new(CosetSpace::right(action.group(), subgroup)?);
        let shape = action.shape().repeat(cosets.len())?;
        Ok(Self { action, cosets, shape })
    }

    pub fn action(&self) -> &AutomorphicAction {
        &self.action
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.cosets.subgroup()
    }

    /// Block shape of `F^{⊕[G:H]}`.
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.algebra_dim()
    }

    /// Section with the given values at the coset representatives.
    pub fn element(&self, values: Vec<AlgebraElement>) -> Result<AugmentedElement> {
        if values.len() != self.cosets.len() {
            return Err(Error::InvalidArgument(format!("need {} coset values, got {}", self.cosets.len(), values.len())));
        }
        for v in &values {
            self.action.shape().check_same(v.shape())?;
        }
        Ok(AugmentedElement { cosets: self.cosets.clone(), values })
    }

    pub fn from_element(&self, x: &AlgebraElement) -> Result<AugmentedElement> {
        self.shape.check_same(x.shape())?;
        self.element(x.split_repeated(self.action.shape())?)
    }

    pub fn unit(&self) -> AugmentedElement {
        let one = AlgebraElement::unit(self.action.shape());
        AugmentedElement { cosets: self.cosets.clone(), values: vec![one; self.cosets.len()] }
    }

    /// Unit on coset `c`, zero elsewhere.
    pub fn coset_indicator(&self, c: usize) -> AugmentedElement {
        let s = self.action.shape();
        let values = (0..self.cosets.len())
            .map(|k| if k == c { AlgebraElement::unit(s) } else { AlgebraElement::zero(s) })
            .collect();
        AugmentedElement { cosets: self.cosets.clone(), values }
    }

    /// Constant section with value `a`; equivariant exactly when `a ∈ F^H`.
    pub fn constant(&self, a: &AlgebraElement) -> Result<AugmentedElement> {
        self.element(vec![a.clone(); self.cosets.len()])
    }

    fn check(&self, f: &AugmentedElement) -> Result<()> {
        if *f.cosets != *self.cosets {
            return Err(Error::CosetMismatch);
        }
        Ok(())
    }

    /// `F̂(g) = τ_h(F̂(rep))` for `g = h·rep`.
    pub fn eval(&self, f: &AugmentedElement, g: usize) -> Result<AlgebraElement> {
        self.check(f)?;
        let (h, c) = self.cosets.factor(g);
        self.action.apply(h, &f.values[c])
    }

    /// `[τ̂_g(F̂)](ġ₁) = F̂(ġ₁g)`.
    pub fn g_action(&self, g: usize, f: &AugmentedElement) -> Result<AugmentedElement> {
        self.check(f)?;
        let group = self.action.group();
        group.check_element(g)?;
        let values = self
            .cosets
            .representatives()
            .iter()
            .map(|&r| self.eval(f, group.mul(r, g)))
            .collect::<Result<_>>()?;
        Ok(AugmentedElement { cosets: self.cosets.clone(), values })
    }

    /// `[î(F)](g) = τ_g(F)`.
    pub fn embed(&self, a: &AlgebraElement) -> Result<AugmentedElement> {
        let values = self
            .cosets
            .representatives()
            .iter()
            .map(|&r| self.action.apply(r, a))
            .collect::<Result<_>>()?;
        Ok(AugmentedElement { cosets: self.cosets.clone(), values })
    }

    /// Largest `‖F̂(hg) − τ_h(F̂(g))‖` over `h ∈ H`, `g ∈ G`, with `F̂(g)`
    /// taken from the stored values at `g`'s own coset representative.
    pub fn equivariance_defect(&self, f: &AugmentedElement) -> Result<f64> {
        let group = self.action.group();
        let mut worst = 0.0f64;
        for g in group.elements() {
            let fg = self.eval(f, g)?;
            for &h in self.subgroup().elements() {
                let lhs = self.eval(f, group.mul(h, g))?;
                worst = worst.max(lhs.distance(&self.action.apply(h, &fg)?)?);
            }
        }
        Ok(worst)
    }

    /// Matrix of `τ̂_g` on the vectorized algebra.
    pub fn g_action_matrix(&self, g: usize) -> Result<CMatrix> {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            let e = self.from_element(&AlgebraElement::matrix_unit(&self.shape, i))?;
            m.set_column(i, &self.g_action(g, &e)?.to_element().to_vector());
        }
        Ok(m)
    }

    /// `F̂^G` as the range of `|G|⁻¹ Σ τ̂_g`.
    pub fn fixed_point_algebra(&self, tol: f64) -> Result<OperatorSubalgebra> {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        for g in self.action.group().elements() {
            p += self.g_action_matrix(g)?;
        }
        p /= linalg::re(self.action.group().order() as f64);
        fixed_subspace(&self.shape, &p, tol)
    }

    /// The isomorphism `F^H → F̂^G`, `a ↦` constant section `a`.
    pub fn fixed_point_isomorphism(&self, a: &AlgebraElement, tol: f64) -> Result<AugmentedElement> {
        for &h in self.subgroup().elements() {
            let d = self.action.apply(h, a)?.distance(a)?;
            if d > tol * a.frobenius_norm().max(1.0) {
                return Err(Error::Domain(format!("element is not fixed by subgroup element {h} (defect {d:.3e})")));
            }
        }
        self.constant(a)
    }

    /// Inverse of [`Self::fixed_point_isomorphism`]: the value at the identity.
    pub fn fixed_point_value(&self, f: &AugmentedElement) -> Result<AlgebraElement> {
        self.eval(f, self.action.group().identity())
    }

    /// `m̂_G(F̂) = |G|⁻¹ Σ τ̂_g(F̂)`, onto `F̂^G`.
    pub fn average(&self, f: &AugmentedElement) -> Result<AugmentedElement> {
        let mut acc = self.g_action(self.action.group().identity(), f)?.scale(linalg::re(0.0));
        for g in self.action.group().elements() {
            acc = acc.try_add(&self.g_action(g, f)?)?;
        }
        Ok(acc.scale(linalg::re(1.0 / self.action.group().order() as f64)))
    }

    /// `m̂_{H\G}(F̂) = |G|⁻¹ Σ_g τ_{g⁻¹}(F̂(g))`, a left inverse of `î`.
    pub fn coset_expectation(&self, f: &AugmentedElement) -> Result<AlgebraElement> {
        let group = self.action.group();
        let mut acc = AlgebraElement::zero(self.action.shape());
        for g in group.elements() {
            acc = acc.try_add(&self.action.apply(group.inv(g), &self.eval(f, g)?)?)?;
        }
        Ok(acc.scale_real(1.0 / group.order() as f64))
    }
}
