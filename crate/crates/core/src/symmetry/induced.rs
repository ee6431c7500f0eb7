use serde::Serialize;

use super::{AugmentedAlgebra, AugmentedElement, CosetSpace, CovariantPair};
use crate::algebra::{center, AlgebraElement, Representation};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// `(π̂, Û)` on `ℌ̂ = {ψ: G → ℌ : ψ(gh) = U(h⁻¹)ψ(g)}` and `π̄ = π̂∘î`.
///
/// `ψ` is stored by its values `vⱼ = ψ(rⱼ)` at the left-coset
/// representatives, so `dim ℌ̂ = [G:H]·dim ℌ`.
#[derive(Debug, Clone)]
pub struct CovariantRepresentation {
    augmented: AugmentedAlgebra,
    left: CosetSpace,
    base_dim: usize,
    /// π̂ on `F^{⊕[G:H]}` (values at right-coset representatives).
    pi_hat: Representation,
    pi_bar: Representation,
    u_hat: Vec<CMatrix>,
}

impl CovariantRepresentation {
    pub fn hilbert_dimension(&self) -> usize {
        self.left.len() * self.base_dim
    }

    pub fn augmented(&self) -> &AugmentedAlgebra {
        &self.augmented
    }

    pub fn pi_hat(&self) -> &Representation {
        &self.pi_hat
    }

    pub fn pi_bar(&self) -> &Representation {
        &self.pi_bar
    }

    pub fn u_hat(&self, g: usize) -> &CMatrix {
        &self.u_hat[g]
    }

    pub fn apply_hat(&self, f: &AugmentedElement) -> Result<CMatrix> {
        self.pi_hat.apply(&f.to_element())
    }

    /// Worst `‖π̂(τ̂_g(e)) − Û(g)π̂(e)Û(g)*‖` over g and matrix units.
    pub fn hat_covariance_defect(&self) -> Result<f64> {
        let alg = &self.augmented;
        let mut worst = 0.0f64;
        for g in alg.action().group().elements() {
            let u = &self.u_hat[g];
            for i in 0..alg.dim() {
                let e = alg.from_element(&AlgebraElement::matrix_unit(alg.shape(), i))?;
                let lhs = self.apply_hat(&alg.g_action(g, &e)?)?;
                let rhs = u * self.apply_hat(&e)? * u.adjoint();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// Worst `‖π̄(τ_g(e)) − Û(g)π̄(e)Û(g)*‖` over g and matrix units.
    pub fn bar_covariance_defect(&self) -> Result<f64> {
        let action = self.augmented.action();
        let shape = action.shape();
        let mut worst = 0.0f64;
        for g in action.group().elements() {
            let u = &self.u_hat[g];
            for i in 0..shape.algebra_dim() {
                let e = AlgebraElement::matrix_unit(shape, i);
                let lhs = self.pi_bar.apply(&action.apply(g, &e)?)?;
                let rhs = u * self.pi_bar.apply(&e)? * u.adjoint();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// Worst of unitarity and `Û(g)Û(g′) = Û(gg′)`.
    pub fn u_hat_defect(&self) -> f64 {
        let group = self.augmented.action().group();
        let d = self.hilbert_dimension();
        let mut worst = 0.0f64;
        for g in group.elements() {
            let u = &self.u_hat[g];
            worst = worst.max((u * u.adjoint() - CMatrix::identity(d, d)).norm());
            for k in group.elements() {
                worst = worst.max((u * &self.u_hat[k] - &self.u_hat[group.mul(g, k)]).norm());
            }
        }
        worst
    }
}

/// Induces `(π̂, Û)` from a covariant pair for `H`, following
/// `(π̂(F̂)ψ)(g) = π(F̂(g⁻¹))ψ(g)`, `(Û(g₁)ψ)(g) = ψ(g₁⁻¹g)` and
/// `(π̄(F)ψ)(g) = π(τ_{g⁻¹}(F))ψ(g)`.
pub fn induce_covariant_representation(
    augmented: &AugmentedAlgebra,
    pair: &CovariantPair,
    tol: f64,
) -> Result<CovariantRepresentation> {
    let action = augmented.action();
    if pair.subgroup != *augmented.subgroup() {
        return Err(Error::CosetMismatch);
    }
    let defect = pair.covariance_defect(action)?;
    if defect > tol.sqrt() {
        return Err(Error::Hypothesis(format!("(π, U) is not covariant for H (defect {defect:.3e})")));
    }
    let group = action.group();
    let left = CosetSpace::left(group, &pair.subgroup)?;
    let rep = &pair.representation;
    let d = rep.dim();
    let m = left.len();
    let total = m * d;

    let pi_hat = {
        let aug = augmented.clone();
        let left = left.clone();
        let rep = rep.clone();
        Representation::from_fn(augmented.shape(), total, move |x| {
            let f = aug.from_element(x).expect("own shape");
            let mut out = CMatrix::zeros(total, total);
            for (j, &r) in left.representatives().iter().enumerate() {
                let v = aug.eval(&f, aug.action().group().inv(r)).expect("valid element");
                out.view_mut((j * d, j * d), (d, d)).copy_from(&rep.apply(&v).expect("own shape"));
            }
            out
        })?
    };

    let pi_bar = {
        let shape = action.shape().clone();
        let action = action.clone();
        let left = left.clone();
        let rep = rep.clone();
        Representation::from_fn(&shape, total, move |x| {
            let mut out = CMatrix::zeros(total, total);
            for (j, &r) in left.representatives().iter().enumerate() {
                let v = action.apply(action.group().inv(r), x).expect("own shape");
                out.view_mut((j * d, j * d), (d, d)).copy_from(&rep.apply(&v).expect("own shape"));
            }
            out
        })?
    };

    // (Û(g₁)v)ⱼ = ψ(g₁⁻¹rⱼ) = ψ(r_k h) = U(h⁻¹) v_k.
    let mut u_hat = Vec::with_capacity(group.order());
    for g1 in group.elements() {
        let mut u = CMatrix::zeros(total, total);
        for (j, &r) in left.representatives().iter().enumerate() {
            let (h, k) = left.factor(group.mul(group.inv(g1), r));
            u.view_mut((j * d, k * d), (d, d)).copy_from(pair.unitary(group.inv(h))?);
        }
        u_hat.push(u);
    }

    Ok(CovariantRepresentation { augmented: augmented.clone(), left, base_dim: d, pi_hat, pi_bar, u_hat })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedCentreReport {
    pub coset_count: usize,
    pub hat_centre_dim: usize,
    pub bar_centre_dim: usize,
    /// Centre of `π̂(F̂)″` is spanned by the images of the coset indicators.
    pub hat_spanned_by_indicators: bool,
    /// Centre of `π̄(F)″` is spanned by the same projections.
    pub bar_spanned_by_indicators: bool,
}

impl AugmentedCentreReport {
    pub fn holds(&self) -> bool {
        self.hat_centre_dim == self.coset_count
            && self.bar_centre_dim == self.coset_count
            && self.hat_spanned_by_indicators
            && self.bar_spanned_by_indicators
    }
}

/// Computes the centres of `π̂(F̂)″` and `π̄(F)″` and compares them with the
/// functions on `H\G`, realized as `π̂` of the coset indicator sections.
/// Requires `π(F)″` to be a factor.
pub fn augmented_center(
    induced: &CovariantRepresentation,
    pair: &CovariantPair,
    tol: f64,
) -> Result<AugmentedCentreReport> {
    let base = pair.representation.structure(tol)?;
    if !base.is_factor() {
        return Err(Error::Hypothesis(format!(
            "π(F)″ has a centre of dimension {}, expected a factor",
            base.centre.dim()
        )));
    }
    let alg = induced.augmented();
    let target = induced.pi_hat().target_shape();
    let indicators = (0..alg.cosets().len())
        .map(|c| AlgebraElement::new(target.clone(), vec![induced.apply_hat(&alg.coset_indicator(c))?]))
        .collect::<Result<Vec<_>>>()?;
    let indicator_span = crate::algebra::OperatorSubalgebra::from_spanning(&target, &indicators, tol)?;

    let hat = center(&induced.pi_hat().represented_algebra(tol)?, tol)?;
    let bar = center(&induced.pi_bar().represented_algebra(tol)?, tol)?;
    let span_tol = tol.sqrt();
    Ok(AugmentedCentreReport {
        coset_count: alg.cosets().len(),
        hat_centre_dim: hat.dim(),
        bar_centre_dim: bar.dim(),
        hat_spanned_by_indicators: hat.same_span(&indicator_span, span_tol)?,
        bar_spanned_by_indicators: bar.same_span(&indicator_span, span_tol)?,
    })
}
