//! Non-commutative Lp norms, the Hölder pairing, relative modular operators,
//! the α-divergence and virtual temperatures.
//!
//! Lp representatives use the tracial specialization: a state with density
//! `ρ` is represented in `Lp` by `ρ^{1/p}` and `Lp × Lq` are paired by
//! `Re Tr(T₁T₂)`. The reference state only enters through the relative
//! modular operator and must be faithful.

use serde::Serialize;

use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix};
use crate::states::StateFunctional;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadExponent(p));
    }
    Ok(())
}

fn check_faithful(reference: &StateFunctional, tol: f64) -> Result<()> {
    let min = reference.min_eigenvalue();
    if min <= tol {
        return Err(Error::NotFaithful(min));
    }
    Ok(())
}

/// An element of `Lp(F; φ₀)`, `1 ≤ p ≤ ∞`.
#[derive(Debug, Clone)]
pub struct LpElement {
    p: f64,
    value: AlgebraElement,
    reference: StateFunctional,
}

impl LpElement {
    pub fn new(p: f64, value: AlgebraElement, reference: StateFunctional, tol: f64) -> Result<Self> {
        check_exponent(p)?;
        check_faithful(&reference, tol)?;
        value.shape().check_same(reference.shape())?;
        Ok(Self { p, value, reference })
    }

    /// `ρ^{1/p}`; for `p = ∞` this is the support projection.
    pub fn from_state(state: &StateFunctional, p: f64, reference: &StateFunctional, tol: f64) -> Result<Self> {
        check_exponent(p)?;
        let inv = 1.0 / p;
        let blocks = state
            .densities()
            .iter()
            .map(|d| {
                linalg::hermitian_function(d, |x| {
                    if x <= tol {
                        re(0.0)
                    } else {
                        re(x.powf(inv))
                    }
                })
            })
            .collect();
        Self::new(p, AlgebraElement::new(state.shape().clone(), blocks)?, reference.clone(), tol)
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn value(&self) -> &AlgebraElement {
        &self.value
    }

    pub fn reference(&self) -> &StateFunctional {
        &self.reference
    }
}

/// `‖T‖_p = (Tr|T|^p)^{1/p}`, operator norm at `p = ∞`.
pub fn lp_norm(t: &LpElement) -> f64 {
    schatten_norm(&t.value, t.p)
}

pub fn schatten_norm(x: &AlgebraElement, p: f64) -> f64 {
    let sv: Vec<f64> = x.blocks().iter().flat_map(linalg::singular_values).collect();
    if p.is_infinite() {
        return sv.into_iter().fold(0.0, f64::max);
    }
    sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `Tr|T|^p` without the final root (`p` finite).
fn schatten_power(x: &AlgebraElement, p: f64) -> f64 {
    x.blocks().iter().flat_map(linalg::singular_values).map(|s| s.powf(p)).sum()
}

fn conjugate(p: f64, q: f64) -> bool {
    (1.0 / p + 1.0 / q - 1.0).abs() <= 1e-12
}

/// `[T₁, T₂] = Re Tr(T₁T₂)` for conjugate exponents.
pub fn holder_pairing(t1: &LpElement, t2: &LpElement) -> Result<f64> {
    if !conjugate(t1.p, t2.p) {
        return Err(Error::BadExponent(t2.p));
    }
    t1.value.shape().check_same(t2.value.shape())?;
    Ok(t1.value.blocks().iter().zip(t2.value.blocks()).map(|(x, y)| symmetric_trace(x, y)).sum())
}

/// `Re Tr(XY)` summed over unordered index pairs, so swapping `X` and `Y`
/// gives the same floating-point result.
fn symmetric_trace(x: &CMatrix, y: &CMatrix) -> f64 {
    let n = x.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        acc += (x[(i, i)] * y[(i, i)]).re;
        for j in i + 1..n {
            acc += (x[(i, j)] * y[(j, i)]).re + (x[(j, i)] * y[(i, j)]).re;
        }
    }
    acc
}

/// Conjugate exponents `1/p + 1/q = 1` with `α = 1/q − 1/p ≠ ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaParams {
    p: f64,
    q: f64,
}

impl AlphaParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::BadExponent(p));
        }
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::BadExponent(q));
        }
        if !conjugate(p, q) {
            return Err(Error::BadExponent(q));
        }
        Ok(Self { p, q })
    }

    /// `1/p = (1 − α)/2`, `1/q = (1 + α)/2` for `α ∈ (−1, 1)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("α must lie strictly between −1 and 1, got {alpha}")));
        }
        Self::new(2.0 / (1.0 - alpha), 2.0 / (1.0 + alpha))
    }

    /// `p` with its conjugate.
    pub fn from_p(p: f64) -> Result<Self> {
        Self::new(p, p / (p - 1.0))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.q - 1.0 / self.p
    }

    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }
}

/// `D = pq[‖T₁‖_p^p/p + ‖T₂‖_q^q/q − [T₁,T₂]]` with `T₁ = ρ₁^{1/p}`,
/// `T₂ = ρ₂^{1/q}`.
pub fn alpha_divergence(
    phi1: &StateFunctional,
    phi2: &StateFunctional,
    params: AlphaParams,
    reference: &StateFunctional,
    tol: f64,
) -> Result<f64> {
    phi1.shape().check_same(phi2.shape())?;
    let (p, q) = (params.p, params.q);
    let t1 = LpElement::from_state(phi1, p, reference, tol)?;
    let t2 = LpElement::from_state(phi2, q, reference, tol)?;
    let n1 = schatten_power(&t1.value, p);
    let n2 = schatten_power(&t2.value, q);
    Ok(p * q * (n1 / p + n2 / q - holder_pairing(&t1, &t2)?))
}

/// `Δ_{φ,φ₀}(X) = ρ X σ⁻¹`, blockwise.
#[derive(Debug, Clone)]
pub struct RelativeModularOperator {
    shape: BlockShape,
    rho: Vec<CMatrix>,
    sigma_inv: Vec<CMatrix>,
}

impl RelativeModularOperator {
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.shape.check_same(x.shape())?;
        Ok(x.map_blocks(|i, b| &self.rho[i] * b * &self.sigma_inv[i]))
    }

    /// Matrix on the vectorized algebra.
    pub fn matrix(&self) -> CMatrix {
        let n = self.shape.algebra_dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            let img = self.apply(&AlgebraElement::matrix_unit(&self.shape, i)).expect("own shape");
            m.set_column(i, &img.to_vector());
        }
        m
    }

    /// Eigenvalues, ascending. The operator is self-adjoint for the trace
    /// inner product, so these are real.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigh(&self.matrix()).0
    }
}

pub fn relative_modular_operator(
    phi: &StateFunctional,
    reference: &StateFunctional,
    tol: f64,
) -> Result<RelativeModularOperator> {
    phi.shape().check_same(reference.shape())?;
    check_faithful(reference, tol)?;
    let sigma_inv = reference
        .densities()
        .iter()
        .map(|s| linalg::hermitian_function(s, |x| re(1.0 / x)))
        .collect();
    Ok(RelativeModularOperator { shape: phi.shape().clone(), rho: phi.densities().to_vec(), sigma_inv })
}

/// `τ = β/p ∈ [0, β]` for `p ∈ [1, ∞]`.
pub fn virtual_temperature(beta: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("β must be positive, got {beta}")));
    }
    Ok(if p.is_infinite() { 0.0 } else { beta / p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_complex_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_state(w: &[f64]) -> StateFunctional {
        let s = BlockShape::full(w.len()).unwrap();
        StateFunctional::new(s, vec![linalg::diag(w)], 1e-12).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateFunctional {
        let g = random_complex_matrix(rng, n, n);
        StateFunctional::from_unnormalized(BlockShape::full(n).unwrap(), vec![&g * g.adjoint()]).unwrap()
    }

    #[test]
    fn modular_operator_examples() {
        let s = BlockShape::full(2).unwrap();
        let mm = StateFunctional::maximally_mixed(&s);
        let d = relative_modular_operator(&mm, &mm, 1e-12).unwrap();
        assert!((d.matrix() - CMatrix::identity(4, 4)).norm() < 1e-14);
        let rho = diag_state(&[0.2, 0.8]);
        let sigma = diag_state(&[0.6, 0.4]);
        let d = relative_modular_operator(&rho, &sigma, 1e-12).unwrap();
        let mut expected = vec![];
        for r in [0.2, 0.8] {
            for s in [0.6, 0.4] {
                expected.push(r / s);
            }
        }
        expected.sort_by(f64::total_cmp);
        let got = d.spectrum();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let sqrt = AlgebraElement::new(s.clone(), vec![linalg::diag(&[0.6f64.sqrt(), 0.4f64.sqrt()])]).unwrap();
        let fixed = relative_modular_operator(&sigma, &sigma, 1e-12).unwrap().apply(&sqrt).unwrap();
        assert!(fixed.distance(&sqrt).unwrap() < 1e-14);
        assert!(matches!(relative_modular_operator(&rho, &diag_state(&[1.0, 0.0]), 1e-12), Err(Error::NotFaithful(_))));
    }

    #[test]
    fn norms_and_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_state(&mut rng, 3);
        let reference = StateFunctional::maximally_mixed(rho.shape());
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let t = LpElement::from_state(&rho, p, &reference, 1e-14).unwrap();
            assert!((lp_norm(&t) - 1.0).abs() < 1e-12);
        }
        let x = AlgebraElement::new(rho.shape().clone(), vec![random_complex_matrix(&mut rng, 3, 3)]).unwrap();
        let t2 = LpElement::new(2.0, x.clone(), reference.clone(), 1e-12).unwrap();
        assert!((lp_norm(&t2) - x.frobenius_norm()).abs() < 1e-12);
        let half = LpElement::from_state(&rho, 2.0, &reference, 1e-14).unwrap();
        assert!((holder_pairing(&half, &half).unwrap() - 1.0).abs() < 1e-12);
        assert!(holder_pairing(&half, &LpElement::from_state(&rho, 3.0, &reference, 1e-14).unwrap()).is_err());
        for (p, q) in [(1.5, 3.0), (2.0, 2.0), (4.0, 4.0 / 3.0)] {
            let a = LpElement::new(p, x.clone(), reference.clone(), 1e-12).unwrap();
            let y = AlgebraElement::new(rho.shape().clone(), vec![random_complex_matrix(&mut rng, 3, 3)]).unwrap();
            let b = LpElement::new(q, y, reference.clone(), 1e-12).unwrap();
            assert!(holder_pairing(&a, &b).unwrap().abs() <= lp_norm(&a) * lp_norm(&b) + 1e-12);
        }
        let e1 = diag_state(&[1.0, 0.0]);
        let e2 = diag_state(&[0.0, 1.0]);
        let r2 = StateFunctional::maximally_mixed(e1.shape());
        let a = LpElement::from_state(&e1, 2.0, &r2, 1e-14).unwrap();
        let b = LpElement::from_state(&e2, 2.0, &r2, 1e-14).unwrap();
        assert_eq!(holder_pairing(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn divergence_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let reference = StateFunctional::maximally_mixed(&BlockShape::full(3).unwrap());
        let params = AlphaParams::from_p(3.0).unwrap();
        let a = random_state(&mut rng, 3);
        let b = random_state(&mut rng, 3);
        assert!(alpha_divergence(&a, &a, params, &reference, 1e-14).unwrap().abs() < 1e-12);
        let d = alpha_divergence(&a, &b, params, &reference, 1e-14).unwrap();
        assert!(d > 0.0);
        let swapped = alpha_divergence(&b, &a, params.swapped(), &reference, 1e-14).unwrap();
        assert_eq!(d, swapped);
        let half = AlphaParams::new(2.0, 2.0).unwrap();
        assert_eq!(half.alpha(), 0.0);
        let d1 = alpha_divergence(&a, &b, half, &reference, 1e-14).unwrap();
        let d2 = alpha_divergence(&b, &a, half, &reference, 1e-14).unwrap();
        assert!((d1 - d2).abs() < 1e-14);
    }

    #[test]
    fn classical_two_point_example() {
        // p = q = 2, ρ₁ = (1, 0), ρ₂ = (½, ½): D = 4[1 − 1·(1/√2)].
        let r = StateFunctional::maximally_mixed(&BlockShape::full(2).unwrap());
        let d = alpha_divergence(&diag_state(&[1.0, 0.0]), &diag_state(&[0.5, 0.5]), AlphaParams::new(2.0, 2.0).unwrap(), &r, 1e-14)
            .unwrap();
        assert!((d - 4.0 * (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn params_and_temperatures() {
        assert!(AlphaParams::new(2.0, 3.0).is_err());
        assert!(AlphaParams::new(1.0, f64::INFINITY).is_err());
        assert!(AlphaParams::from_alpha(1.0).is_err());
        let p = AlphaParams::from_alpha(0.5).unwrap();
        assert!((p.alpha() - 0.5).abs() < 1e-15);
        assert_eq!(virtual_temperature(3.0, 1.0).unwrap(), 3.0);
        assert_eq!(virtual_temperature(3.0, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(virtual_temperature(4.0, 2.0).unwrap(), 2.0);
        assert!(matches!(virtual_temperature(1.0, 0.5), Err(Error::BadExponent(_))));
    }
}
