//! Folia, central supports, disjointness, quasi-equivalence and the central
//! decomposition of a state.
//!
//! In finite dimensions every state is normal, so `ω` lies in the folium of
//! `π` exactly when it vanishes on `ker π`: then `ω` factors through
//! `π(A) = π(A)″` and is given by a density operator on `ℋ_π`.

use serde::Serialize;

use super::{evaluate, gns, GnsData, StateFunctional};
use crate::algebra::{intertwiner_space, AlgebraElement, Representation, RepresentationStructure};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, OrthonormalSet};

/// `ω ∈ f(π)`, decided by `ω(ker π) = 0`.
pub fn folium_contains(rep: &Representation, state: &StateFunctional, tol: f64) -> Result<bool> {
    rep.source().check_same(state.shape())?;
    for k in rep.kernel(tol)? {
        if evaluate(state, &k)?.norm() > tol.sqrt() * k.frobenius_norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest ambient central projection `z` with `ω(z) = 1`: the sum of the
/// identities of all charged blocks.
pub fn central_support(state: &StateFunctional, tol: f64) -> AlgebraElement {
    let shape = state.shape();
    let mut z = AlgebraElement::zero(shape);
    for b in state.charged_blocks(tol) {
        z = &z + &AlgebraElement::block_identity(shape, b);
    }
    z
}

/// The three characterizations of disjointness, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DisjointnessRoutes {
    /// `c(ω₁) c(ω₂) = 0`.
    pub orthogonal_central_supports: bool,
    /// No nonzero intertwiner between the GNS representations.
    pub no_intertwiners: bool,
    /// No state lies in both folia.
    pub trivial_folium_intersection: bool,
}

impl DisjointnessRoutes {
    pub fn agree(&self) -> bool {
        self.orthogonal_central_supports == self.no_intertwiners
            && self.no_intertwiners == self.trivial_folium_intersection
    }
}

fn supports_orthogonal(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<bool> {
    let p = &central_support(a, tol) * &central_support(b, tol);
    Ok(p.frobenius_norm() <= tol)
}

/// Folia intersect iff `ker π₁ + ker π₂` is a proper (two-sided) ideal, i.e.
/// some state annihilates both kernels.
fn folia_disjoint(r1: &Representation, r2: &Representation, tol: f64) -> Result<bool> {
    let mut set = OrthonormalSet::new();
    for k in r1.kernel(tol)?.iter().chain(r2.kernel(tol)?.iter()) {
        set.try_add(&k.to_vector(), tol.sqrt());
    }
    Ok(set.len() == r1.source().algebra_dim())
}

pub fn disjointness_routes(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<DisjointnessRoutes> {
    a.shape().check_same(b.shape())?;
    let ga = gns(a, tol)?;
    let gb = gns(b, tol)?;
    Ok(DisjointnessRoutes {
        orthogonal_central_supports: supports_orthogonal(a, b, tol)?,
        no_intertwiners: intertwiner_space(ga.representation(), gb.representation(), tol)?.is_empty(),
        trivial_folium_intersection: folia_disjoint(ga.representation(), gb.representation(), tol)?,
    })
}

/// Disjointness via orthogonal central supports. Debug builds also run the
/// intertwiner and folium routes and assert that all three agree.
pub fn is_disjoint(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<bool> {
    a.shape().check_same(b.shape())?;
    let verdict = supports_orthogonal(a, b, tol)?;
    #[cfg(debug_assertions)]
    {
        let routes = disjointness_routes(a, b, tol)?;
        debug_assert!(routes.agree(), "disjointness routes disagree: {routes:?}");
    }
    Ok(verdict)
}

/// Quasi-equivalence: equal central supports. Debug builds cross-check folium
/// equality on a probe set (the two states and one state per ambient block).
pub fn is_quasi_equivalent(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<bool> {
    a.shape().check_same(b.shape())?;
    let verdict = a.charged_blocks(tol) == b.charged_blocks(tol);
    #[cfg(debug_assertions)]
    {
        let folia = folia_agree_on_probes(a, b, tol)?;
        debug_assert_eq!(verdict, folia, "central supports and folia disagree");
    }
    Ok(verdict)
}

/// Condition (iv): `f(π₁) = f(π₂)`, tested by membership of probe states.
pub fn folia_agree_on_probes(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<bool> {
    let ga = gns(a, tol)?;
    let gb = gns(b, tol)?;
    let shape = a.shape();
    let mut probes = vec![a.clone(), b.clone()];
    for i in 0..shape.num_blocks() {
        let n = shape.block_dim(i);
        probes.push(StateFunctional::on_block(
            shape,
            i,
            CMatrix::identity(n, n) * linalg::re(1.0 / n as f64),
        )?);
    }
    for p in &probes {
        if folium_contains(ga.representation(), p, tol)? != folium_contains(gb.representation(), p, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A charged minimal central projection `C` of `a` with `a(C) ≠ b(C)`, if any.
pub fn central_witness(a: &StateFunctional, b: &StateFunctional, tol: f64) -> Result<Option<(usize, AlgebraElement)>> {
    a.shape().check_same(b.shape())?;
    let wa = a.block_weights();
    let wb = b.block_weights();
    for i in a.charged_blocks(tol) {
        if (wa[i] - wb[i]).abs() > tol {
            return Ok(Some((i, AlgebraElement::block_identity(a.shape(), i))));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct SectorComponent {
    pub label: String,
    /// Ambient block carrying this sector.
    pub block: usize,
    pub weight: f64,
    pub state: StateFunctional,
}

/// `ω = Σᵢ μᵢ ωᵢ` over the charged points of the GNS central spectrum.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub components: Vec<SectorComponent>,
}

impl SectorDecomposition {
    pub fn reassemble(&self) -> Result<StateFunctional> {
        let pairs: Vec<(f64, StateFunctional)> =
            self.components.iter().map(|c| (c.weight, c.state.clone())).collect();
        super::mix_states(&pairs)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.weight).collect()
    }
}

/// Central decomposition through the GNS centre: each minimal central
/// projection `Q = π(Pᵢ)` contributes weight `⟨Ω, QΩ⟩ = ω(Pᵢ)` and state
/// `ω(Pᵢ · Pᵢ)/ω(Pᵢ)`.
pub fn central_decomposition(state: &StateFunctional, tol: f64) -> Result<SectorDecomposition> {
    let g = gns(state, tol)?;
    decompose_with(state, &g, tol)
}

pub fn decompose_with(state: &StateFunctional, g: &GnsData, tol: f64) -> Result<SectorDecomposition> {
    let st: &RepresentationStructure = g.structure();
    let shape = state.shape();
    let mut components = Vec::new();
    for (k, q) in st.central_spectrum.projections().iter().enumerate() {
        let blocks = &st.point_blocks()[k];
        if blocks.len() != 1 {
            return Err(Error::Numerical(format!(
                "spectrum point {k} carries {} ambient blocks",
                blocks.len()
            )));
        }
        let weight = g.vector_expectation(q.block(0)).re;
        if weight <= tol {
            continue;
        }
        let block = blocks[0];
        let state_k = StateFunctional::on_block(
            shape,
            block,
            state.density(block) * linalg::re(1.0 / weight),
        )?;
        components.push(SectorComponent {
            label: st.central_spectrum.labels()[k].clone(),
            block,
            weight,
            state: state_k,
        });
    }
    // Renormalize away rounding so the weights are an exact probability vector.
    let total: f64 = components.iter().map(|c| c.weight).sum();
    for c in &mut components {
        c.weight /= total;
    }
    Ok(SectorDecomposition { components })
}

/// Largest `|ω(e) − Σ μᵢ ωᵢ(e)|` over matrix units.
pub fn reassembly_error(state: &StateFunctional, dec: &SectorDecomposition) -> Result<f64> {
    let shape = state.shape();
    let mut worst = 0.0f64;
    for i in 0..shape.algebra_dim() {
        let e = AlgebraElement::matrix_unit(shape, i);
        let lhs = evaluate(state, &e)?;
        let mut rhs = linalg::re(0.0);
        for c in &dec.components {
            rhs += evaluate(&c.state, &e)? * c.weight;
        }
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Coordinates of `Ω` restricted to a spectrum point (used in reports).
pub fn sector_vector(g: &GnsData, k: usize) -> CVector {
    let q = g.structure().central_spectrum.projections()[k].block(0);
    q * g.cyclic_vector()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockShape;
    use crate::linalg::{re, DEFAULT_TOL};

    fn shape23() -> BlockShape {
        BlockShape::new(vec![2, 3]).unwrap()
    }

    fn block_state(s: &BlockShape, i: usize) -> StateFunctional {
        let n = s.block_dim(i);
        StateFunctional::on_block(s, i, CMatrix::identity(n, n) * re(1.0 / n as f64)).unwrap()
    }

    #[test]
    fn own_folium_and_foreign_block() {
        let s = shape23();
        let w1 = block_state(&s, 0);
        let w2 = block_state(&s, 1);
        let g = gns(&w1, DEFAULT_TOL).unwrap();
        assert!(folium_contains(g.representation(), &w1, DEFAULT_TOL).unwrap());
        assert!(!folium_contains(g.representation(), &w2, DEFAULT_TOL).unwrap());
        let faithful = gns(&StateFunctional::maximally_mixed(&s), DEFAULT_TOL).unwrap();
        assert!(folium_contains(faithful.representation(), &w2, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn central_supports() {
        let s = shape23();
        let one = AlgebraElement::unit(&s);
        assert_eq!(central_support(&StateFunctional::maximally_mixed(&s), DEFAULT_TOL), one);
        assert_eq!(central_support(&block_state(&s, 0), DEFAULT_TOL), AlgebraElement::block_identity(&s, 0));
        let mix = mix_states_pair(&s, 0.3);
        assert_eq!(central_support(&mix, DEFAULT_TOL), one);
    }

    fn mix_states_pair(s: &BlockShape, w: f64) -> StateFunctional {
        super::super::mix_states(&[(w, block_state(s, 0)), (1.0 - w, block_state(s, 1))]).unwrap()
    }

    #[test]
    fn disjointness_examples() {
        let s = shape23();
        assert!(is_disjoint(&block_state(&s, 0), &block_state(&s, 1), DEFAULT_TOL).unwrap());
        let m2 = BlockShape::full(2).unwrap();
        let a = StateFunctional::maximally_mixed(&m2);
        let b = StateFunctional::new(
            m2.clone(),
            vec![CMatrix::from_row_slice(2, 2, &[re(0.9), re(0.0), re(0.0), re(0.1)])],
            1e-12,
        )
        .unwrap();
        assert!(!is_disjoint(&a, &b, DEFAULT_TOL).unwrap());
        assert!(is_quasi_equivalent(&a, &b, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn overlapping_supports_are_not_disjoint() {
        let s = BlockShape::new(vec![1, 2, 2]).unwrap();
        let w1 = super::super::mix_states(&[(0.5, block_state(&s, 0)), (0.5, block_state(&s, 1))]).unwrap();
        let w2 = super::super::mix_states(&[(0.5, block_state(&s, 1)), (0.5, block_state(&s, 2))]).unwrap();
        let routes = disjointness_routes(&w1, &w2, DEFAULT_TOL).unwrap();
        assert!(routes.agree());
        assert!(!routes.orthogonal_central_supports);
        assert!(!is_quasi_equivalent(&w1, &w2, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn witness_separates_disjoint_states() {
        let s = shape23();
        let (blk, c) = central_witness(&block_state(&s, 0), &block_state(&s, 1), DEFAULT_TOL)
            .unwrap()
            .unwrap();
        assert_eq!(blk, 0);
        assert!((evaluate(&block_state(&s, 0), &c).unwrap().re - 1.0).abs() < 1e-14);
        assert!(evaluate(&block_state(&s, 1), &c).unwrap().norm() < 1e-14);
    }

    #[test]
    fn decomposition_of_factor_and_mixture() {
        let s = shape23();
        let d = central_decomposition(&block_state(&s, 1), DEFAULT_TOL).unwrap();
        assert_eq!(d.weights(), vec![1.0]);
        let m = mix_states_pair(&s, 0.5);
        let d = central_decomposition(&m, DEFAULT_TOL).unwrap();
        assert_eq!(d.components.len(), 2);
        for w in d.weights() {
            assert!((w - 0.5).abs() < 1e-12);
        }
        assert!(reassembly_error(&m, &d).unwrap() < 1e-12);
    }
}
