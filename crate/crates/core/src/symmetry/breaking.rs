use serde::Serialize;

use super::{AutomorphicAction, Subgroup};
use crate::algebra::{intertwiner_space, AlgebraElement, Representation, RepresentationStructure};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// For each group element, the permutation it induces on the central spectrum
/// of `π(F)″`: point `c` goes to the point equal to `π(τ_g(z_c))`, where `z_c`
/// is the ambient central projection carried by `c`.
pub fn induced_central_action(
    action: &AutomorphicAction,
    structure: &RepresentationStructure,
    tol: f64,
) -> Result<Vec<Vec<usize>>> {
    action.shape().check_same(structure.representation.source())?;
    let spectrum = &structure.central_spectrum;
    let match_tol = tol.sqrt();
    action
        .group()
        .elements()
        .map(|g| {
            (0..spectrum.len())
                .map(|c| {
                    let image = action.apply(g, &structure.ambient_projection(c))?;
                    let q = structure.representation.apply_element(&image)?;
                    spectrum.find(&q, match_tol).ok_or(Error::NotGStable { element: g, point: c })
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BreakingVerdict {
    Unbroken,
    Broken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BreakingClassification {
    pub verdict: BreakingVerdict,
    /// G-orbits of spectrum points, each sorted, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

pub fn classify_breaking(
    action: &AutomorphicAction,
    structure: &RepresentationStructure,
    tol: f64,
) -> Result<BreakingClassification> {
    let perms = induced_central_action(action, structure, tol)?;
    let n = structure.central_spectrum.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[start]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &c in &orbit {
            orbit_of[c] = orbits.len();
        }
        orbits.push(orbit);
    }
    let verdict = if orbits.len() == n { BreakingVerdict::Unbroken } else { BreakingVerdict::Broken };
    Ok(BreakingClassification { verdict, orbits, labels: structure.central_spectrum.labels().to_vec() })
}

/// A representation of `F` with unitaries `U(h)` for `h` in a subgroup such
/// that `π(τ_h(F)) = U(h) π(F) U(h)*`. `unitaries[g]` is `None` off the subgroup.
#[derive(Debug, Clone)]
pub struct CovariantPair {
    pub subgroup: Subgroup,
    pub representation: Representation,
    pub unitaries: Vec<Option<CMatrix>>,
}

impl CovariantPair {
    pub fn unitary(&self, h: usize) -> Result<&CMatrix> {
        self.unitaries
            .get(h)
            .and_then(|u| u.as_ref())
            .ok_or_else(|| Error::InvalidArgument(format!("element {h} is not in the subgroup")))
    }

    /// Worst of `‖π(τ_h(e)) − U(h)π(e)U(h)*‖` over matrix units, unitarity
    /// and the homomorphism law `U(h)U(h′) = U(hh′)`.
    pub fn covariance_defect(&self, action: &AutomorphicAction) -> Result<f64> {
        let shape = self.representation.source();
        let d = self.representation.dim();
        let mut worst = 0.0f64;
        for &h in self.subgroup.elements() {
            let u = self.unitary(h)?;
            worst = worst.max((u * u.adjoint() - CMatrix::identity(d, d)).norm());
            for i in 0..shape.algebra_dim() {
                let e = AlgebraElement::matrix_unit(shape, i);
                let lhs = self.representation.apply(&action.apply(h, &e)?)?;
                let rhs = u * self.representation.apply(&e)? * u.adjoint();
                worst = worst.max((lhs - rhs).norm());
            }
            for &k in self.subgroup.elements() {
                let prod = u * self.unitary(k)?;
                worst = worst.max((prod - self.unitary(action.group().mul(h, k))?).norm());
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone)]
pub struct UnbrokenSubgroup {
    /// Elements fixing every point of the central spectrum.
    pub central_kernel: Vec<usize>,
    /// Elements implemented by a unitary `U` with `π(τ_g(F)) = Uπ(F)U*` that
    /// commutes with the centre, found by solving the intertwiner equations.
    pub implementable: Vec<usize>,
    pub pair: CovariantPair,
    pub covariance_defect: f64,
}

impl UnbrokenSubgroup {
    pub fn subgroup(&self) -> &Subgroup {
        &self.pair.subgroup
    }
}

/// Maximal subgroup `H` acting trivially on the central spectrum, with a
/// covariant pair `(π, U)` for it.
///
/// `H = {g : π(τ_g(z_c)) = Q_c for every point c}`; this also works when `π`
/// is not G-stable. Such `h` fix every block charged by `π`, so
/// `U(h) = π(u_h)` with `u_h` the unitaries of `τ_h` on charged blocks (and
/// `1` elsewhere) implements `τ_h`. The implementable set is computed
/// independently from intertwiner spaces of `π` and `π∘τ_g` restricted to
/// operators commuting with the centre; a disagreement,
/// or a `U` that is only projective, is reported as `NotImplementable`.
pub fn maximal_unbroken_subgroup(
    action: &AutomorphicAction,
    structure: &RepresentationStructure,
    tol: f64,
) -> Result<UnbrokenSubgroup> {
    action.shape().check_same(structure.representation.source())?;
    let group = action.group();
    let rep = &structure.representation;
    let shape = action.shape();
    let spectrum = &structure.central_spectrum;
    let match_tol = tol.sqrt();

    let mut central_kernel = Vec::new();
    for g in group.elements() {
        let mut fixes = true;
        for (c, q) in spectrum.projections().iter().enumerate() {
            let image = rep.apply_element(&action.apply(g, &structure.ambient_projection(c))?)?;
            if image.distance(q)? > match_tol {
                fixes = false;
                break;
            }
        }
        if fixes {
            central_kernel.push(g);
        }
    }
    let subgroup = Subgroup::new(group, &central_kernel)?;

    let centre: Vec<CMatrix> = spectrum.projections().iter().map(|q| q.block(0).clone()).collect();
    let mut implementable = Vec::new();
    for g in group.elements() {
        let twisted = Representation::from_fn(shape, rep.dim(), |a| {
            rep.apply(&action.apply(g, a).expect("own shape")).expect("own shape")
        })?;
        if has_central_intertwiner(rep, &twisted, &centre, tol)? {
            implementable.push(g);
        }
    }
    if implementable != central_kernel {
        let element = central_kernel
            .iter()
            .chain(&implementable)
            .copied()
            .find(|g| !(central_kernel.contains(g) && implementable.contains(g)))
            .unwrap_or(0);
        return Err(Error::NotImplementable { element, defect: f64::NAN });
    }

    let charged = structure.charged_blocks();
    let mut unitaries = vec![None; group.order()];
    for &h in subgroup.elements() {
        let auto = action.automorphism(h);
        let blocks = shape
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &n)| if charged.contains(&i) { auto.unitaries()[i].clone() } else { CMatrix::identity(n, n) })
            .collect();
        unitaries[h] = Some(rep.apply(&AlgebraElement::new(shape.clone(), blocks)?)?);
    }
    let pair = CovariantPair { subgroup, representation: rep.clone(), unitaries };
    let covariance_defect = pair.covariance_defect(action)?;
    if covariance_defect > tol.sqrt() {
        let element = pair
            .subgroup
            .elements()
            .iter()
            .copied()
            .find(|&h| h != group.identity())
            .unwrap_or(group.identity());
        return Err(Error::NotImplementable { element, defect: covariance_defect });
    }
    Ok(UnbrokenSubgroup { central_kernel, implementable, pair, covariance_defect })
}

/// Whether some invertible intertwiner from `r1` to `r2` commutes with every
/// central projection of `r1`. The admissible intertwiners form a linear
/// space; a generic combination of its basis is invertible as soon as any
/// element is.
fn has_central_intertwiner(r1: &Representation, r2: &Representation, centre: &[CMatrix], tol: f64) -> Result<bool> {
    let basis = intertwiner_space(r1, r2, tol)?;
    if basis.is_empty() {
        return Ok(false);
    }
    let d = r1.dim();
    let rows = centre.len().max(1) * d * d;
    let mut system = CMatrix::zeros(rows, basis.len());
    for (k, b) in basis.iter().enumerate() {
        let mut col = Vec::with_capacity(rows);
        for q in centre {
            col.extend(linalg::flatten(&(b * q - q * b)));
        }
        col.resize(rows, linalg::re(0.0));
        system.set_column(k, &CVector::from_vec(col));
    }
    let coefficients = linalg::nullspace_with_floor(&system, tol, tol.sqrt());
    if coefficients.is_empty() {
        return Ok(false);
    }
    let mut t = CMatrix::zeros(d, d);
    for (j, x) in coefficients.iter().enumerate() {
        // Fixed irrational weights keep the combination generic and deterministic.
        let w = linalg::c((j as f64 * 0.618_033_988_75).fract() + 0.5, (j as f64 * 0.414_213_562_37).fract());
        for (k, b) in basis.iter().enumerate() {
            t += b * (x[k] * w);
        }
    }
    let sv = linalg::singular_values(&t);
    let (min, max) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    Ok(min > tol.sqrt() * max)
}
