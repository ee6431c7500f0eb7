use std::collections::VecDeque;

use serde::Serialize;

use super::{FiniteGroup, Subgroup};
use crate::algebra::{AlgebraElement, BlockShape, OperatorSubalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// `τ(a)_{σ(j)} = U_{σ(j)} a_j U_{σ(j)}*`: block `j` is carried to block
/// `σ(j)` and conjugated by the unitary attached to the target block.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    shape: BlockShape,
    perm: Vec<usize>,
    unitaries: Vec<CMatrix>,
}

impl Automorphism {
    /// Checks that `perm` is a permutation between equal-sized blocks and that
    /// the unitaries have the right sizes. Unitarity itself is audited by
    /// [`verify_action`] so that defects can be located.
    pub fn new(shape: BlockShape, perm: Vec<usize>, unitaries: Vec<CMatrix>) -> Result<Self> {
        let k = shape.num_blocks();
        if perm.len() != k || unitaries.len() != k {
            return Err(Error::InvalidAction(format!("need {k} permutation entries and unitaries")));
        }
        let mut seen = vec![false; k];
        for (j, &t) in perm.iter().enumerate() {
            if t >= k || seen[t] {
                return Err(Error::InvalidAction(format!("{perm:?} is not a permutation")));
            }
            seen[t] = true;
            if shape.block_dim(j) != shape.block_dim(t) {
                return Err(Error::InvalidAction(format!("block {j} cannot map to block {t} of a different size")));
            }
        }
        for (i, u) in unitaries.iter().enumerate() {
            let n = shape.block_dim(i);
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::InvalidAction(format!("unitary for block {i} must be {n}x{n}")));
            }
        }
        Ok(Self { shape, perm, unitaries })
    }

    pub fn identity(shape: &BlockShape) -> Self {
        let perm = (0..shape.num_blocks()).collect();
        let unitaries = shape.dims().iter().map(|&n| CMatrix::identity(n, n)).collect();
        Self { shape: shape.clone(), perm, unitaries }
    }

    /// Pure block permutation with identity unitaries.
    pub fn permutation(shape: &BlockShape, perm: Vec<usize>) -> Result<Self> {
        let unitaries = shape.dims().iter().map(|&n| CMatrix::identity(n, n)).collect();
        Self::new(shape.clone(), perm, unitaries)
    }

    /// `Ad u` for a unitary `u` of the algebra.
    pub fn inner(u: &AlgebraElement) -> Result<Self> {
        let shape = u.shape().clone();
        let perm = (0..shape.num_blocks()).collect();
        Self::new(shape, perm, u.blocks().to_vec())
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn block_permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.shape.check_same(a.shape())?;
        let mut blocks: Vec<CMatrix> = self.shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        for (j, aj) in a.blocks().iter().enumerate() {
            let t = self.perm[j];
            let u = &self.unitaries[t];
            blocks[t] = u * aj * u.adjoint();
        }
        AlgebraElement::new(self.shape.clone(), blocks)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.shape.check_same(&other.shape)?;
        let k = self.perm.len();
        let perm: Vec<usize> = (0..k).map(|j| self.perm[other.perm[j]]).collect();
        let mut inv_self = vec![0; k];
        for (j, &t) in self.perm.iter().enumerate() {
            inv_self[t] = j;
        }
        let unitaries = (0..k).map(|i| &self.unitaries[i] * &other.unitaries[inv_self[i]]).collect();
        Ok(Automorphism { shape: self.shape.clone(), perm, unitaries })
    }

    pub fn inverse(&self) -> Automorphism {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        for (j, &t) in self.perm.iter().enumerate() {
            perm[t] = j;
        }
        let unitaries = (0..k).map(|j| self.unitaries[self.perm[j]].adjoint()).collect();
        Automorphism { shape: self.shape.clone(), perm, unitaries }
    }

    /// Largest `‖UᵢUᵢ* − 1‖_F` and the block where it occurs.
    pub fn unitarity_defect(&self) -> (f64, usize) {
        self.unitaries
            .iter()
            .enumerate()
            .map(|(i, u)| ((u * u.adjoint() - CMatrix::identity(u.nrows(), u.nrows())).norm(), i))
            .fold((0.0, 0), |best, x| if x.0 > best.0 { x } else { best })
    }

    /// Matrix of the map on the vectorized algebra.
    pub fn matrix(&self) -> CMatrix {
        let n = self.shape.algebra_dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            let img = self.apply(&AlgebraElement::matrix_unit(&self.shape, i)).expect("own shape");
            m.set_column(i, &img.to_vector());
        }
        m
    }
}

/// `g ↦ τ_g` for every element of a finite group.
#[derive(Debug, Clone)]
pub struct AutomorphicAction {
    group: FiniteGroup,
    shape: BlockShape,
    automorphisms: Vec<Automorphism>,
}

impl AutomorphicAction {
    /// Explicit table, one automorphism per element. Not audited here.
    pub fn from_table(group: FiniteGroup, automorphisms: Vec<Automorphism>) -> Result<Self> {
        if automorphisms.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "need {} automorphisms, got {}",
                group.order(),
                automorphisms.len()
            )));
        }
        let shape = automorphisms[0].shape.clone();
        for a in &automorphisms {
            shape.check_same(&a.shape)?;
        }
        Ok(Self { group, shape, automorphisms })
    }

    /// Completes an action from generator images by breadth-first search over
    /// `τ_{s·g} = τ_s ∘ τ_g`. The result still needs [`verify_action`], since
    /// inconsistent generator data only shows up in the homomorphism audit.
    pub fn from_generators(group: FiniteGroup, shape: &BlockShape, gens: &[(usize, Automorphism)]) -> Result<Self> {
        for (s, a) in gens {
            group.check_element(*s)?;
            shape.check_same(&a.shape)?;
        }
        let mut table: Vec<Option<Automorphism>> = vec![None; group.order()];
        table[group.identity()] = Some(Automorphism::identity(shape));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(g) = queue.pop_front() {
            for (s, a) in gens {
                let sg = group.mul(*s, g);
                if table[sg].is_none() {
                    let tg = table[g].as_ref().expect("visited");
                    table[sg] = Some(a.compose(tg)?);
                    queue.push_back(sg);
                }
            }
        }
        let automorphisms = table
            .into_iter()
            .enumerate()
            .map(|(g, a)| a.ok_or_else(|| Error::InvalidAction(format!("generators do not reach element {g}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(group, automorphisms)
    }

    pub fn trivial(group: FiniteGroup, shape: &BlockShape) -> Self {
        let automorphisms = vec![Automorphism::identity(shape); group.order()];
        Self { group, shape: shape.clone(), automorphisms }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn automorphism(&self, g: usize) -> &Automorphism {
        &self.automorphisms[g]
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    pub fn apply(&self, g: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.group.check_element(g)?;
        self.automorphisms[g].apply(a)
    }

    /// Mutable access for perturbation experiments.
    pub fn automorphism_mut(&mut self, g: usize) -> &mut Automorphism {
        &mut self.automorphisms[g]
    }
}

impl Automorphism {
    pub fn unitaries_mut(&mut self) -> &mut [CMatrix] {
        &mut self.unitaries
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ActionDefect {
    NonUnitary { element: usize, block: usize },
    NotHomomorphic { left: usize, right: usize },
    NonTrivialIdentity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionAudit {
    pub ok: bool,
    pub max_defect: f64,
    pub worst: Option<ActionDefect>,
}

/// Audits unitarity of every `U`, `τ_e = id` and `τ_g∘τ_h = τ_{gh}` on
/// matrix units.
pub fn verify_action(action: &AutomorphicAction, tol: f64) -> ActionAudit {
    let mut max_defect = 0.0;
    let mut worst = None;
    let mut record = |d: f64, what: ActionDefect| {
        if d > max_defect {
            max_defect = d;
            worst = Some(what);
        }
    };
    for (g, a) in action.automorphisms.iter().enumerate() {
        let (d, block) = a.unitarity_defect();
        record(d, ActionDefect::NonUnitary { element: g, block });
    }
    let shape = &action.shape;
    let units: Vec<AlgebraElement> = (0..shape.algebra_dim()).map(|i| AlgebraElement::matrix_unit(shape, i)).collect();
    let e = action.group.identity();
    for u in &units {
        let d = action.automorphisms[e].apply(u).and_then(|x| x.distance(u)).unwrap_or(f64::INFINITY);
        record(d, ActionDefect::NonTrivialIdentity);
    }
    let images: Vec<Vec<AlgebraElement>> = action
        .automorphisms
        .iter()
        .map(|a| units.iter().map(|u| a.apply(u).expect("own shape")).collect())
        .collect();
    for g in action.group.elements() {
        for h in action.group.elements() {
            let gh = action.group.mul(g, h);
            let tg = &action.automorphisms[g];
            let d = images[h]
                .iter()
                .zip(&images[gh])
                .map(|(x, y)| tg.apply(x).and_then(|z| z.distance(y)).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            record(d, ActionDefect::NotHomomorphic { left: g, right: h });
        }
    }
    ActionAudit { ok: max_defect <= tol, max_defect, worst }
}

/// `m_K(x) = |K|⁻¹ Σ_{k∈K} τ_k(x)`.
pub fn group_average(action: &AutomorphicAction, subgroup: &Subgroup, x: &AlgebraElement) -> Result<AlgebraElement> {
    let mut acc = AlgebraElement::zero(x.shape());
    for &k in subgroup.elements() {
        acc = acc.try_add(&action.apply(k, x)?)?;
    }
    Ok(acc.scale_real(1.0 / subgroup.order() as f64))
}

/// `m_G(x)`.
pub fn average_over_group(action: &AutomorphicAction, x: &AlgebraElement) -> Result<AlgebraElement> {
    group_average(action, &Subgroup::whole(&action.group), x)
}

/// `m_{G/H}(B) = [G:H]⁻¹ Σ_{gH} τ_g(B)` for `B ∈ F^H`.
pub fn coset_average(
    action: &AutomorphicAction,
    subgroup: &Subgroup,
    x: &AlgebraElement,
    tol: f64,
) -> Result<AlgebraElement> {
    for &h in subgroup.elements() {
        let d = action.apply(h, x)?.distance(x)?;
        if d > tol * x.frobenius_norm().max(1.0) {
            return Err(Error::Domain(format!("argument is not fixed by subgroup element {h} (defect {d:.3e})")));
        }
    }
    let cosets = super::CosetSpace::left(&action.group, subgroup)?;
    let mut acc = AlgebraElement::zero(x.shape());
    for &r in cosets.representatives() {
        acc = acc.try_add(&action.apply(r, x)?)?;
    }
    Ok(acc.scale_real(1.0 / cosets.len() as f64))
}

/// `F^K` as the range of the averaging projector `m_K`.
pub fn fixed_point_algebra(action: &AutomorphicAction, subgroup: &Subgroup, tol: f64) -> Result<OperatorSubalgebra> {
    let n = action.shape.algebra_dim();
    let mut p = CMatrix::zeros(n, n);
    for &k in subgroup.elements() {
        p += action.automorphisms[k].matrix();
    }
    p /= linalg::re(subgroup.order() as f64);
    fixed_subspace(action.shape(), &p, tol)
}

/// Range of a projector `p` on the vectorized algebra, via `ker(p − 1)`.
pub(crate) fn fixed_subspace(shape: &BlockShape, p: &CMatrix, tol: f64) -> Result<OperatorSubalgebra> {
    let n = p.nrows();
    let vectors: Vec<CVector> = linalg::nullspace(&(p - CMatrix::identity(n, n)), tol);
    OperatorSubalgebra::from_orthonormal_vectors(shape, &vectors)
}
