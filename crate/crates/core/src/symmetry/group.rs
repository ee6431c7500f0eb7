use serde::Serialize;

use crate::error::{Error, Result};

/// A finite group given by its multiplication table, `table[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup("table must be a square array of element indices".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for (g, row) in table.iter().enumerate() {
            let inv = (0..n)
                .find(|&h| row[h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self { name: name.into(), table, identity, inverse })
    }

    /// ℤₙ with `g·h = g + h mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group needs n ≥ 1".into()));
        }
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table)
    }

    /// Dihedral group of order `2n`; element `k + n·e` is `rᵏ sᵉ` with
    /// `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group needs n ≥ 1".into()));
        }
        let decode = |g: usize| (g % n, g / n);
        let table = (0..2 * n)
            .map(|g| {
                (0..2 * n)
                    .map(|h| {
                        let ((k1, e1), (k2, e2)) = (decode(g), decode(h));
                        // rᵏ¹ sᵉ¹ rᵏ² sᵉ² = r^{k1 ± k2} s^{e1+e2}
                        let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                        k + n * ((e1 + e2) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(format!("D{n}"), table)
    }

    /// S₃ as the dihedral group of the triangle: `0,1,2` are rotations,
    /// `3,4,5` transpositions.
    pub fn symmetric3() -> Self {
        let mut g = Self::dihedral(3).expect("D3 is a group");
        g.name = "S3".into();
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidGroup(format!("element {g} out of range for group of order {}", self.order())))
        }
    }
}

/// A subgroup, stored as its sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut member = vec![false; group.order()];
        for &g in elements {
            group.check_element(g)?;
            member[g] = true;
        }
        if !member[group.identity()] {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        let elements: Vec<usize> = (0..group.order()).filter(|&g| member[g]).collect();
        for &a in &elements {
            if !member[group.inv(a)] || elements.iter().any(|&b| !member[group.mul(a, b)]) {
                return Err(Error::InvalidGroup(format!("{elements:?} is not closed")));
            }
        }
        Ok(Self { elements, member })
    }

    /// Subgroup generated by `gens`.
    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Result<Self> {
        let mut member = vec![false; group.order()];
        member[group.identity()] = true;
        let mut frontier = vec![group.identity()];
        while let Some(g) = frontier.pop() {
            for &s in gens {
                group.check_element(s)?;
                let x = group.mul(s, g);
                if !member[x] {
                    member[x] = true;
                    frontier.push(x);
                }
            }
        }
        let elements: Vec<usize> = (0..group.order()).filter(|&g| member[g]).collect();
        Self::new(group, &elements)
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self::new(group, &[group.identity()]).expect("identity subgroup")
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        let all: Vec<usize> = group.elements().collect();
        Self::new(group, &all).expect("whole group")
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.member.get(g).copied().unwrap_or(false)
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.member.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CosetSide {
    /// `Hg`, factorization `g = h·rep`.
    Right,
    /// `gH`, factorization `g = rep·h`.
    Left,
}

/// Cosets of a subgroup with the smallest element index as representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetSpace {
    side: CosetSide,
    group: FiniteGroup,
    subgroup: Subgroup,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn new(group: &FiniteGroup, subgroup: &Subgroup, side: CosetSide) -> Result<Self> {
        if subgroup.member.len() != group.order() {
            return Err(Error::InvalidGroup("subgroup belongs to a different group".into()));
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        for g in group.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in subgroup.elements() {
                let x = match side {
                    CosetSide::Right => group.mul(h, g),
                    CosetSide::Left => group.mul(g, h),
                };
                coset_of[x] = c;
            }
        }
        Ok(Self { side, group: group.clone(), subgroup: subgroup.clone(), reps, coset_of })
    }

    pub fn right(group: &FiniteGroup, subgroup: &Subgroup) -> Result<Self> {
        Self::new(group, subgroup, CosetSide::Right)
    }

    pub fn left(group: &FiniteGroup, subgroup: &Subgroup) -> Result<Self> {
        Self::new(group, subgroup, CosetSide::Left)
    }

    pub fn side(&self) -> CosetSide {
        self.side
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// `(h, c)` with `g = h·rep_c` (right cosets) or `g = rep_c·h` (left).
    pub fn factor(&self, g: usize) -> (usize, usize) {
        let c = self.coset_of[g];
        let r_inv = self.group.inv(self.reps[c]);
        let h = match self.side {
            CosetSide::Right => self.group.mul(g, r_inv),
            CosetSide::Left => self.group.mul(r_inv, g),
        };
        (h, c)
    }
}
