use super::{Boundary, ScaleGrid};
use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// `Â = (λ ↦ Â(λ))` over a scale grid, one value per grid index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSection {
    grid: ScaleGrid,
    shape: BlockShape,
    values: Vec<AlgebraElement>,
}

impl ScalingSection {
    pub fn new(grid: ScaleGrid, values: Vec<AlgebraElement>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!("need {} fiber values, got {}", grid.len(), values.len())));
        }
        let shape = values[0].shape().clone();
        for v in &values {
            shape.check_same(v.shape())?;
        }
        Ok(Self { grid, shape, values })
    }

    /// `ι(a)`: the constant section.
    pub fn constant(grid: ScaleGrid, a: &AlgebraElement) -> Self {
        Self { grid, shape: a.shape().clone(), values: vec![a.clone(); grid.len()] }
    }

    pub fn unit(grid: ScaleGrid, shape: &BlockShape) -> Self {
        Self::constant(grid, &AlgebraElement::unit(shape))
    }

    /// Central scalar section `λ_k ↦ f_k · 1`.
    pub fn scalar(grid: ScaleGrid, shape: &BlockShape, f: &[f64]) -> Result<Self> {
        if f.len() != grid.len() {
            return Err(Error::InvalidArgument("scalar function has the wrong length".into()));
        }
        let one = AlgebraElement::unit(shape);
        Self::new(grid, f.iter().map(|&x| one.scale_real(x)).collect())
    }

    /// Indicator of grid index `k`.
    pub fn indicator(grid: ScaleGrid, shape: &BlockShape, k: usize) -> Result<Self> {
        let f: Vec<f64> = (0..grid.len()).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
        Self::scalar(grid, shape, &f)
    }

    pub fn grid(&self) -> &ScaleGrid {
        &self.grid
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &AlgebraElement {
        &self.values[k]
    }

    pub fn at(&self, lambda: f64) -> Result<&AlgebraElement> {
        Ok(&self.values[self.grid.index_of(lambda)?])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("scale grids differ".into()));
        }
        self.shape.check_same(&other.shape)
    }

    fn zip(&self, other: &Self, f: impl Fn(&AlgebraElement, &AlgebraElement) -> Result<AlgebraElement>) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(Self { grid: self.grid, shape: self.shape.clone(), values })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.try_mul(b))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|_, v| v.scale(s))
    }

    pub fn adjoint(&self) -> Self {
        self.map(|_, v| v.adjoint())
    }

    pub fn map(&self, mut f: impl FnMut(usize, &AlgebraElement) -> AlgebraElement) -> Self {
        let values = self.values.iter().enumerate().map(|(k, v)| f(k, v)).collect();
        Self { grid: self.grid, shape: self.shape.clone(), values }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(AlgebraElement::norm).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        self.values
            .iter()
            .zip(&other.values)
            .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(a.distance(b)?)))
    }

    /// All fibers as one element of `F^{⊕(2K+1)}`.
    pub fn to_element(&self) -> AlgebraElement {
        AlgebraElement::concat(&self.values).expect("common shape")
    }

    pub fn from_element(grid: ScaleGrid, base: &BlockShape, x: &AlgebraElement) -> Result<Self> {
        Self::new(grid, x.split_repeated(base)?)
    }
}

/// `(σ̂_μ Â)(λ) = Â(μλ)` for `μ = r^m`.
pub fn sigma(mu: f64, a: &ScalingSection) -> Result<ScalingSection> {
    sigma_index(a.grid.exponent_of(mu)?, a)
}

/// [`sigma`] by an integer exponent. In strict mode fibers shifted in from
/// outside the window are zero, and a nonzero fiber that would leave the
/// window is an error.
pub fn sigma_index(m: i64, a: &ScalingSection) -> Result<ScalingSection> {
    let grid = a.grid;
    if grid.boundary() == Boundary::Strict {
        for (j, v) in a.values.iter().enumerate() {
            let target = j as i64 - m;
            if (target < 0 || target >= grid.len() as i64) && v.frobenius_norm() > 0.0 {
                return Err(Error::WindowOverflow { shift: m });
            }
        }
    }
    let zero = AlgebraElement::zero(&a.shape);
    let values = (0..grid.len())
        .map(|k| grid.shifted(k, m).map(|j| a.values[j].clone()).unwrap_or_else(|| zero.clone()))
        .collect();
    Ok(ScalingSection { grid, shape: a.shape.clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, re};

    fn grid() -> ScaleGrid {
        ScaleGrid::new(2.0, 2, Boundary::Cyclic).unwrap()
    }

    fn ramp(grid: ScaleGrid) -> ScalingSection {
        let s = BlockShape::full(2).unwrap();
        let values = (0..grid.len())
            .map(|k| AlgebraElement::new(s.clone(), vec![linalg::diag(&[k as f64, 0.0])]).unwrap())
            .collect();
        ScalingSection::new(grid, values).unwrap()
    }

    #[test]
    fn arithmetic_and_norm() {
        let a = ramp(grid());
        let one = ScalingSection::unit(grid(), a.shape());
        assert_eq!(one.try_mul(&a).unwrap(), a);
        assert_eq!(a.sup_norm(), 4.0);
        let b = a.scale(linalg::c(0.0, 1.0)).adjoint();
        for k in 0..5 {
            assert_eq!(b.value(k), &a.value(k).scale(linalg::c(0.0, 1.0)).adjoint());
        }
    }

    #[test]
    fn sigma_group_law_and_identity() {
        let a = ramp(grid());
        assert_eq!(sigma(1.0, &a).unwrap(), a);
        for m1 in -4..=4 {
            for m2 in -4..=4 {
                let lhs = sigma_index(m1, &sigma_index(m2, &a).unwrap()).unwrap();
                assert_eq!(lhs, sigma_index(m1 + m2, &a).unwrap());
            }
            assert_eq!(sigma_index(m1, &a).unwrap().sup_norm(), a.sup_norm());
        }
        assert_eq!(sigma(2.0, &a).unwrap().value(0), a.value(1));
        assert!(matches!(sigma(3.0, &a), Err(Error::OffGrid(_))));
    }

    #[test]
    fn sigma_translates_central_scalars() {
        let s = BlockShape::new(vec![1, 2]).unwrap();
        let f = [0.5, -1.0, 2.0, 3.0, 7.0];
        let x = ScalingSection::scalar(grid(), &s, &f).unwrap();
        let y = sigma_index(2, &x).unwrap();
        let shifted: Vec<f64> = (0..5).map(|k| f[(k + 2) % 5]).collect();
        assert_eq!(y, ScalingSection::scalar(grid(), &s, &shifted).unwrap());
    }

    #[test]
    fn strict_window() {
        let g = ScaleGrid::new(2.0, 2, Boundary::Strict).unwrap();
        let s = BlockShape::full(1).unwrap();
        let x = ScalingSection::indicator(g, &s, 2).unwrap();
        let y = sigma_index(1, &x).unwrap();
        assert_eq!(y, ScalingSection::indicator(g, &s, 1).unwrap());
        assert!(matches!(sigma_index(3, &x), Err(Error::WindowOverflow { shift: 3 })));
        let unit = ScalingSection::unit(g, &s);
        assert!(sigma_index(1, &unit).is_err());
        assert_eq!(sigma_index(0, &unit).unwrap().value(0).trace(), re(1.0));
    }
}
