use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;

use super::BlockShape;
use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix, CVector, C64};

/// An element of `⊕ᵢ M_{nᵢ}`, stored block by block.
///
/// The checked methods (`try_add`, `try_mul`, …) return an error on shape
/// mismatch; the operator impls on references panic instead, like nalgebra's.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    shape: BlockShape,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(shape: BlockShape, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::InvalidMatrix(format!(
                "expected {} blocks, got {}",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::InvalidMatrix(format!(
                    "block {i} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn zero(shape: &BlockShape) -> Self {
        let blocks = shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self { shape: shape.clone(), blocks }
    }

    pub fn unit(shape: &BlockShape) -> Self {
        let blocks = shape.dims().iter().map(|&n| CMatrix::identity(n, n)).collect();
        Self { shape: shape.clone(), blocks }
    }

    /// Identity of block `i`, zero elsewhere (a minimal central projection).
    pub fn block_identity(shape: &BlockShape, i: usize) -> Self {
        let mut e = Self::zero(shape);
        let n = shape.block_dim(i);
        e.blocks[i] = CMatrix::identity(n, n);
        e
    }

    /// Matrix unit for flattened coordinate `idx` (see [`BlockShape::locate`]).
    pub fn matrix_unit(shape: &BlockShape, idx: usize) -> Self {
        let (b, r, c) = shape.locate(idx);
        let mut e = Self::zero(shape);
        e.blocks[b][(r, c)] = re(1.0);
        e
    }

    /// Element supported on a single block.
    pub fn from_block(shape: &BlockShape, i: usize, m: CMatrix) -> Result<Self> {
        let mut blocks: Vec<CMatrix> = shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        blocks[i] = m;
        Self::new(shape.clone(), blocks)
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn map_blocks(&self, mut f: impl FnMut(usize, &CMatrix) -> CMatrix) -> Self {
        let blocks = self.blocks.iter().enumerate().map(|(i, b)| f(i, b)).collect();
        Self { shape: self.shape.clone(), blocks }
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        self.shape.check_same(&other.shape)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(Self { shape: self.shape.clone(), blocks })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_blocks(|_, b| b * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map_blocks(|_, b| b * re(s))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|_, b| b.adjoint())
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Trace inner product `Σᵢ Tr(aᵢ* bᵢ)`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.shape.check_same(&other.shape)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dotc(b))
            .sum())
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::hermiticity_defect(b) <= tol * b.norm().max(1.0))
    }

    /// Concatenated row-major coordinates; the trace inner product becomes
    /// the standard Hermitian product on these vectors.
    pub fn to_vector(&self) -> CVector {
        let data: Vec<C64> = self.blocks.iter().flat_map(|b| linalg::flatten(b).collect::<Vec<_>>()).collect();
        DVector::from_vec(data)
    }

    pub fn from_vector(shape: &BlockShape, v: &CVector) -> Result<Self> {
        if v.len() != shape.algebra_dim() {
            return Err(Error::InvalidMatrix(format!(
                "coordinate vector has length {}, algebra dimension is {}",
                v.len(),
                shape.algebra_dim()
            )));
        }
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        let mut off = 0;
        for &n in shape.dims() {
            blocks.push(CMatrix::from_row_slice(n, n, &v.as_slice()[off..off + n * n]));
            off += n * n;
        }
        Ok(Self { shape: shape.clone(), blocks })
    }

    /// Splits an element of `shape.repeat(k)` into `k` elements of `shape`.
    pub fn split_repeated(&self, base: &BlockShape) -> Result<Vec<AlgebraElement>> {
        let b = base.num_blocks();
        if !self.shape.num_blocks().is_multiple_of(b) {
            return Err(Error::ShapeMismatch(self.shape.dims().to_vec(), base.dims().to_vec()));
        }
        self.blocks
            .chunks(b)
            .map(|chunk| AlgebraElement::new(base.clone(), chunk.to_vec()))
            .collect()
    }

    /// Inverse of [`split_repeated`](Self::split_repeated).
    pub fn concat(parts: &[AlgebraElement]) -> Result<AlgebraElement> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot concatenate zero elements".into()))?;
        let mut blocks = Vec::new();
        for p in parts {
            first.shape.check_same(&p.shape)?;
            blocks.extend(p.blocks.iter().cloned());
        }
        let shape = first.shape.repeat(parts.len())?;
        AlgebraElement::new(shape, blocks)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.frobenius_norm())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.try_add(rhs).expect("shape mismatch in AlgebraElement addition")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.try_sub(rhs).expect("shape mismatch in AlgebraElement subtraction")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.try_mul(rhs).expect("shape mismatch in AlgebraElement product")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale_real(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, random_complex_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&v| re(v))))
    }

    #[test]
    fn unit_is_idempotent() {
        let s = BlockShape::new(vec![2, 3]).unwrap();
        let one = AlgebraElement::unit(&s);
        assert_eq!(&one * &one, one);
    }

    #[test]
    fn involution() {
        let s = BlockShape::new(vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = AlgebraElement::new(
            s.clone(),
            vec![random_complex_matrix(&mut rng, 2, 2), random_complex_matrix(&mut rng, 3, 3)],
        )
        .unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn diagonal_product() {
        let s = BlockShape::full(2).unwrap();
        let a = AlgebraElement::new(s.clone(), vec![diag(&[1.0, 2.0])]).unwrap();
        let b = AlgebraElement::new(s.clone(), vec![diag(&[3.0, 4.0])]).unwrap();
        assert_eq!((&a * &b).block(0), &diag(&[3.0, 8.0]));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = AlgebraElement::unit(&BlockShape::full(2).unwrap());
        let b = AlgebraElement::unit(&BlockShape::full(3).unwrap());
        assert!(matches!(a.try_mul(&b), Err(Error::ShapeMismatch(..))));
        assert!(a.inner(&b).is_err());
    }

    #[test]
    fn operator_norms() {
        let s = BlockShape::new(vec![2, 3]).unwrap();
        assert!((AlgebraElement::unit(&s).norm() - 1.0).abs() < 1e-14);
        let d = AlgebraElement::new(BlockShape::full(2).unwrap(), vec![diag(&[3.0, -4.0])]).unwrap();
        assert!((d.norm() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn vector_round_trip_and_inner_product() {
        let s = BlockShape::new(vec![1, 2]).unwrap();
        let a = AlgebraElement::new(
            s.clone(),
            vec![CMatrix::from_element(1, 1, c(1.0, 2.0)), diag(&[3.0, 4.0])],
        )
        .unwrap();
        let v = a.to_vector();
        assert_eq!(AlgebraElement::from_vector(&s, &v).unwrap(), a);
        assert!((a.inner(&a).unwrap().re - v.norm_squared()).abs() < 1e-14);
    }
}
