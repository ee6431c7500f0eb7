use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes `n_1..n_B` of `M_{n_1} ⊕ … ⊕ M_{n_B}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockShape {
    dims: Vec<usize>,
}

impl BlockShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if let Some(pos) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has size 0")));
        }
        Ok(Self { dims })
    }

    /// Single full matrix algebra `M_n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn block_dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// Complex dimension `Σ nᵢ²` of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// Offset of block `i` in the flattened coordinate vector.
    pub fn offset(&self, i: usize) -> usize {
        self.dims[..i].iter().map(|n| n * n).sum()
    }

    /// `(block, row, col)` of a flattened coordinate.
    pub fn locate(&self, mut idx: usize) -> (usize, usize, usize) {
        for (b, &n) in self.dims.iter().enumerate() {
            if idx < n * n {
                return (b, idx / n, idx % n);
            }
            idx -= n * n;
        }
        panic!("coordinate out of range for shape {:?}", self.dims);
    }

    /// The shape repeated `times` times, i.e. the algebra `⊕_{k<times} A`.
    pub fn repeat(&self, times: usize) -> Result<Self> {
        let mut dims = Vec::with_capacity(self.dims.len() * times);
        for _ in 0..times {
            dims.extend_from_slice(&self.dims);
        }
        Self::new(dims)
    }

    pub fn check_same(&self, other: &BlockShape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(self.dims.clone(), other.dims.clone()))
        }
    }
}

impl TryFrom<Vec<usize>> for BlockShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<BlockShape> for Vec<usize> {
    fn from(s: BlockShape) -> Self {
        s.dims
    }
}
