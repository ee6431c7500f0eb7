use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Indices wrap modulo `2K+1`; σ̂ is an exact group action.
    Cyclic,
    /// No wrap; shifting a nonzero fiber out of the window is an error.
    Strict,
}

/// Geometric grid `λ_k = r^k`, `k = −K..=K`, stored by index `k + K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct ScaleGrid {
    ratio: f64,
    k_max: usize,
    boundary: Boundary,
}

#[derive(Serialize, Deserialize)]
struct GridSpec {
    ratio: f64,
    #[serde(rename = "K")]
    k_max: usize,
    #[serde(default = "default_boundary")]
    boundary: Boundary,
}

fn default_boundary() -> Boundary {
    Boundary::Cyclic
}

impl TryFrom<GridSpec> for ScaleGrid {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Self::new(s.ratio, s.k_max, s.boundary)
    }
}

impl From<ScaleGrid> for GridSpec {
    fn from(g: ScaleGrid) -> Self {
        GridSpec { ratio: g.ratio, k_max: g.k_max, boundary: g.boundary }
    }
}

impl ScaleGrid {
    pub fn new(ratio: f64, k_max: usize, boundary: Boundary) -> Result<Self> {
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(Error::InvalidArgument(format!("grid ratio must exceed 1, got {ratio}")));
        }
        Ok(Self { ratio, k_max, boundary })
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn len(&self) -> usize {
        2 * self.k_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of `λ = 1`.
    pub fn unit_index(&self) -> usize {
        self.k_max
    }

    pub fn exponent(&self, index: usize) -> i64 {
        index as i64 - self.k_max as i64
    }

    pub fn lambda(&self, index: usize) -> f64 {
        self.ratio.powi(self.exponent(index) as i32)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.lambda(i)).collect()
    }

    /// Integer `m` with `μ = r^m`.
    pub fn exponent_of(&self, mu: f64) -> Result<i64> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::OffGrid(mu));
        }
        let m = mu.ln() / self.ratio.ln();
        let rounded = m.round();
        if (m - rounded).abs() > 1e-9 {
            return Err(Error::OffGrid(mu));
        }
        Ok(rounded as i64)
    }

    /// Grid index of `λ`.
    pub fn index_of(&self, lambda: f64) -> Result<usize> {
        let k = self.exponent_of(lambda)?;
        if k.unsigned_abs() as usize > self.k_max {
            return Err(Error::OffGrid(lambda));
        }
        Ok((k + self.k_max as i64) as usize)
    }

    /// Index reached from `index` after shifting by `m`: wraps in cyclic mode,
    /// `None` outside the window in strict mode.
    pub fn shifted(&self, index: usize, m: i64) -> Option<usize> {
        let n = self.len() as i64;
        let j = index as i64 + m;
        match self.boundary {
            Boundary::Cyclic => Some(j.rem_euclid(n) as usize),
            Boundary::Strict => (0..n).contains(&j).then_some(j as usize),
        }
    }

    /// Whether `index + m` leaves the window (wraps, in cyclic mode).
    pub fn wraps(&self, index: usize, m: i64) -> bool {
        let j = index as i64 + m;
        j < 0 || j >= self.len() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_indices() {
        let g = ScaleGrid::new(2.0, 2, Boundary::Cyclic).unwrap();
        assert_eq!(g.points(), vec![0.25, 0.5, 1.0, 2.0, 4.0]);
        assert_eq!(g.index_of(4.0).unwrap(), 4);
        assert_eq!(g.index_of(1.0).unwrap(), g.unit_index());
        assert!(matches!(g.index_of(8.0), Err(Error::OffGrid(_))));
        assert!(matches!(g.index_of(3.0), Err(Error::OffGrid(_))));
        assert_eq!(g.shifted(4, 1), Some(0));
        let s = ScaleGrid::new(2.0, 2, Boundary::Strict).unwrap();
        assert_eq!(s.shifted(4, 1), None);
        assert!(ScaleGrid::new(1.0, 2, Boundary::Cyclic).is_err());
    }

    #[test]
    fn serde_spec() {
        let g: ScaleGrid = serde_json::from_str(r#"{"ratio": 2.0, "K": 3, "boundary": "strict"}"#).unwrap();
        assert_eq!((g.len(), g.boundary()), (7, Boundary::Strict));
        let g: ScaleGrid = serde_json::from_str(r#"{"ratio": 1.5, "K": 1}"#).unwrap();
        assert_eq!(g.boundary(), Boundary::Cyclic);
        assert!(serde_json::from_str::<ScaleGrid>(r#"{"ratio": 0.5, "K": 1}"#).is_err());
    }
}
