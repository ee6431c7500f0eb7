use super::{AlgebraElement, BlockShape, OperatorSubalgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Points of the Gelfand spectrum of a commutative subalgebra, realized as its
/// minimal projections.
#[derive(Debug, Clone)]
pub struct CentralSpectrum {
    projections: Vec<AlgebraElement>,
    labels: Vec<String>,
}

impl CentralSpectrum {
    pub fn new(projections: Vec<AlgebraElement>, labels: Vec<String>) -> Result<Self> {
        if projections.len() != labels.len() {
            return Err(Error::InvalidArgument("one label per projection is required".into()));
        }
        Ok(Self { projections, labels })
    }

    pub fn projections(&self) -> &[AlgebraElement] {
        &self.projections
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn relabel(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.projections.len() {
            return Err(Error::InvalidArgument("label count mismatch".into()));
        }
        self.labels = labels;
        Ok(())
    }

    /// Index of the point whose projection equals `p` (Frobenius distance ≤ tol).
    pub fn find(&self, p: &AlgebraElement, tol: f64) -> Option<usize> {
        self.projections
            .iter()
            .position(|q| q.distance(p).map(|d| d <= tol).unwrap_or(false))
    }

    /// Worst violation of `PᵢPⱼ = δᵢⱼPᵢ`, `Pᵢ = Pᵢ*` and `ΣPᵢ = 1`.
    pub fn partition_defect(&self) -> f64 {
        let Some(first) = self.projections.first() else {
            return f64::INFINITY;
        };
        let shape = first.shape().clone();
        let mut worst = 0.0f64;
        let mut sum = AlgebraElement::zero(&shape);
        for (i, p) in self.projections.iter().enumerate() {
            worst = worst.max((p - &p.adjoint()).frobenius_norm());
            for (j, q) in self.projections.iter().enumerate() {
                let pq = p * q;
                let target = if i == j { p.clone() } else { AlgebraElement::zero(&shape) };
                worst = worst.max((&pq - &target).frobenius_norm());
            }
            sum = &sum + p;
        }
        worst.max((&sum - &AlgebraElement::unit(&shape)).frobenius_norm())
    }
}

/// Minimal projections of a commutative *-subalgebra `z`.
///
/// A generic self-adjoint element of `z` is diagonalized block by block and its
/// eigenvalues are clustered globally; each cluster's spectral projection is a
/// point of the spectrum. A degenerate draw (fewer clusters than `dim z`) is
/// retried with a different seed.
pub fn minimal_central_projections(z: &OperatorSubalgebra, tol: f64) -> Result<CentralSpectrum> {
    let comm = z.max_commutator_with(z.basis())?;
    if comm > tol.sqrt() {
        return Err(Error::NonCommutative(comm));
    }
    let shape = z.shape().clone();
    for attempt in 0..8u64 {
        let h = z.generic_self_adjoint(0xc1a5_7e40 + attempt);
        let mut entries: Vec<(f64, usize, usize)> = Vec::new();
        let mut eig: Vec<CMatrix> = Vec::new();
        for (blk, b) in h.blocks().iter().enumerate() {
            let (vals, vecs) = linalg::eigh(b);
            for (k, v) in vals.into_iter().enumerate() {
                entries.push((v, blk, k));
            }
            eig.push(vecs);
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let values: Vec<f64> = entries.iter().map(|e| e.0).collect();
        let clusters = linalg::cluster_sorted(&values, tol.max(1e-9));
        if clusters.len() != z.dim() {
            continue;
        }
        let mut projections = Vec::with_capacity(clusters.len());
        for cl in clusters {
            let blocks = shape
                .dims()
                .iter()
                .enumerate()
                .map(|(blk, &n)| {
                    let mut p = CMatrix::zeros(n, n);
                    for &(_, b, k) in &entries[cl.clone()] {
                        if b == blk {
                            let col = eig[blk].column(k);
                            p += col * col.adjoint();
                        }
                    }
                    p
                })
                .collect();
            projections.push(AlgebraElement::new(shape.clone(), blocks)?);
        }
        let mut ok = true;
        for p in &projections {
            if !z.contains(p, tol.sqrt())? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        sort_projections(&shape, &mut projections);
        let labels = (0..projections.len()).map(|i| format!("p{i}")).collect();
        return CentralSpectrum::new(projections, labels);
    }
    Err(Error::Numerical(
        "could not separate the points of the spectrum with a generic element".into(),
    ))
}

/// Deterministic order: by the first diagonal coordinate carrying weight.
fn sort_projections(shape: &BlockShape, ps: &mut [AlgebraElement]) {
    let key = |p: &AlgebraElement| -> usize {
        let mut idx = 0;
        for (blk, &n) in shape.dims().iter().enumerate() {
            for i in 0..n {
                if p.block(blk)[(i, i)].re > 1e-8 {
                    return idx;
                }
                idx += 1;
            }
        }
        usize::MAX
    };
    ps.sort_by_key(key);
}
