use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{beta_decompose, heisenberg_evolve, Dynamics, InverseTemperature4Vector};
use crate::algebra::{AlgebraElement, BlockShape};
use crate::error::{Error, Result};
use crate::linalg::{self, c, re};
use crate::states::{evaluate, StateFunctional};

/// Real times at which the boundary condition is sampled.
pub const KMS_TIME_GRID: [f64; 3] = [-1.0, 0.0, 1.0];

#[derive(Debug, Clone, Serialize)]
pub struct ProbeDefect {
    pub probe: usize,
    pub t: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KmsReport {
    pub beta: f64,
    pub defect: f64,
    pub probes: Vec<ProbeDefect>,
}

/// `max |ω(A α_{t+iβ}(B)) − ω(α_t(B) A)|` over probes and [`KMS_TIME_GRID`].
pub fn kms_defect(
    state: &StateFunctional,
    d: &Dynamics,
    beta: f64,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<f64> {
    Ok(kms_report(state, d, beta, probes)?.defect)
}

/// Same as [`kms_defect`] with the worst defect of each probe pair kept.
pub fn kms_report(
    state: &StateFunctional,
    d: &Dynamics,
    beta: f64,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<KmsReport> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("KMS check needs at least one probe pair".into()));
    }
    state.shape().check_same(d.shape())?;
    let mut out = Vec::with_capacity(probes.len());
    for (k, (a, b)) in probes.iter().enumerate() {
        let mut worst = ProbeDefect { probe: k, t: KMS_TIME_GRID[0], defect: 0.0 };
        for &t in &KMS_TIME_GRID {
            let shifted = heisenberg_evolve(d, b, c(t, beta))?;
            let real = heisenberg_evolve(d, b, re(t))?;
            let lhs = evaluate(state, &a.try_mul(&shifted)?)?;
            let rhs = evaluate(state, &real.try_mul(a)?)?;
            let defect = (lhs - rhs).norm();
            if defect > worst.defect {
                worst = ProbeDefect { probe: k, t, defect };
            }
        }
        out.push(worst);
    }
    let defect = out.iter().map(|p| p.defect).fold(0.0, f64::max);
    Ok(KmsReport { beta, defect, probes: out })
}

/// Rest-frame check for a four-vector label: decompose `β^μ = βu^μ` and test
/// the ordinary KMS condition at `β`.
pub fn relativistic_kms_defect(
    state: &StateFunctional,
    d: &Dynamics,
    beta_mu: &InverseTemperature4Vector,
    probes: &[(AlgebraElement, AlgebraElement)],
) -> Result<f64> {
    let frame = beta_decompose(beta_mu)?;
    kms_defect(state, d, frame.beta, probes)
}

/// `count` pairs of independent Gaussian Hermitian elements, each scaled to
/// unit operator norm.
pub fn default_probes(shape: &BlockShape, count: usize, seed: u64) -> Vec<(AlgebraElement, AlgebraElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let blocks = shape.dims().iter().map(|&n| linalg::random_hermitian(&mut rng, n)).collect();
        let a = AlgebraElement::new(shape.clone(), blocks).expect("shape matches");
        let n = a.norm();
        a.scale_real(1.0 / n)
    };
    (0..count).map(|_| (draw(), draw())).collect()
}
