use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `β^μ = βu^μ` in the closed forward cone, metric signature (+,−,−,−).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct InverseTemperature4Vector {
    components: [f64; 4],
}

impl InverseTemperature4Vector {
    /// Rejects vectors outside the closed forward cone by more than a relative
    /// `1e-12`.
    pub fn new(components: [f64; 4]) -> Result<Self> {
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("four-vector has non-finite components".into()));
        }
        let v = Self { components };
        let scale = components.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if components[0] <= 0.0 || v.minkowski_square() < -1e-12 * scale {
            return Err(Error::Domain(format!("{components:?} is not in the forward cone")));
        }
        Ok(v)
    }

    /// `(β, 0, 0, 0)`.
    pub fn at_rest(beta: f64) -> Result<Self> {
        Self::new([beta, 0.0, 0.0, 0.0])
    }

    /// The rest-frame vector `(β,0,0,0)` boosted to 3-velocity `v`.
    pub fn moving(beta: f64, velocity: [f64; 3]) -> Result<Self> {
        Ok(lorentz_boost(&Self::at_rest(beta)?, velocity_to_rapidity(velocity)?))
    }

    pub fn components(&self) -> [f64; 4] {
        self.components
    }

    pub fn minkowski_square(&self) -> f64 {
        let [t, x, y, z] = self.components;
        t * t - x * x - y * y - z * z
    }
}

impl TryFrom<[f64; 4]> for InverseTemperature4Vector {
    type Error = Error;
    fn try_from(c: [f64; 4]) -> Result<Self> {
        Self::new(c)
    }
}

impl From<InverseTemperature4Vector> for [f64; 4] {
    fn from(v: InverseTemperature4Vector) -> Self {
        v.components
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestFrame {
    pub beta: f64,
    pub u: [f64; 4],
    pub velocity: [f64; 3],
}

/// `β = √(β·β)`, `u = β^μ/β`, `v = u⃗/u⁰`. Lightlike input has no rest frame.
pub fn beta_decompose(beta_mu: &InverseTemperature4Vector) -> Result<RestFrame> {
    let beta = beta_mu.minkowski_square().max(0.0).sqrt();
    let c = beta_mu.components;
    if beta <= 1e-12 * c[0] {
        return Err(Error::NotTimelike { beta });
    }
    let u = c.map(|x| x / beta);
    Ok(RestFrame { beta, u, velocity: [u[1] / u[0], u[2] / u[0], u[3] / u[0]] })
}

/// Pure boost with rapidity vector `φ n̂`.
pub fn lorentz_boost(beta_mu: &InverseTemperature4Vector, rapidity: [f64; 3]) -> InverseTemperature4Vector {
    let phi = rapidity.iter().map(|x| x * x).sum::<f64>().sqrt();
    if phi == 0.0 {
        return *beta_mu;
    }
    let n = rapidity.map(|x| x / phi);
    let [t, x, y, z] = beta_mu.components;
    let spatial = [x, y, z];
    let nx: f64 = (0..3).map(|i| n[i] * spatial[i]).sum();
    let (ch, sh) = (phi.cosh(), phi.sinh());
    let mut out = [ch * t + sh * nx, 0.0, 0.0, 0.0];
    for i in 0..3 {
        out[i + 1] = spatial[i] + ((ch - 1.0) * nx + sh * t) * n[i];
    }
    // Boosts preserve the cone exactly; no revalidation so rounding near the
    // light cone cannot turn a valid label into an error.
    InverseTemperature4Vector { components: out }
}

/// Rapidity `atanh|v| v̂` for `|v| < 1`.
pub fn velocity_to_rapidity(v: [f64; 3]) -> Result<[f64; 3]> {
    let speed = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if speed >= 1.0 {
        return Err(Error::Domain(format!("speed {speed} is not below 1")));
    }
    if speed == 0.0 {
        return Ok([0.0; 3]);
    }
    let phi = speed.atanh();
    Ok(v.map(|x| x / speed * phi))
}
