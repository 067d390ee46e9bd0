use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `sin z / z`, equal to 1 at the origin.
#[inline]
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Fejér kernel `(sin πu / πu)²`.
#[inline]
pub fn fejer(u: f64) -> f64 {
    let s = sinc(PI * u);
    s * s
}

/// Parameters of the smooth truncation weight Ψ_U: `U = log^M T` and
/// `Δ = 1 / (2^K U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    u: f64,
    delta: f64,
    k: u32,
    m: u32,
}

impl KernelParams {
    /// `U = (log T)^M`, `Δ = 1/(2^K U)`.
    pub fn from_height(t: f64, k: u32, m: u32) -> Result<Self> {
        if !(t > 1.0) {
            return Err(Error::domain("T", t, "kernel height requires T > 1"));
        }
        Self::new(t.ln().powi(m as i32), k, m)
    }

    /// Builds the parameters from `U` directly. `U` may be nudged by a few
    /// ulps so that `Δ · 2^K · U == 1` holds exactly in floating point.
    pub fn new(u: f64, k: u32, m: u32) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::domain("U", u, "requires U > 0"));
        }
        if k > 1000 {
            return Err(Error::domain("K", k as f64, "K too large"));
        }
        let scale = 2f64.powi(k as i32);
        let mut cand_u = u;
        for _ in 0..64 {
            let delta = 1.0 / (scale * cand_u);
            for d in [delta, delta.next_up(), delta.next_down()] {
                if d * scale * cand_u == 1.0 {
                    return Ok(Self {
                        u: cand_u,
                        delta: d,
                        k,
                        m,
                    });
                }
            }
            cand_u = cand_u.next_up();
        }
        Err(Error::domain("U", u, "no exactly reciprocal Δ near U"))
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Same `U` and `M`, with `K + 1` (halves Δ).
    pub fn halved(&self) -> Result<Self> {
        Self::new(self.u, self.k + 1, self.m)
    }
}

/// `Re Ψ̂_U(y) = (sin 2πy / 2πy) (sin 2πΔy / 2πΔy)^{K+1}`.
pub fn re_psi_hat(y: f64, kp: &KernelParams) -> f64 {
    let w = 2.0 * PI * y;
    sinc(w) * sinc(w * kp.delta).powi(kp.k as i32 + 1)
}
