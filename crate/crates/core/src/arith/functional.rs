use num_complex::Complex64;

use super::singular::SingularSeriesTable;
use crate::error::{Error, Result};
use crate::sum::Neumaier;

/// A truncated series value with a bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSum {
    pub value: f64,
    pub uncertainty: f64,
}

/// `Re(x^{ih} / z)`.
fn re_xih_over(x: f64, h: f64, z: Complex64) -> f64 {
    (Complex64::from_polar(1.0, h * x.ln()) / z).re
}

/// `S_α^h(y) = Σ_{k≤y} 𝔖(k) k^α cos(h log(kx/y)) - ∫_0^y u^α cos(h log(ux/y)) du`.
pub fn s_alpha_h(table: &SingularSeriesTable, y: f64, alpha: f64, h: f64, x: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain("y", y, "S needs y >= 0"));
    }
    if !(alpha >= 0.0) {
        return Err(Error::domain("alpha", alpha, "S needs alpha >= 0"));
    }
    if !(x >= 1.0) {
        return Err(Error::domain("x", x, "x must be >= 1"));
    }
    if y >= (table.k_max() + 1) as f64 {
        return Err(Error::TableOverflow {
            y,
            k_max: table.k_max(),
        });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let n = y.floor() as usize;
    let shift = (x / y).ln();
    let mut acc = Neumaier::new();
    for k in (2..=n).step_by(2) {
        let kf = k as f64;
        acc.add(table.value(k) * kf.powf(alpha) * (h * (kf.ln() + shift)).cos());
    }
    let integral = y.powf(alpha + 1.0) * re_xih_over(x, h, Complex64::new(alpha + 1.0, h));
    Ok(acc.value() - integral)
}

/// `T_α^h(y) = Σ_{k>y} 𝔖(k) k^{-α} cos(h log(kx/y)) - ∫_y^∞ u^{-α} cos(h log(ux/y)) du`.
///
/// The sum stops at `k_cap`; beyond it the sum is replaced by the matching
/// integral and the difference is bounded by `(max 𝔖 + 1) k_cap^{1-α}/(α-1)`.
pub fn t_alpha_h(
    table: &SingularSeriesTable,
    y: f64,
    alpha: f64,
    h: f64,
    x: f64,
    k_cap: usize,
) -> Result<TailSum> {
    if !(alpha > 1.0) {
        return Err(Error::domain("alpha", alpha, "T diverges for alpha <= 1"));
    }
    if !(y > 0.0) {
        return Err(Error::domain("y", y, "T needs y > 0"));
    }
    if !(x >= 1.0) {
        return Err(Error::domain("x", x, "x must be >= 1"));
    }
    if (k_cap as f64) < y {
        return Err(Error::domain("k_cap", k_cap as f64, "k_cap must be >= y"));
    }
    if k_cap > table.k_max() {
        return Err(Error::TableOverflow {
            y: k_cap as f64,
            k_max: table.k_max(),
        });
    }
    let shift = (x / y).ln();
    let mut acc = Neumaier::new();
    let first = y.floor() as usize + 1;
    for k in first..=k_cap {
        if k % 2 == 1 {
            continue;
        }
        let kf = k as f64;
        acc.add(table.value(k) * kf.powf(-alpha) * (h * (kf.ln() + shift)).cos());
    }
    // ∫_y^K u^{-α} cos(h log(ux/y)) du = [u^{1-α} Re((ux/y)^{ih} / (1-α+ih))]_y^K
    let z = Complex64::new(1.0 - alpha, h);
    let kc = k_cap as f64;
    let at = |u: f64| u.powf(1.0 - alpha) * (Complex64::from_polar(1.0, h * (u.ln() + shift)) / z).re;
    let value = acc.value() - (at(kc) - at(y));
    Ok(TailSum {
        value,
        uncertainty: (table.max_value() + 1.0) * kc.powf(1.0 - alpha) / (alpha - 1.0),
    })
}
