use num_complex::Complex64;

use super::EULER_GAMMA;
use crate::error::{Error, Result};

const SERIES_CUTOFF: f64 = 4.0;

/// `(Ci(x), Si(x))` for `x > 0`.
///
/// Power series below [`SERIES_CUTOFF`]; above it, the continued fraction
/// for `E1(ix) = -Ci(x) + i (Si(x) - π/2)` evaluated by Lentz's method.
fn cisi(x: f64) -> (f64, f64) {
    if x <= SERIES_CUTOFF {
        let mut ci_sum = 0.0;
        let mut si_sum = 0.0;
        // term_k = (-1)^k x^k / k! for the running power
        let mut fact_term = 1.0; // x^m / m!
        for m in 1..60 {
            fact_term *= x / m as f64;
            if m % 2 == 0 {
                let k = m / 2;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                ci_sum += sign * fact_term / m as f64;
            } else {
                let k = (m - 1) / 2;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                si_sum += sign * fact_term / m as f64;
            }
            if fact_term < 1e-18 * (1.0 + ci_sum.abs()) && m > 4 {
                break;
            }
        }
        (EULER_GAMMA + x.ln() + ci_sum, si_sum)
    } else {
        let z = Complex64::new(0.0, x);
        let tiny = 1e-300;
        let mut b = z + 1.0;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        let (s, co) = x.sin_cos();
        let e1 = h * Complex64::new(co, -s);
        (-e1.re, std::f64::consts::FRAC_PI_2 + e1.im)
    }
}

/// Cosine integral `ci(x) = -∫_x^∞ cos t / t dt`, `x > 0`.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "cosine integral requires x > 0"));
    }
    Ok(cisi(x).0)
}

/// Sine integral `Si(x) = ∫_0^x sin t / t dt`; odd in `x`.
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = cisi(x.abs()).1;
    if x < 0.0 {
        -s
    } else {
        s
    }
}

/// `∫_1^∞ sin(a t) / t^{2n} dt` in closed form, `a > 0`, `n ≥ 1`.
pub fn sin_over_x_power_integral(a: f64, n: u32) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("a", a, "requires a > 0"));
    }
    if n == 0 {
        return Err(Error::domain("n", 0.0, "requires n >= 1"));
    }
    let two_n = 2 * n as i32;
    // a^{2n-1}/(2n-1)! · (2n-k-1)!/a^{2n-k} = a^{k-1} (2n-k-1)!/(2n-1)!
    let mut acc = 0.0;
    for k in 1..two_n {
        let mut ratio = 1.0;
        for j in (two_n - k)..two_n {
            ratio /= j as f64;
        }
        let phase = a + (k - 1) as f64 * std::f64::consts::FRAC_PI_2;
        acc += a.powi(k - 1) * ratio * phase.sin();
    }
    let mut lead = 1.0;
    for j in 1..two_n {
        lead *= a / j as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(acc + sign * lead * cosine_integral(a)?)
}
