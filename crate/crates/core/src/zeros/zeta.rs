//! Hardy's Z-function: Riemann–Siegel with Gabcke's corrections `C₀..C₄`
//! at large height, Euler–Maclaurin below it.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Below this height `z` uses Euler–Maclaurin.
pub const EM_RS_CROSSOVER: f64 = 1_000.0;

const CHEB_DEGREE: usize = 48;
const CAUCHY_POINTS: usize = 64;
const CAUCHY_RADIUS: f64 = 0.5;
const EM_TERMS: usize = 20;

/// Riemann–Siegel theta function `θ(t) = arg Γ(1/4 + it/2) - (t/2) log π`,
/// by its asymptotic series. Accurate to ~1e-13 for `t ≥ 9`.
pub fn theta(t: f64) -> f64 {
    let x = 1.0 / t;
    let x2 = x * x;
    let series = x
        * (1.0 / 48.0
            + x2 * (7.0 / 5760.0
                + x2 * (31.0 / 80640.0
                    + x2 * (127.0 / 430080.0 + x2 * (511.0 / 1216512.0 + x2 * (1414477.0 / 1476034560.0))))));
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series
}

/// `θ'(t) ≈ ½ log(t/2π)`.
pub fn theta_prime(t: f64) -> f64 {
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

fn psi(z: Complex64) -> Complex64 {
    let num = (2.0 * PI * (z * z - z - 1.0 / 16.0)).cos();
    let den = (2.0 * PI * z).cos();
    num / den
}

/// `Ψ^{(m)}(p)` for `m = 0..=12` by the Cauchy integral on a circle.
fn psi_derivatives(p: f64) -> [f64; 13] {
    let mut out = [0.0; 13];
    let n = CAUCHY_POINTS;
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let phi = (j as f64 + 0.5) * 2.0 * PI / n as f64;
        let w = Complex64::from_polar(1.0, phi);
        samples.push((w, psi(Complex64::new(p, 0.0) + CAUCHY_RADIUS * w)));
    }
    let mut fact = 1.0;
    for (m, slot) in out.iter_mut().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, v) in &samples {
            acc += v * w.powi(-(m as i32));
        }
        *slot = (acc / n as f64).re * fact / CAUCHY_RADIUS.powi(m as i32);
    }
    out
}

/// Correction coefficients `C₀(p)..C₄(p)`.
fn corrections_direct(p: f64) -> [f64; 5] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5308416.0 * pi6),
        d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24576.0 * pi4)
            + 11.0 * d[8] / (5898240.0 * pi6)
            + d[12] / (2038431744.0 * pi8),
    ]
}

struct Chebyshev {
    // coeffs[k][j]: j-th Chebyshev coefficient of C_k on [0, 1]
    coeffs: [[f64; CHEB_DEGREE]; 5],
}

impl Chebyshev {
    fn build() -> Self {
        let n = CHEB_DEGREE;
        let nodes: Vec<f64> = (0..n)
            .map(|i| (PI * (i as f64 + 0.5) / n as f64).cos())
            .collect();
        let vals: Vec<[f64; 5]> = nodes.iter().map(|&u| corrections_direct(0.5 * (u + 1.0))).collect();
        let mut coeffs = [[0.0; CHEB_DEGREE]; 5];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            for (j, c) in ck.iter_mut().enumerate() {
                let mut s = 0.0;
                for i in 0..n {
                    s += vals[i][k] * (PI * j as f64 * (i as f64 + 0.5) / n as f64).cos();
                }
                *c = 2.0 * s / n as f64;
            }
            ck[0] *= 0.5;
        }
        Self { coeffs }
    }

    fn eval(&self, p: f64) -> [f64; 5] {
        let u = 2.0 * p - 1.0;
        let mut out = [0.0; 5];
        for (k, c) in self.coeffs.iter().enumerate() {
            // Clenshaw
            let (mut b1, mut b2) = (0.0, 0.0);
            for &a in c.iter().skip(1).rev() {
                let b0 = a + 2.0 * u * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            out[k] = c[0] + u * b1 - b2;
        }
        out
    }
}

fn chebyshev() -> &'static Chebyshev {
    static CELL: OnceLock<Chebyshev> = OnceLock::new();
    CELL.get_or_init(Chebyshev::build)
}

/// Riemann–Siegel evaluation of `Z(t)` with four correction terms.
pub fn z_riemann_siegel(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta(t);
    let mut main = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        main += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    let c = chebyshev().eval(p);
    let inv = 1.0 / a;
    let corr = c[0] + inv * (c[1] + inv * (c[2] + inv * (c[3] + inv * c[4])));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * corr / a.sqrt()
}

/// `B_{2k}/(2k)!` for `k = 1..=EM_TERMS`.
fn bernoulli_ratios() -> &'static [f64; EM_TERMS] {
    static CELL: OnceLock<[f64; EM_TERMS]> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = [0.0; EM_TERMS];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let two_k = 2 * k as i32;
            let zeta = match k {
                1 => PI * PI / 6.0,
                2 => PI.powi(4) / 90.0,
                _ => {
                    let s: f64 = (1..200).rev().map(|n| (n as f64).powi(-two_k)).sum();
                    s + 200f64.powi(1 - two_k) / (two_k - 1) as f64
                }
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / (2.0 * PI).powi(two_k);
        }
        out
    })
}

/// `ζ(1/2 + it)` by Euler–Maclaurin summation.
pub fn zeta_half_line(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let n = ((t.abs() + 2.0 * EM_TERMS as f64 + 1.0) / PI).ceil().max(10.0) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..n {
        let kf = k as f64;
        acc += Complex64::from_polar(kf.powf(-0.5), -t * kf.ln());
    }
    let nf = n as f64;
    let n_s = Complex64::from_polar(nf.powf(-0.5), -t * nf.ln());
    acc += n_s * nf / (s - 1.0) + 0.5 * n_s;
    let b = bernoulli_ratios();
    let mut term = s * n_s / nf;
    for (k, &bk) in b.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            term = term * (s + (j - 1.0)) * (s + j) / (nf * nf);
        }
        acc += bk * term;
    }
    acc
}

/// `Z(t) = Re(e^{iθ(t)} ζ(1/2+it))` via Euler–Maclaurin.
pub fn z_euler_maclaurin(t: f64) -> f64 {
    (Complex64::from_polar(1.0, theta(t)) * zeta_half_line(t)).re
}

/// Hardy's `Z(t)`; sign changes are exactly the zeta zeros on the critical line.
pub fn z(t: f64) -> f64 {
    if t < EM_RS_CROSSOVER {
        z_euler_maclaurin(t)
    } else {
        z_riemann_siegel(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_matches_direct_corrections() {
        let cheb = chebyshev();
        for i in 0..=40 {
            let p = i as f64 / 40.0;
            let a = cheb.eval(p);
            let b = corrections_direct(p);
            for k in 0..5 {
                assert!((a[k] - b[k]).abs() < 1e-12, "p={p} k={k}: {} vs {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn c0_known_values() {
        // Ψ(0) = cos(-π/8)/1 and Ψ(1/2) = cos(2π(1/4 - 1/2 - 1/16))/cos(π)
        let c = corrections_direct(0.0);
        assert!((c[0] - (PI / 8.0).cos()).abs() < 1e-13);
        let c = corrections_direct(0.5);
        assert!((c[0] + (2.0 * PI * (-5.0 / 16.0)).cos()).abs() < 1e-13);
    }

    #[test]
    fn theta_against_log_gamma_reference() {
        // θ(100) from arg Γ(1/4 + 50i) - 50 log π
        assert!((theta(100.0) - 87.972_165_231_787_22).abs() < 1e-11, "{}", theta(100.0));
    }

    #[test]
    fn riemann_siegel_agrees_with_euler_maclaurin() {
        for &t in &[1_000.0, 1_234.5678, 5_000.25, 20_000.5] {
            let rs = z_riemann_siegel(t);
            let em = z_euler_maclaurin(t);
            assert!((rs - em).abs() < 1e-9, "t={t}: rs={rs} em={em}");
        }
    }

    #[test]
    fn z_reference_values() {
        assert!((z(1_000.0) - 0.997_794_637_521_586_6).abs() < 1e-10);
        assert!((z(5_000.25) - 0.052_100_543_914_359_27).abs() < 1e-10);
    }

    #[test]
    fn z_at_small_heights() {
        assert!(z(10.0) < 0.0);
        assert!(z(14.0) < 0.0 && z(14.2) > 0.0);
    }
}
