//! Evaluation of every displayed term of the `T/log^M T ≤ x` formula.
//!
//! The sinc-weighted bracket is split as `−2c/((4+h²)y) + R(y)` with
//! `R(y) = −4f(y)c/y² + G₁(y) + G₂(y)`. The first piece is integrated in
//! closed form over `[1, ∞)`. `R` is integrated over `[1, y_cap]` with
//! `G₁, G₂` read off prefix integrals of `f(u)u^{ih}` and `f(u)u^{−4+ih}`,
//! and bounded beyond `y_cap` through `|f(u)| ≤ C u^{0.6}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{main_bracket, thm2_envelope, TheoremId, TheoryBreakdown, DEFAULT_M};
use crate::arith::CorrectionState;
use crate::error::{Error, Result};
use crate::special::quad::{quad_with, QuadOptions};
use crate::special::{sin_over_x_power_integral, sinc, sine_integral, GaussLegendre, Integral};
use crate::sum::{chunked_sum_n, Neumaier};

/// Exponent in the growth surrogate `|f(u)| ≤ C u^{0.6}`.
pub const F_GROWTH_EXP: f64 = 0.6;

/// Truncations for [`thm2_prediction`].
#[derive(Debug, Clone, Copy)]
pub struct Thm2Options {
    /// Terms of the 𝔖(k)/k² series.
    pub k_cap: usize,
    /// Upper limit of the sinc-weighted y-integral; `None` picks
    /// `10³x/T` clamped to `[10³, 10⁶]`.
    pub y_cap: Option<f64>,
}

impl Default for Thm2Options {
    fn default() -> Self {
        Self {
            k_cap: 100_000,
            y_cap: None,
        }
    }
}

impl Thm2Options {
    pub fn y_cap_for(&self, x: f64, t: f64) -> f64 {
        self.y_cap.unwrap_or_else(|| (1e3 * x / t).clamp(1e3, 1e6))
    }
}

#[derive(Debug, Clone, Copy)]
struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    fn new() -> Self {
        Self {
            re: Neumaier::new(),
            im: Neumaier::new(),
        }
    }

    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `u^{p+ih}`.
#[inline]
fn cpow(u: f64, p: f64, h: f64) -> Complex64 {
    let l = u.ln();
    let (s, c) = (h * l).sin_cos();
    Complex64::new(c, s) * (p * l).exp()
}

/// Per-`h` precomputation for `G₁`, `G₂` and the 𝔖-series.
pub struct Thm2Kernel<'a> {
    state: &'a CorrectionState,
    h: f64,
    gl: GaussLegendre,
    gl_short: GaussLegendre,
    // f1[n] = ∫_0^n f(u) u^{ih} du
    f1: Vec<Complex64>,
    // f2[n] = ∫_n^U f(u) u^{-4+ih} du, n ≥ 1
    f2: Vec<Complex64>,
    u_cut: usize,
    c_f: f64,
}

impl<'a> Thm2Kernel<'a> {
    /// Prepares `G₁, G₂` on `1 ≤ y ≤ y_hi`.
    pub fn new(state: &'a CorrectionState, h: f64, y_hi: f64) -> Result<Self> {
        let k_max = state.table().k_max();
        if !(y_hi >= 1.0) || y_hi > k_max as f64 {
            return Err(Error::TableOverflow { y: y_hi, k_max });
        }
        let n_hi = (y_hi.ceil() as usize).min(k_max);
        let u_cut = (64 * n_hi).max(10_000).min(k_max);
        let gl = GaussLegendre::new(16);
        let b = state.b();

        let mut kernel = Self {
            state,
            h,
            gl,
            gl_short: GaussLegendre::new(8),
            f1: Vec::new(),
            f2: Vec::new(),
            u_cut,
            c_f: state.f_growth_constant(F_GROWTH_EXP),
        };

        let pieces1: Vec<Complex64> = (1..n_hi)
            .into_par_iter()
            .map(|n| kernel.unit_integral(n, n as f64, (n + 1) as f64, 0.0))
            .collect();
        let mut f1 = Vec::with_capacity(n_hi + 1);
        f1.push(Complex64::new(0.0, 0.0));
        f1.push(unit_f_moment(1.0, h, b));
        let mut acc = ComplexSum::new();
        acc.add(f1[1]);
        for p in pieces1 {
            acc.add(p);
            f1.push(acc.value());
        }

        let pieces2: Vec<Complex64> = (1..u_cut)
            .into_par_iter()
            .map(|n| kernel.unit_integral(n, n as f64, (n + 1) as f64, -4.0))
            .collect();
        let mut f2 = vec![Complex64::new(0.0, 0.0); u_cut + 1];
        let mut acc = ComplexSum::new();
        for n in (1..u_cut).rev() {
            acc.add(pieces2[n - 1]);
            f2[n] = acc.value();
        }
        kernel.f1 = f1;
        kernel.f2 = f2;
        Ok(kernel)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Growth constant `C` in `|f(u)| ≤ C u^{0.6}`, sampled over the table.
    pub fn growth_constant(&self) -> f64 {
        self.c_f
    }

    /// `∫_a^b f(u) u^{p+ih} du` inside one unit interval `[n, n+1]`, `n ≥ 1`.
    fn unit_integral(&self, n: usize, a: f64, b: f64, p: f64) -> Complex64 {
        if b <= a {
            return Complex64::new(0.0, 0.0);
        }
        let phase = self.h.abs() * (b - a) / n as f64;
        let panels = 1 + (phase / 2.0) as usize;
        // far from the origin both f and u^{ih} are nearly polynomial
        let rule = if n >= 16 && phase < 0.25 {
            &self.gl_short
        } else {
            &self.gl
        };
        let w = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let lo = a + k as f64 * w;
            let c = lo + 0.5 * w;
            let r = 0.5 * w;
            for (z, wt) in rule.nodes().iter().zip(rule.weights()) {
                let u = c + r * z;
                acc += cpow(u, p, self.h) * (self.state.f_unchecked(u) * wt * r);
            }
        }
        acc
    }

    /// `∫_0^y f(u) u^{ih} du`.
    fn moment1(&self, y: f64) -> Complex64 {
        if y <= 1.0 {
            return unit_f_moment(y, self.h, self.state.b());
        }
        let n = y.floor() as usize;
        self.f1[n] + self.unit_integral(n, n as f64, y, 0.0)
    }

    /// `∫_y^U f(u) u^{-4+ih} du`.
    fn moment2(&self, y: f64) -> Complex64 {
        let n = y.floor() as usize;
        if n >= self.u_cut {
            return Complex64::new(0.0, 0.0);
        }
        let next = if n + 1 <= self.u_cut {
            self.f2[n + 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        next + self.unit_integral(n, y, (n + 1) as f64, -4.0)
    }

    /// Bound on `|y ∫_U^∞ f(u) u^{-4}[…] du|`.
    fn g2_cut_bound(&self, y: f64) -> f64 {
        let h = self.h;
        y * ((6.0 - h * h).abs() + 5.0 * h.abs()) * self.c_f
            * (self.u_cut as f64).powf(F_GROWTH_EXP - 3.0)
            / (3.0 - F_GROWTH_EXP)
    }

    /// `G₁(y)` from the prefix integrals.
    pub fn g1(&self, y: f64, x: f64) -> f64 {
        let h = self.h;
        let ph = cpow(x / y, 0.0, h);
        (Complex64::new(2.0 - h * h, 3.0 * h) * ph * self.moment1(y)).re / (y * y * y)
    }

    /// `G₂(y)` from the suffix integrals, cut at `U`.
    pub fn g2(&self, y: f64, x: f64) -> f64 {
        let h = self.h;
        let ph = cpow(x / y, 0.0, h);
        y * (Complex64::new(6.0 - h * h, -5.0 * h) * ph * self.moment2(y)).re
    }

    /// `R(y) = −4f(y)cos(h log x)/y² + G₁(y) + G₂(y)`.
    pub fn remainder(&self, y: f64, x: f64) -> f64 {
        let c = (self.h * x.ln()).cos();
        -4.0 * self.state.f_unchecked(y) * c / (y * y) + self.g1(y, x) + self.g2(y, x)
    }

    /// The full bracket `−2c/((4+h²)y) + R(y)`.
    pub fn bracket(&self, y: f64, x: f64) -> f64 {
        let h = self.h;
        let c = (h * x.ln()).cos();
        -2.0 * c / ((4.0 + h * h) * y) + self.remainder(y, x)
    }

    /// `C_R` with `|R(y)| ≤ C_R y^{-1.4}` under the growth surrogate.
    fn remainder_envelope(&self) -> f64 {
        let h = self.h;
        let p = F_GROWTH_EXP;
        self.c_f
            * (4.0
                + ((2.0 - h * h).abs() + 3.0 * h.abs()) / (1.0 + p)
                + ((6.0 - h * h).abs() + 5.0 * h.abs()) / (3.0 - p))
    }

    /// `∫_1^{y_cap} R(y) sinc(ay) dy` with its quadrature error, the bound on
    /// the part beyond `y_cap`, and the bound from cutting `G₂` at `U`.
    fn remainder_integral(&self, x: f64, a: f64, y_cap: f64) -> (f64, f64, f64, f64) {
        let hi = GaussLegendre::new(10);
        let lo = GaussLegendre::new(6);
        let n_int = (y_cap - 1.0).ceil() as usize;
        let [value, err] = chunked_sum_n::<2, _>(n_int, |i| {
            let n = i + 1;
            let a0 = n as f64;
            let b0 = ((n + 1) as f64).min(y_cap);
            let panels = 1 + ((a + self.h.abs() / a0) * (b0 - a0) / 3.0) as usize;
            let mut interp_err = 0.0;
            // Past a few panels, sample R once on Chebyshev nodes and
            // integrate the interpolant against the oscillating sinc.
            let cheb = (panels > 3).then(|| {
                let deg = (24 + (self.h.abs() / a0).ceil() as usize).min(64);
                let c = Chebyshev::fit(|y| self.remainder(y, x), a0, b0, deg);
                let probe = a0 + 0.337 * (b0 - a0);
                interp_err = (c.eval(probe) - self.remainder(probe, x)).abs() * (b0 - a0);
                c
            });
            let r = |y: f64| match &cheb {
                Some(c) => c.eval(y),
                None => self.remainder(y, x),
            };
            let f = |y: f64| r(y) * sinc(a * y);
            let w = (b0 - a0) / panels as f64;
            let mut v = 0.0;
            let mut e = interp_err;
            for k in 0..panels {
                let p0 = a0 + k as f64 * w;
                let vh = hi.integrate(f, p0, p0 + w);
                let vl = lo.integrate(f, p0, p0 + w);
                v += vh;
                e += (vh - vl).abs();
            }
            [v, e]
        });
        let c_r = self.remainder_envelope();
        let d = 2.0 - F_GROWTH_EXP;
        let tail = (c_r * y_cap.powf(1.0 - d) / (d - 1.0)).min(c_r * y_cap.powf(-d) / (d * a));
        // ∫_1^{y_cap} g2_cut_bound(y) min(1, 1/(ay)) dy
        let cut = self.g2_cut_bound(1.0) * (0.5 * y_cap * y_cap).min(y_cap / a);
        (value, err, tail, cut)
    }
}

/// Chebyshev interpolant on `[a, b]` at first-kind nodes.
struct Chebyshev {
    a: f64,
    b: f64,
    coef: Vec<f64>,
}

impl Chebyshev {
    fn fit<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> Self {
        let vals: Vec<f64> = (0..m)
            .map(|j| {
                let t = (PI * (j as f64 + 0.5) / m as f64).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * t)
            })
            .collect();
        let coef = (0..m)
            .map(|k| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / m as f64).cos())
                    .sum();
                s * if k == 0 { 1.0 } else { 2.0 } / m as f64
            })
            .collect();
        Self { a, b, coef }
    }

    fn eval(&self, y: f64) -> f64 {
        let t = (2.0 * y - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for c in self.coef.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coef[0]
    }
}

/// `∫_0^y f(u) u^{ih} du` for `0 ≤ y ≤ 1`, where
/// `f(u) = ½u log u − (½+B/2)u − ½u²`.
pub fn unit_f_moment(y: f64, h: f64, b: f64) -> Complex64 {
    if y == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let p2 = Complex64::new(2.0, h);
    let p3 = Complex64::new(3.0, h);
    let y2 = cpow(y, 2.0, h);
    let y3 = y2 * y;
    let ly = y.ln();
    0.5 * y2 * (ly / p2 - 1.0 / (p2 * p2)) - (0.5 + 0.5 * b) * y2 / p2 - 0.5 * y3 / p3
}

/// `∫_0^1 f(u)[cos(h log ux) − h sin(h log ux)] du` in closed form.
pub fn unit_twisted_moment(h: f64, x: f64, b: f64) -> f64 {
    let (s, c) = (h * x.ln()).sin_cos();
    let h2 = h * h;
    let d4 = 4.0 + h2;
    let d9 = 9.0 + h2;
    -0.5 * ((4.0 + 3.0 * h2) * c + h2 * h * s) / (d4 * d4)
        - (0.5 + 0.5 * b) * ((2.0 + h2) * c - h * s) / d4
        - 0.5 * ((3.0 + h2) * c - 2.0 * h * s) / d9
}

/// Right-hand side for `Σ 𝔖(k)/k² ∫_0^1 y cos(h log(kx/y)) dy`: the closed
/// brackets plus `∫_1^∞ f(u)/u⁴ [3cos(h log ux) + h sin(h log ux)] du`.
pub fn series_moment_closed_form(state: &CorrectionState, h: f64, x: f64) -> Result<Integral> {
    let b = state.b();
    let (s, c) = (h * x.ln()).sin_cos();
    let h2 = h * h;
    let d1 = 1.0 + h2;
    let d4 = 4.0 + h2;
    let closed = (c - h * s) / d1 - ((4.0 - h2) * c / (2.0 * d4 * d4) - 2.0 * h * s / (d4 * d4))
        + 0.5 * b * (2.0 * c - h * s) / d4
        + (1.0 + 0.5 * b) * c;
    let tail = f_weighted_tail(state, h, x, 3.0, 1.0, 1.0, 1e-11)?;
    Ok(Integral {
        value: closed + tail.value,
        error: tail.error,
    })
}

/// `∫_y^∞ f(u)/u⁴ [p cos(h log(ux/y)) + q h sin(h log(ux/y))] du` by
/// adaptive quadrature, with the range cut where the growth surrogate makes
/// the remainder smaller than `tol / 2`.
fn f_weighted_tail(
    state: &CorrectionState,
    h: f64,
    x: f64,
    p: f64,
    q: f64,
    y: f64,
    tol: f64,
) -> Result<Integral> {
    let c_f = state.f_growth_constant(F_GROWTH_EXP);
    let amp = p.abs() + (q * h).abs();
    let decay = 3.0 - F_GROWTH_EXP;
    let k_max = state.table().k_max() as f64;
    let bound = |u: f64| amp * c_f * u.powf(-decay) / decay;
    let mut u_cut = (y + 1.0).ceil();
    while bound(u_cut) > 0.5 * tol && u_cut < k_max {
        u_cut = (u_cut * 1.5).ceil().min(k_max);
    }
    let lxy = (x / y).ln();
    let breaks: Vec<f64> = (y.ceil() as usize..=u_cut as usize).map(|k| k as f64).collect();
    let r = quad_with(
        |u| {
            let ph = h * (u.ln() + lxy);
            state.f_unchecked(u) / u.powi(4) * (p * ph.cos() + q * h * ph.sin())
        },
        y,
        u_cut,
        &breaks,
        QuadOptions {
            tol: 0.5 * tol,
            max_intervals: breaks.len() + 20_000,
        },
    )?;
    Ok(Integral {
        value: r.value,
        error: r.error + bound(u_cut),
    })
}

/// `G₁(y)` by direct adaptive quadrature, tolerance `1e-8`.
pub fn g1(state: &CorrectionState, y: f64, h: f64, x: f64) -> Result<Integral> {
    if !(y >= 1.0) {
        return Err(Error::domain("y", y, "requires y >= 1"));
    }
    if y >= state.y_max() {
        return Err(Error::TableOverflow {
            y,
            k_max: state.table().k_max(),
        });
    }
    let y3 = y * y * y;
    let lxy = (x / y).ln();
    let breaks: Vec<f64> = (1..=y.floor() as usize).map(|k| k as f64).collect();
    let r = quad_with(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            let ph = h * (u.ln() + lxy);
            state.f_unchecked(u) * ((2.0 - h * h) * ph.cos() - 3.0 * h * ph.sin())
        },
        0.0,
        y,
        &breaks,
        QuadOptions {
            tol: 1e-8 * y3,
            max_intervals: breaks.len() + 20_000,
        },
    )?;
    Ok(Integral {
        value: r.value / y3,
        error: r.error / y3,
    })
}

/// `G₂(y)` by direct adaptive quadrature, tolerance `1e-8`.
pub fn g2(state: &CorrectionState, y: f64, h: f64, x: f64) -> Result<Integral> {
    if !(y >= 1.0) {
        return Err(Error::domain("y", y, "requires y >= 1"));
    }
    if y >= state.y_max() {
        return Err(Error::TableOverflow {
            y,
            k_max: state.table().k_max(),
        });
    }
    let r = f_weighted_tail(state, h, x, 6.0 - h * h, 5.0, y, 1e-8 / y)?;
    Ok(Integral {
        value: y * r.value,
        error: y * r.error,
    })
}

/// `J = ∫_0^1 y^{1−ih} sinc(ay) dy`, via `y = e^{-v}`, with its error.
fn sinc_moment_complex(a: f64, h: f64) -> Result<(Complex64, f64)> {
    let v_max = 20.0;
    let opts = QuadOptions {
        tol: 1e-13,
        max_intervals: 50_000,
    };
    let weight = |v: f64| (-2.0 * v).exp() * sinc(a * (-v).exp());
    let re = quad_with(|v| weight(v) * (h * v).cos(), 0.0, v_max, &[], opts)?;
    let im = quad_with(|v| weight(v) * (h * v).sin(), 0.0, v_max, &[], opts)?;
    let cut = (-2.0 * v_max).exp();
    Ok((Complex64::new(re.value, im.value), re.error + im.error + cut))
}

/// `Σ_{k ≤ k_cap} 𝔖(k) k^{−2+ih}` plus the mean-value tail
/// `k_cap^{−1+ih}/(1−ih)`; the returned bound is `max 𝔖 / k_cap`.
pub fn singular_series_moment(state: &CorrectionState, h: f64, k_cap: usize) -> Result<(Complex64, f64)> {
    let table = state.table();
    if k_cap == 0 || k_cap > table.k_max() {
        return Err(Error::TableOverflow {
            y: k_cap as f64,
            k_max: table.k_max(),
        });
    }
    let parts: Vec<(f64, f64)> = (0..k_cap.div_ceil(4096))
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexSum::new();
            for k in (c * 4096 + 1)..=((c + 1) * 4096).min(k_cap) {
                acc.add(cpow(k as f64, -2.0, h) * table.value(k));
            }
            let v = acc.value();
            (v.re, v.im)
        })
        .collect();
    let mut acc = ComplexSum::new();
    for (re, im) in parts {
        acc.add(Complex64::new(re, im));
    }
    let kc = k_cap as f64;
    let tail = cpow(kc, -1.0, h) / Complex64::new(1.0, -h);
    Ok((acc.value() + tail, table.max_value() / kc))
}

/// All six displayed terms for `T/log^M T ≤ x`.
pub fn thm2_prediction(
    state: &CorrectionState,
    x: f64,
    t: f64,
    h: f64,
    opts: Thm2Options,
) -> Result<TheoryBreakdown> {
    super::check_inputs(x, t, h)?;
    let y_cap = opts.y_cap_for(x, t);
    let k_max = state.table().k_max() as f64;
    if !(y_cap > 1.0) || y_cap > k_max {
        return Err(Error::TableOverflow {
            y: y_cap,
            k_max: state.table().k_max(),
        });
    }
    let lx = x.ln();
    let (s, c) = (h * lx).sin_cos();
    let h2 = h * h;
    let a = t / x;
    let tp = t / PI;

    let t1 = main_bracket(x, t, h);
    let si = sine_integral(a);
    let t3 = -(x / PI) * si * (3.0 * c + h * s) / (9.0 + h2);
    let t4 = -(x / PI) * si * (c - h * s) / (1.0 + h2);
    // (T/π)(−2c/(4+h²)) ∫_1^∞ sinc(ay)/y dy = −2xc/(π(4+h²)) ∫_1^∞ sin(ay)/y² dy
    let t2_recip = -2.0 * x * c / (PI * (4.0 + h2)) * sin_over_x_power_integral(a, 1)?;

    let kernel = Thm2Kernel::new(state, h, y_cap)?;
    let (rem, rem_err, rem_tail, rem_cut) = kernel.remainder_integral(x, a, y_cap);
    let t2_rem = tp * rem;
    let t2_err = tp * (rem_err + rem_tail + rem_cut);

    let (series, series_bound) = singular_series_moment(state, h, opts.k_cap)?;
    let (j, j_err) = sinc_moment_complex(a, h)?;
    let xih = cpow(x, 0.0, h);
    let t5 = tp * (xih * j * series).re;
    let t5_err = tp * (j.norm() * series_bound + j_err * series.norm());

    let lt = t.ln();
    let lo = t / lt.powi(DEFAULT_M as i32);
    let out = TheoryBreakdown::new(TheoremId::T2)
        .main("main_bracket", t1)
        .main("reciprocal_sinc", t2_recip)
        .main("si_nine", t3)
        .main("si_one", t4)
        .integral("bracket_remainder", t2_rem, t2_err)
        .integral("singular_series", t5, t5_err)
        .envelope(thm2_envelope(x, t, h))
        .warn_if(x < lo, || format!("x = {x} below T/log^{DEFAULT_M} T = {lo}"))
        .finish();
    let budget = 0.01 * out.total.abs();
    if t2_err > budget {
        return Err(Error::Truncation {
            term: "bracket_remainder",
            bound: t2_err,
            total: out.total,
        });
    }
    if t5_err > budget {
        return Err(Error::Truncation {
            term: "singular_series",
            bound: t5_err,
            total: out.total,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::{Arc, OnceLock};

    use super::*;
    use crate::arith::{s_alpha_h, t_alpha_h, SingularSeriesTable};
    use crate::theory::{thm3_prediction, thm4_prediction};

    const T: f64 = 74920.0;

    fn state() -> &'static CorrectionState {
        static S: OnceLock<CorrectionState> = OnceLock::new();
        S.get_or_init(|| CorrectionState::new(Arc::new(SingularSeriesTable::new(100_000, 1_000_000))))
    }

    fn opts(y_cap: f64) -> Thm2Options {
        Thm2Options {
            k_cap: 100_000,
            y_cap: Some(y_cap),
        }
    }

    #[test]
    fn fast_g_matches_quadrature() {
        let s = state();
        for (h, x) in [(1.0, 10.0), (0.0, 10.0), (3.0, 100.0)] {
            let k = Thm2Kernel::new(s, h, 100.0).unwrap();
            for y in [1.0, 2.5, 10.0, 50.0] {
                let q1 = g1(s, y, h, x).unwrap();
                let q2 = g2(s, y, h, x).unwrap();
                assert!((k.g1(y, x) - q1.value).abs() < 1e-8, "g1 h={h} y={y}");
                assert!((k.g2(y, x) - q2.value).abs() < 1e-8, "g2 h={h} y={y}");
            }
        }
    }

    #[test]
    fn bracket_identity_against_direct_sums() {
        let s = state();
        let x = 10.0;
        for h in [0.0, 1.0] {
            let k = Thm2Kernel::new(s, h, 60.0).unwrap();
            for y in [2.0, 10.0, 50.0] {
                let sv = s_alpha_h(s.table(), y, 2.0, h, x).unwrap();
                let tv = t_alpha_h(s.table(), y, 2.0, h, x, 100_000).unwrap();
                let lhs = sv / (y * y * y) + tv.value * y;
                assert!((lhs - k.bracket(y, x)).abs() < 1e-5, "h={h} y={y}");
            }
        }
    }

    #[test]
    fn g1_decays() {
        let s = state();
        let v: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&y| g1(s, y, 0.0, 10.0).unwrap().value.abs())
            .collect();
        assert!(v[0] > v[1] && v[1] > v[2], "{v:?}");
    }

    #[test]
    fn unit_moment_matches_closed_form() {
        let b = state().b();
        for (h, x) in [(0.0, 2.0), (1.0, 10.0), (5.0, 100.0)] {
            let m = unit_f_moment(1.0, h, b);
            let xih = cpow(x, 0.0, h);
            let via_moment = (Complex64::new(1.0, h) * xih * m).re;
            let q = quad_with(
                |u| {
                    let ph = h * (u * x).ln();
                    CorrectionState::f_unit(u, b) * (ph.cos() - h * ph.sin())
                },
                0.0,
                1.0,
                &[],
                QuadOptions::tol(1e-12),
            )
            .unwrap();
            let closed = unit_twisted_moment(h, x, b);
            assert!((closed - q.value).abs() < 1e-6, "h={h}: {closed} vs {}", q.value);
            assert!((via_moment - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn h_zero_terms_reduce() {
        let x = T;
        let b = thm2_prediction(state(), x, T, 0.0, opts(1000.0)).unwrap();
        let si = sine_integral(T / x);
        assert!((b.main_terms["main_bracket"] - T / PI * T.ln() / 2.0).abs() < 1e-9 * T);
        assert!((b.main_terms["si_nine"] + x / PI * si / 3.0).abs() < 1e-9 * T);
        assert!((b.main_terms["si_one"] + x / PI * si).abs() < 1e-9 * T);
        let t3 = thm3_prediction(x, T, 0.0).unwrap();
        assert_eq!(t3.total, b.main_terms["main_bracket"]);
    }

    #[test]
    fn even_in_h() {
        let x = 3.0 * T;
        for h in [0.5, 3.0] {
            let p = thm2_prediction(state(), x, T, h, opts(3000.0)).unwrap().total;
            let m = thm2_prediction(state(), x, T, -h, opts(3000.0)).unwrap().total;
            assert!((p - m).abs() <= 1e-12 * p.abs(), "{p} {m}");
        }
    }

    #[test]
    fn reduces_to_strong_pair_correlation_beyond_t() {
        for (x, h) in [(10.0 * T, 0.0), (10.0 * T, 1.0)] {
            let b2 = thm2_prediction(state(), x, T, h, opts(1e4)).unwrap();
            let b4 = thm4_prediction(x, T, h).unwrap();
            let gap = (b2.total - b4.total).abs();
            assert!(gap < 0.02 * b4.total.abs() + b4.error_envelope, "{gap}");
            // in practice far tighter than the envelope
            assert!(gap < 0.01 * b4.total.abs(), "h={h}: {} vs {}", b2.total, b4.total);
        }
    }

    #[test]
    fn total_sums_components() {
        let b = thm2_prediction(state(), T, T, 1.0, opts(1000.0)).unwrap();
        let s: f64 = b.main_terms.values().sum::<f64>()
            + b.integral_terms.values().map(|t| t.value).sum::<f64>();
        assert!((b.total - s).abs() <= 1e-12 * b.total.abs());
        assert_eq!(b.main_terms.len() + b.integral_terms.len(), 6);
    }

    #[test]
    fn truncation_guard_fires() {
        let r = thm2_prediction(state(), T * T, T, 0.0, opts(2.0));
        assert!(matches!(r, Err(Error::Truncation { .. })));
    }
}
