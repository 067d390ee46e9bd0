//! Predictions for `F_h(x, T)` and the conjectured densities.
//!
//! All O-term envelopes use surrogate constant 1 and `ε = 0.05`. They are
//! reported alongside the totals and never added to them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::LOG_TWO_PI;
use crate::error::{Error, Result};
use crate::special::fejer;
use crate::special::quad::{quad_with, QuadOptions};
use crate::sum::Neumaier;

mod thm2;

pub use thm2::{
    g1, g2, series_moment_closed_form, unit_twisted_moment, singular_series_moment, thm2_prediction,
    unit_f_moment, Thm2Kernel, Thm2Options,
};

/// Exponent slack used in every envelope.
pub const ENVELOPE_EPS: f64 = 0.05;
/// `U = log^M T` in the smoothing weight.
pub const DEFAULT_M: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    C1,
    C2,
    C3,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::T1 => "T1",
            TheoremId::T2 => "T2",
            TheoremId::T3 => "T3",
            TheoremId::T4 => "T4",
            TheoremId::C1 => "C1",
            TheoremId::C2 => "C2",
            TheoremId::C3 => "C3",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" | "1" => Ok(TheoremId::T1),
            "T2" | "2" => Ok(TheoremId::T2),
            "T3" | "3" => Ok(TheoremId::T3),
            "T4" | "4" => Ok(TheoremId::T4),
            "C1" => Ok(TheoremId::C1),
            "C2" => Ok(TheoremId::C2),
            "C3" => Ok(TheoremId::C3),
            _ => Err(Error::Config(format!("unknown theorem id {s:?}"))),
        }
    }
}

/// A numerically evaluated term with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryBreakdown {
    pub theorem_id: TheoremId,
    pub main_terms: BTreeMap<String, f64>,
    pub integral_terms: BTreeMap<String, Term>,
    pub error_envelope: f64,
    pub total: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TheoryBreakdown {
    fn new(theorem_id: TheoremId) -> Self {
        Self {
            theorem_id,
            main_terms: BTreeMap::new(),
            integral_terms: BTreeMap::new(),
            error_envelope: 0.0,
            total: 0.0,
            warnings: Vec::new(),
        }
    }

    fn main(mut self, name: &str, v: f64) -> Self {
        self.main_terms.insert(name.to_string(), v);
        self
    }

    fn integral(mut self, name: &str, value: f64, error: f64) -> Self {
        self.integral_terms.insert(name.to_string(), Term { value, error });
        self
    }

    fn envelope(mut self, e: f64) -> Self {
        self.error_envelope = e;
        self
    }

    fn warn_if(mut self, cond: bool, msg: impl FnOnce() -> String) -> Self {
        if cond {
            self.warnings.push(msg());
        }
        self
    }

    /// Sums the components in name order.
    fn finish(mut self) -> Self {
        let mut acc = Neumaier::new();
        for v in self.main_terms.values() {
            acc.add(*v);
        }
        for t in self.integral_terms.values() {
            acc.add(t.value);
        }
        self.total = acc.value();
        self
    }

    /// Summed quadrature/truncation error of the integral terms.
    pub fn integral_error(&self) -> f64 {
        self.integral_terms.values().map(|t| t.error).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("breakdown serializes")
    }
}

/// `h̃ = |h| + 1`.
pub fn h_tilde(h: f64) -> f64 {
    h.abs() + 1.0
}

fn check_inputs(x: f64, t: f64, h: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "requires x >= 1"));
    }
    if !(t > 2.0 * PI) || !t.is_finite() {
        return Err(Error::domain("T", t, "requires T > 2π"));
    }
    if !h.is_finite() {
        return Err(Error::domain("h", h, "must be finite"));
    }
    Ok(())
}

/// `(T/π)[2 cos(h log x)/(4+h²) log x − 4h sin(h log x)/(4+h²)²]`.
pub fn main_bracket(x: f64, t: f64, h: f64) -> f64 {
    let lx = x.ln();
    let (s, c) = (h * lx).sin_cos();
    let d = 4.0 + h * h;
    t / PI * (2.0 * c / d * lx - 4.0 * h * s / (d * d))
}

/// Prediction for `1 ≤ x ≤ T/log T`.
pub fn thm1_prediction(x: f64, t: f64, h: f64) -> Result<TheoryBreakdown> {
    check_inputs(x, t, h)?;
    let lx = x.ln();
    let (s, c) = (h * lx).sin_cos();
    let d = 4.0 + h * h;
    let l = t.ln() - LOG_TWO_PI;
    let first = t / (2.0 * PI) * (4.0 * c / d * lx - 8.0 * h * s / (d * d));
    let second = t / (2.0 * PI * x * x) * (l * l - 2.0 * l);
    let lt = t.ln();
    Ok(TheoryBreakdown::new(TheoremId::T1)
        .main("diagonal_bracket", first)
        .main("inverse_square", second)
        .envelope(x * lx + h_tilde(h) * t / x.powf(0.5 - ENVELOPE_EPS))
        .warn_if(x > t / lt, || format!("x = {x} exceeds T/log T = {}", t / lt))
        .finish())
}

/// Prediction for `T/log^M T ≤ x ≤ T`: the main bracket alone.
pub fn thm3_prediction(x: f64, t: f64, h: f64) -> Result<TheoryBreakdown> {
    check_inputs(x, t, h)?;
    let lt = t.ln();
    let lo = t / lt.powi(DEFAULT_M as i32);
    Ok(TheoryBreakdown::new(TheoremId::T3)
        .main("main_bracket", main_bracket(x, t, h))
        .envelope(h_tilde(h) * x + h_tilde(h) * t / lt)
        .warn_if(x < lo || x > t, || {
            format!("x = {x} outside [T/log^{DEFAULT_M} T, T] = [{lo}, {t}]")
        })
        .finish())
}

/// Prediction for `T ≤ x ≤ T²`.
pub fn thm4_prediction(x: f64, t: f64, h: f64) -> Result<TheoryBreakdown> {
    check_inputs(x, t, h)?;
    let c = (h * x.ln()).cos();
    let main = t / (2.0 * PI) * (t.ln() - LOG_TWO_PI - 1.0) * 4.0 * c / (4.0 + h * h);
    let ht = h_tilde(h);
    Ok(TheoryBreakdown::new(TheoremId::T4)
        .main("strong_pair_correlation", main)
        .envelope(ht * t * (t / x).powf(0.5 - ENVELOPE_EPS) + ht * t / t.ln())
        .warn_if(x < t || x > t * t, || format!("x = {x} outside [T, T²]"))
        .finish())
}

/// Thm2 envelope: `h̃x^{1.3}/T + h̃x^{0.85} + h̃x²/T^{1.9} + h̃T/log^{M−2}T`.
pub fn thm2_envelope(x: f64, t: f64, h: f64) -> f64 {
    let ht = h_tilde(h);
    let e = ENVELOPE_EPS;
    ht * x.powf(1.5 - 4.0 * e) / t
        + ht * x.powf(0.75 + 2.0 * e)
        + ht * x * x / t.powf(2.0 - 2.0 * e)
        + ht * t / t.ln().powi(DEFAULT_M as i32 - 2)
}

/// Form factor with the `o(1)` terms dropped. Even in `α`.
pub fn conj1_form_factor(alpha: f64, t: f64, h: f64) -> f64 {
    let a = alpha.abs();
    let lt = t.ln();
    let osc = 4.0 * (h * a * lt).cos() / (4.0 + h * h);
    if a <= 1.0 {
        (-2.0 * a * lt).exp() * lt + a * osc
    } else {
        osc
    }
}

const DENSITY_TOL: f64 = 1e-10;

fn integer_breaks(a: f64, b: f64) -> Vec<f64> {
    let lo = a.ceil() as i64;
    let hi = b.floor() as i64;
    (lo..=hi).map(|k| k as f64).filter(|&k| k > a && k < b).collect()
}

/// `∫ 1 − 4/(4+h²)·fejer(u) du` over `[c−α, c+α]`, `c = h log T / 2π`.
pub fn conj2_density(alpha: f64, t: f64, h: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "requires α > 0"));
    }
    let c = h * t.ln() / (2.0 * PI);
    let (a, b) = (c - alpha, c + alpha);
    let k = 4.0 / (4.0 + h * h);
    let r = quad_with(
        |u| 1.0 - k * fejer(u),
        a,
        b,
        &integer_breaks(a, b),
        QuadOptions::tol(DENSITY_TOL),
    )?;
    Ok(r.value)
}

/// `∫_α^β 1 − fejer(u)/(1+(πu/log T)²) du`, `0 ≤ α < β ≤ log T`.
pub fn conj3_density(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    let lt = t.ln();
    if !(alpha >= 0.0) || !(beta > alpha) {
        return Err(Error::domain("beta", beta, "requires 0 <= α < β"));
    }
    if beta > lt {
        return Err(Error::domain("beta", beta, "requires β <= log T"));
    }
    let r = quad_with(
        |u| {
            let q = PI * u / lt;
            1.0 - fejer(u) / (1.0 + q * q)
        },
        alpha,
        beta,
        &integer_breaks(alpha, beta),
        QuadOptions::tol(DENSITY_TOL),
    )?;
    Ok(r.value)
}

/// Breakdown wrapper for the first conjecture.
pub fn conj1_breakdown(alpha: f64, t: f64, h: f64) -> TheoryBreakdown {
    TheoryBreakdown::new(TheoremId::C1)
        .main("form_factor", conj1_form_factor(alpha, t, h))
        .finish()
}

/// Breakdown wrapper for the band density around `h`.
pub fn conj2_breakdown(alpha: f64, t: f64, h: f64) -> Result<TheoryBreakdown> {
    let v = conj2_density(alpha, t, h)?;
    Ok(TheoryBreakdown::new(TheoremId::C2)
        .integral("band_density", v, DENSITY_TOL)
        .finish())
}

/// Breakdown wrapper for the annulus density; warns beyond `log T / 2`.
pub fn conj3_breakdown(alpha: f64, beta: f64, t: f64) -> Result<TheoryBreakdown> {
    let v = conj3_density(alpha, beta, t)?;
    let lt = t.ln();
    Ok(TheoryBreakdown::new(TheoremId::C3)
        .integral("annulus_density", v, DENSITY_TOL)
        .warn_if(beta > lt / 2.0, || format!("β = {beta} exceeds log T / 2 = {}", lt / 2.0))
        .finish())
}

/// The theorem normally used at `(x, T)`: T1 up to `T/log T`, T3 up to `T`,
/// T4 beyond.
pub fn auto_theorem(x: f64, t: f64) -> TheoremId {
    if x <= t / t.ln() {
        TheoremId::T1
    } else if x <= t {
        TheoremId::T3
    } else {
        TheoremId::T4
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::GaussLegendre;

    const T: f64 = 74920.0;

    #[test]
    fn thm1_h0_reduces() {
        let x = 50.0;
        let b = thm1_prediction(x, T, 0.0).unwrap();
        let l = (T / (2.0 * PI)).ln();
        let want = T / (2.0 * PI) * x.ln() + T / (2.0 * PI * x * x) * (l * l - 2.0 * l);
        assert!((b.total - want).abs() < 1e-9 * want);
        let b1 = thm1_prediction(1.0, T, 0.0).unwrap();
        assert_eq!(b1.main_terms["diagonal_bracket"], 0.0);
    }

    #[test]
    fn thm1_exact_trig_point() {
        let h = 2.0;
        let x = (2.0 * PI / h).exp();
        let b = thm1_prediction(x, T, h).unwrap();
        let want = T / (2.0 * PI) * (PI / 2.0);
        assert!((b.main_terms["diagonal_bracket"] - want).abs() < 1e-9 * want);
    }

    #[test]
    fn thm1_out_of_range_warns() {
        let b = thm1_prediction(T, T, 0.0).unwrap();
        assert_eq!(b.warnings.len(), 1);
    }

    #[test]
    fn thm3_and_thm4_reductions() {
        let b3 = thm3_prediction(T, T, 0.0).unwrap();
        assert!((b3.total - T / PI * T.ln() / 2.0).abs() < 1e-9 * b3.total);
        let b4 = thm4_prediction(T * T, T, 0.0).unwrap();
        let want = T / (2.0 * PI) * (T / (2.0 * PI * std::f64::consts::E)).ln();
        assert!((b4.total - want).abs() < 1e-9 * want);
        // cos(h log x) = 0
        let x = T;
        let h = PI / 2.0 / x.ln();
        assert!(thm4_prediction(x, T, h).unwrap().total.abs() < 1e-9);
    }

    #[test]
    fn thm3_h2_bracket_matches_halved_thm1_constants() {
        let h = 2.0;
        let lx = T.ln();
        let (s, c) = (h * lx).sin_cos();
        let want = 0.5 * (T / PI) * (4.0 * c / 8.0 * lx - 16.0 * s / 64.0);
        let got = thm3_prediction(T, T, h).unwrap().total;
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn thm4_direct_formula() {
        let x = T.powf(1.5);
        let h = 1.0;
        let want = T / (2.0 * PI)
            * (T / (2.0 * PI * std::f64::consts::E)).ln()
            * 4.0
            * (h * x.ln()).cos()
            / 5.0;
        let got = thm4_prediction(x, T, h).unwrap().total;
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn predictions_are_even_in_h() {
        for h in [0.5, 1.0, 3.0, 10.0] {
            for x in [3.0, 1000.0, T, T * 10.0] {
                let a = thm1_prediction(x, T, h).unwrap().total;
                let b = thm1_prediction(x, T, -h).unwrap().total;
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                let a = thm3_prediction(x, T, h).unwrap().total;
                let b = thm3_prediction(x, T, -h).unwrap().total;
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                let a = thm4_prediction(x, T, h).unwrap().total;
                let b = thm4_prediction(x, T, -h).unwrap().total;
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
            assert_eq!(conj1_form_factor(0.7, T, h), conj1_form_factor(0.7, T, -h));
        }
    }

    #[test]
    fn conj1_values() {
        assert!((conj1_form_factor(0.0, T, 0.0) - T.ln()).abs() < 1e-12);
        assert!((conj1_form_factor(2.0, T, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(conj1_form_factor(-0.3, T, 1.0), conj1_form_factor(0.3, T, 1.0));
        let below = conj1_form_factor(1.0, T, 1.0);
        let above = conj1_form_factor(1.0 + 1e-12, T, 1.0);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn conj2_against_gauss_legendre() {
        let gl = GaussLegendre::new(60);
        let want = 2.0 * gl.integrate(|u| 1.0 - fejer(u), 0.0, 1.0);
        let got = conj2_density(1.0, T, 0.0).unwrap();
        assert!((got - want).abs() < 1e-10, "{got} {want}");
    }

    #[test]
    fn conj2_small_alpha_is_cubic() {
        let a = 1e-2;
        let r = conj2_density(a, T, 0.0).unwrap() / conj2_density(a / 2.0, T, 0.0).unwrap();
        assert!((r - 8.0).abs() < 1e-2, "{r}");
    }

    #[test]
    fn conj3_mean_value() {
        let (a, d) = (0.7, 1e-5);
        let lt = T.ln();
        let q = PI * a / lt;
        let integrand = 1.0 - fejer(a) / (1.0 + q * q);
        let got = conj3_density(a, a + d, T).unwrap();
        assert!((got / d - integrand).abs() < 1e-4);
        assert!(conj3_density(1.0, lt + 1.0, T).is_err());
        let b = conj3_breakdown(1.0, 0.6 * lt, T).unwrap();
        assert_eq!(b.warnings.len(), 1);
    }

    #[test]
    fn total_is_sum_of_components() {
        let b = thm1_prediction(100.0, T, 1.3).unwrap();
        let s: f64 = b.main_terms.values().sum::<f64>()
            + b.integral_terms.values().map(|t| t.value).sum::<f64>();
        assert!((b.total - s).abs() <= 1e-12 * s.abs());
        let json: serde_json::Value = serde_json::from_str(&b.to_json()).unwrap();
        assert!(json["main_terms"]["inverse_square"].is_number());
    }

    #[test]
    fn auto_selection() {
        assert_eq!(auto_theorem(100.0, T), TheoremId::T1);
        assert_eq!(auto_theorem(T / 2.0, T), TheoremId::T3);
        assert_eq!(auto_theorem(2.0 * T, T), TheoremId::T4);
    }
}
