//! Pair sums over zero ordinates: `F_h(x, T)`, the form factor, band pair
//! counts and the kernel-convolved statistic.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{chunked_sum, chunked_sum_n};
use crate::zeros::ZeroTable;

/// `w(u) = 4/(4 + u²)`.
#[inline]
pub fn weight(u: f64) -> f64 {
    4.0 / (4.0 + u * u)
}

/// Evaluation mode of a pair sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exact,
    /// Only pairs with `|γ - γ' - h| ≤ w`.
    Windowed { w: f64 },
}

/// Parameters of one `F_h(x, T)` evaluation. `x` is carried as `log x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrRequest {
    pub log_x: f64,
    pub t: f64,
    pub h: f64,
    pub mode: Mode,
}

impl PairCorrRequest {
    pub fn new(x: f64, t: f64, h: f64, mode: Mode) -> Result<Self> {
        if !(x >= 1.0) {
            return Err(Error::domain("x", x, "x must be >= 1"));
        }
        Self::from_log_x(x.ln(), t, h, mode)
    }

    /// Request with `x = T^α`, without rounding `x` through `exp`.
    pub fn from_alpha(alpha: f64, t: f64, h: f64, mode: Mode) -> Result<Self> {
        Self::from_log_x(alpha.abs() * t.ln(), t, h, mode)
    }

    pub fn from_log_x(log_x: f64, t: f64, h: f64, mode: Mode) -> Result<Self> {
        if !(log_x >= 0.0) {
            return Err(Error::domain("log_x", log_x, "x must be >= 1"));
        }
        if !(t > 0.0) {
            return Err(Error::domain("T", t, "T must be positive"));
        }
        if !h.is_finite() {
            return Err(Error::domain("h", h, "h must be finite"));
        }
        if let Mode::Windowed { w } = mode {
            if !(w > h.abs() + 2.0) {
                return Err(Error::domain("W", w, "window must exceed |h| + 2"));
            }
        }
        Ok(Self { log_x, t, h, mode })
    }

    pub fn x(&self) -> f64 {
        self.log_x.exp()
    }
}

/// Result of a pair sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FhEstimate {
    pub x: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub h: f64,
    pub mode: Mode,
    pub value: f64,
    /// Ordered pairs included, diagonal counted once per zero.
    pub pairs_used: u64,
    /// Bound on the omitted pairs, `omitted × 4/(4 + W²)`; 0 in exact mode.
    pub truncation_bound: f64,
    /// Sharper bound on the omitted pairs from dyadic distance shells
    /// `W 2^k < |γ - γ' - h| ≤ W 2^{k+1}`, each pair bounded by `w(W 2^k)`.
    pub shell_bound: f64,
    pub h_tilde: f64,
    /// Contribution of the `γ = γ'` pairs, `N(T) cos(h log x) w(h)`.
    pub diagonal: f64,
}

impl FhEstimate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn zeros_up_to(zeros: &ZeroTable, t: f64) -> Result<&[f64]> {
    zeros.check_coverage(t)?;
    Ok(zeros.up_to(t))
}

/// Core sweep shared by both modes; `w = ∞` gives the full double sum.
///
/// Each unordered pair `i < j` with `δ = γ_j - γ_i` contributes
/// `τ(δ - h) + τ(δ + h)`, `τ(u) = cos(u log x) w(u)`. The two terms are added
/// before entering the row total, so `h ↦ -h` permutes only that addition and
/// the result is bit-identical.
fn sweep(zs: &[f64], log_x: f64, h: f64, w: f64) -> (f64, u64) {
    let tau = |u: f64| (u * log_x).cos() * weight(u);
    let reach = w + h.abs();
    let [off, used] = chunked_sum_n::<2, _>(zs.len(), |i| {
        let gi = zs[i];
        let mut acc = crate::sum::Neumaier::new();
        let mut used = 0u64;
        for &gj in &zs[i + 1..] {
            let d = gj - gi;
            if d > reach {
                break;
            }
            let (a, b) = (d - h, d + h);
            let ta = if a.abs() <= w {
                used += 1;
                tau(a)
            } else {
                0.0
            };
            let tb = if b.abs() <= w {
                used += 1;
                tau(b)
            } else {
                0.0
            };
            acc.add(ta + tb);
        }
        [acc.value(), used as f64]
    });
    (off, used as u64)
}

fn estimate(zeros: &ZeroTable, req: &PairCorrRequest, w: f64) -> Result<FhEstimate> {
    let zs = zeros_up_to(zeros, req.t)?;
    let n = zs.len() as u64;
    let h = req.h.abs();
    let diagonal = n as f64 * ((h * req.log_x).cos() * weight(h));
    let (off, used_off) = sweep(zs, req.log_x, req.h, w);
    let pairs_used = n + used_off;
    let omitted = n * n - pairs_used;
    let truncation_bound = if omitted == 0 { 0.0 } else { omitted as f64 * weight(w) };
    let shell_bound = if omitted == 0 { 0.0 } else { shell_bound(zs, req.h, w, pairs_used) };
    Ok(FhEstimate {
        x: req.x(),
        t: req.t,
        h: req.h,
        mode: req.mode,
        value: diagonal + off,
        pairs_used,
        truncation_bound,
        shell_bound,
        h_tilde: req.h.abs() + 1.0,
        diagonal,
    })
}

/// Ordered pairs (diagonal included) with `|γ_i - γ_j - h| ≤ r`.
fn pairs_within(zs: &[f64], h: f64, r: f64) -> u64 {
    chunked_sum(zs.len(), |i| {
        let c = zs[i] - h;
        (zs.partition_point(|&g| g <= c + r) - zs.partition_point(|&g| g < c - r)) as f64
    }) as u64
}

fn shell_bound(zs: &[f64], h: f64, w: f64, used: u64) -> f64 {
    let n = zs.len() as u64;
    let span = zs.last().unwrap_or(&0.0) - zs.first().unwrap_or(&0.0) + h.abs();
    let mut inner = used;
    let mut r = w;
    let mut bound = 0.0;
    while inner < n * n {
        let outer = if 2.0 * r > span { n * n } else { pairs_within(zs, h, 2.0 * r).max(inner) };
        bound += (outer - inner) as f64 * weight(r);
        inner = outer;
        r *= 2.0;
    }
    bound
}

/// `F_h(x, T)` over all ordered pairs `0 < γ, γ' ≤ T`, diagonal included.
pub fn fh_exact(zeros: &ZeroTable, req: &PairCorrRequest) -> Result<FhEstimate> {
    if req.mode != Mode::Exact {
        return Err(Error::Config("fh_exact needs Mode::Exact".into()));
    }
    estimate(zeros, req, f64::INFINITY)
}

/// `F_h(x, T)` restricted to `|γ - γ' - h| ≤ W`, with the omitted pairs
/// counted exactly and bounded by `4/(4 + W²)` each.
pub fn fh_windowed(zeros: &ZeroTable, req: &PairCorrRequest) -> Result<FhEstimate> {
    match req.mode {
        Mode::Windowed { w } => estimate(zeros, req, w),
        Mode::Exact => Err(Error::Config("fh_windowed needs Mode::Windowed".into())),
    }
}

/// Dispatches on the request's mode.
pub fn fh(zeros: &ZeroTable, req: &PairCorrRequest) -> Result<FhEstimate> {
    match req.mode {
        Mode::Exact => fh_exact(zeros, req),
        Mode::Windowed { .. } => fh_windowed(zeros, req),
    }
}

/// `(T/2π) log T`.
pub fn form_factor_norm(t: f64) -> f64 {
    t / (2.0 * PI) * t.ln()
}

/// `F_h(α) = F_h(T^{|α|}, T) / ((T/2π) log T)`, exact double sum.
pub fn form_factor(zeros: &ZeroTable, alpha: f64, t: f64, h: f64) -> Result<f64> {
    form_factor_with(zeros, alpha, t, h, Mode::Exact)
}

/// [`form_factor`] with a chosen evaluation mode.
pub fn form_factor_with(zeros: &ZeroTable, alpha: f64, t: f64, h: f64, mode: Mode) -> Result<f64> {
    if zeros.ordinates().first().is_none_or(|&g| t < g) {
        return Err(Error::domain("T", t, "no zeros up to T"));
    }
    let req = PairCorrRequest::from_alpha(alpha, t, h, mode)?;
    Ok(fh(zeros, &req)?.value / form_factor_norm(t))
}

/// Ordered pairs `γ ≠ γ'` up to `T` with `γ - γ' - h` in the band, divided by
/// `(T/2π) log T`.
///
/// With `beta = None` the band is `|γ - γ' - h| ≤ 2πα/log T`; with
/// `Some(β)` it is `2πα/log T ≤ γ - γ' - h ≤ 2πβ/log T`.
pub fn band_pair_count(zeros: &ZeroTable, t: f64, h: f64, alpha: f64, beta: Option<f64>) -> Result<f64> {
    Ok(band_pair_count_raw(zeros, t, h, alpha, beta)? as f64 / form_factor_norm(t))
}

/// Unnormalized count behind [`band_pair_count`].
pub fn band_pair_count_raw(zeros: &ZeroTable, t: f64, h: f64, alpha: f64, beta: Option<f64>) -> Result<u64> {
    if zeros.is_empty() {
        return Err(Error::domain("zeros", 0.0, "empty table"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "alpha must be positive"));
    }
    if let Some(b) = beta {
        if !(b > alpha) {
            return Err(Error::domain("beta", b, "beta must exceed alpha"));
        }
    }
    let zs = zeros_up_to(zeros, t)?;
    let scale = 2.0 * PI / t.ln();
    let (lo, hi) = match beta {
        None => (-alpha * scale, alpha * scale),
        Some(b) => (alpha * scale, b * scale),
    };
    // the pair (i, j) has d = γ_i - γ_j; test |d - h| ≤ δ on d itself so that
    // h ↦ -h with i ↔ j reproduces each decision exactly
    let inside = |d: f64| {
        let u = d - h;
        match beta {
            None => u.abs() <= hi,
            Some(_) => u >= lo && u <= hi,
        }
    };
    let slack = 1e-9 * (1.0 + t);
    let count = chunked_sum(zs.len(), |i| {
        let gi = zs[i];
        let from = zs.partition_point(|&g| g < gi - h - hi - slack);
        let to = zs.partition_point(|&g| g <= gi - h - lo + slack);
        (from..to).filter(|&j| j != i && inside(gi - zs[j])).count() as f64
    });
    Ok(count as u64)
}

/// Band count in locally unfolded units: a pair counts when
/// `|γ - γ' - h| · log(γ̄/2π)/2π ≤ α` with `γ̄` the pair midpoint, normalized by
/// the number of zeros up to `T` rather than `(T/2π) log T`.
pub fn band_pair_count_unfolded(zeros: &ZeroTable, t: f64, h: f64, alpha: f64) -> Result<f64> {
    if zeros.is_empty() {
        return Err(Error::domain("zeros", 0.0, "empty table"));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "alpha must be positive"));
    }
    let zs = zeros_up_to(zeros, t)?;
    let density = |g: f64| (g / (2.0 * PI)).ln().max(1e-3) / (2.0 * PI);
    // every pair midpoint is at least γ_1 and the density increases
    let reach = alpha / density(zs[0]);
    let count = chunked_sum(zs.len(), |i| {
        let gi = zs[i];
        let from = zs.partition_point(|&g| g < gi - h - reach);
        let to = zs.partition_point(|&g| g <= gi - h + reach);
        (from..to)
            .filter(|&j| j != i && ((gi - zs[j] - h) * density(0.5 * (gi + zs[j]))).abs() <= alpha)
            .count() as f64
    });
    Ok(count / zs.len() as f64)
}

/// An even test function `r` together with its Fourier transform `r̂`.
pub trait EvenKernel: Sync {
    fn r(&self, u: f64) -> f64;
    fn r_hat(&self, alpha: f64) -> f64;
    /// `r(u) = 0` for `|u| > support`; `None` if unbounded.
    fn support(&self) -> Option<f64>;
}

/// `r(u) = max(1 - |u|, 0)`, `r̂(α) = (sin πα / πα)²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TriangleKernel;

impl EvenKernel for TriangleKernel {
    fn r(&self, u: f64) -> f64 {
        (1.0 - u.abs()).max(0.0)
    }

    fn r_hat(&self, alpha: f64) -> f64 {
        crate::special::fejer(alpha)
    }

    fn support(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// The zero kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroKernel;

impl EvenKernel for ZeroKernel {
    fn r(&self, _: f64) -> f64 {
        0.0
    }

    fn r_hat(&self, _: f64) -> f64 {
        0.0
    }

    fn support(&self) -> Option<f64> {
        Some(0.0)
    }
}

fn check_even<K: EvenKernel + ?Sized>(kernel: &K) -> Result<()> {
    for i in 0..=400 {
        let u = i as f64 * 0.0125 + 1e-3;
        let (p, m) = (kernel.r(u), kernel.r(-u));
        if (p - m).abs() > 1e-12 * (1.0 + p.abs()) {
            return Err(Error::KernelNotEven { u, plus: p, minus: m });
        }
    }
    Ok(())
}

/// `((T/2π) log T)^{-1} Σ_{γ,γ'} r((γ - γ' - h) log T / 2π) w(γ - γ' - h)`.
pub fn convolved_statistic<K: EvenKernel + ?Sized>(zeros: &ZeroTable, t: f64, h: f64, kernel: &K) -> Result<f64> {
    check_even(kernel)?;
    let zs = zeros_up_to(zeros, t)?;
    let s = t.ln() / (2.0 * PI);
    let reach = kernel.support().map_or(f64::INFINITY, |r| r / s);
    let term = |u: f64| kernel.r(u * s) * weight(u);
    let total = chunked_sum(zs.len(), |i| {
        let gi = zs[i];
        let from = if reach.is_finite() {
            zs.partition_point(|&g| g < gi - h.abs() - reach)
        } else {
            0
        };
        let mut acc = crate::sum::Neumaier::new();
        for &gj in &zs[from..] {
            let d = gi - gj;
            if d < -h.abs() - reach {
                break;
            }
            acc.add(term(d - h));
        }
        acc.value()
    });
    Ok(total / form_factor_norm(t))
}
