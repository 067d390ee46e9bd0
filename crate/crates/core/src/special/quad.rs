//! Adaptive Gauss–Kronrod quadrature with a hard subdivision budget.
//!
//! Integrands with kinks or jumps must declare them as breakpoints.
//! Oscillatory factors of the form `cos(h log u)` are handled by the caller
//! through [`quad_log`], which integrates in `v = log u`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a quadrature: the value and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Integral {
    type Output = Integral;
    fn add(self, o: Integral) -> Integral {
        Integral {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute tolerance on the returned value.
    pub tol: f64,
    /// Maximum number of live subintervals.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// One G7/K15 panel.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Integral {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Integral {
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Integral,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.est.error == o.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est.error.total_cmp(&o.est.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`, with the interior
/// `breakpoints` used as initial panel boundaries.
pub fn quad_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    if b < a {
        let r = quad_with(f, b, a, breakpoints, opts)?;
        return Ok(Integral {
            value: -r.value,
            error: r.error,
        });
    }
    let mut edges = vec![a];
    edges.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        heap.push(Panel {
            a: w[0],
            b: w[1],
            est: gk15(&f, w[0], w[1]),
        });
    }
    let total = |heap: &BinaryHeap<Panel>| {
        let mut v = crate::sum::Neumaier::new();
        let mut e = 0.0;
        for p in heap.iter() {
            v.add(p.est.value);
            e += p.est.error;
        }
        Integral {
            value: v.value(),
            error: e,
        }
    };
    let mut err: f64 = heap.iter().map(|p| p.est.error).sum();
    while err > opts.tol {
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureBudget {
                tol: opts.tol,
                estimate: err,
                budget: opts.max_intervals,
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::QuadratureBudget {
                tol: opts.tol,
                estimate: err,
                budget: opts.max_intervals,
            });
        }
        let l = gk15(&f, worst.a, m);
        let r = gk15(&f, m, worst.b);
        err += l.error + r.error - worst.est.error;
        heap.push(Panel {
            a: worst.a,
            b: m,
            est: l,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            est: r,
        });
        // Resynchronise the running error occasionally to avoid drift.
        if heap.len() % 64 == 0 {
            err = heap.iter().map(|p| p.est.error).sum();
        }
    }
    Ok(total(&heap))
}

/// Adaptive integration over a finite interval.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    quad_with(f, a, b, &[], QuadOptions::tol(tol))
}

/// Integration over `[a, ∞)`.
///
/// `tail_bound(X)` must bound `∫_X^∞ |f|`. The range is cut at the first
/// `X = a + 2^k` with `tail_bound(X) < tol / 2`; the bound is added to the
/// returned error estimate.
pub fn quad_to_infinity<F, E>(f: F, a: f64, tail_bound: E, tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> f64,
    E: Fn(f64) -> f64,
{
    let mut span = 1.0;
    let mut cut = a + span;
    while tail_bound(cut) >= 0.5 * tol {
        span *= 2.0;
        cut = a + span;
        if span > 1e300 {
            return Err(Error::domain("tail_bound", tail_bound(cut), "envelope does not decay"));
        }
    }
    let tail = tail_bound(cut);
    let r = quad_with(f, a, cut, &[], QuadOptions::tol(0.5 * tol))?;
    Ok(Integral {
        value: r.value,
        error: r.error + tail,
    })
}

/// `∫_a^b g(u) du` computed as `∫_{log a}^{log b} g(e^v) e^v dv`, `0 < a < b`.
///
/// Under this substitution `cos(h log u)` becomes `cos(h v)`, which has
/// `O(h)` oscillations over the range and is handled by plain adaptivity.
pub fn quad_log<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if a <= 0.0 {
        return Err(Error::domain("a", a, "log substitution needs a > 0"));
    }
    quad(|v| {
        let u = v.exp();
        g(u) * u
    }, a.ln(), b.ln(), tol)
}

/// Fixed-order Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
                }
                pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes on `[-1, 1]`, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = crate::sum::Neumaier::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(c + h * x));
        }
        acc.value() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_are_exact_for_polynomials() {
        let wsum: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((wsum - 2.0).abs() < 1e-15);
        let gsum: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((gsum - 2.0).abs() < 1e-15);
        for k in 0..=22 {
            let r = gk15(&|x: f64| x.powi(k), 0.0, 1.0);
            assert!((r.value - 1.0 / (k + 1) as f64).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn linear_on_unit_interval() {
        let r = quad(|u| u, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert!(r.error <= 1e-12);
    }

    #[test]
    fn inverse_square_to_infinity() {
        let r = quad_to_infinity(|u| u.powi(-2), 1.0, |x| 1.0 / x, 1e-9).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
        assert!(r.error <= 1e-9);
    }

    #[test]
    fn breakpoints_handle_jumps() {
        let f = |u: f64| if u < 0.3 { 1.0 } else { 2.0 };
        let r = quad_with(f, 0.0, 1.0, &[0.3], QuadOptions::tol(1e-13)).unwrap();
        assert!((r.value - 1.7).abs() < 1e-13);
    }

    #[test]
    fn log_substitution_handles_oscillation() {
        // ∫_1^e cos(10 log u) du = Re ∫_0^1 e^{(1+10i)v} dv
        let z = num_complex::Complex64::new(1.0, 10.0);
        let exact = ((z.exp() - 1.0) / z).re;
        let r = quad_log(|u| (10.0 * u.ln()).cos(), 1.0, std::f64::consts::E, 1e-12).unwrap();
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadOptions {
            tol: 1e-14,
            max_intervals: 4,
        };
        let r = quad_with(|u: f64| (1.0 / u).sin(), 1e-6, 1.0, &[], opts);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }

    #[test]
    fn gauss_legendre_exactness() {
        let gl = GaussLegendre::new(12);
        for k in 0..24 {
            let v = gl.integrate(|x| x.powi(k), -1.0, 1.0);
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k + 1) as f64 };
            assert!((v - exact).abs() < 1e-14, "degree {k}: {v}");
        }
    }
}
