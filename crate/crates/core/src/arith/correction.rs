use std::sync::Arc;

use super::singular::SingularSeriesTable;
use crate::error::{Error, Result};
use crate::special::EULER_GAMMA;
use crate::sum::Neumaier;

/// `log 2π`.
pub const LOG_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// The correction functions `ε(y) = Σ_{k≤y} 𝔖(k) - y + ½ log y` and
/// `f(y) = ∫_0^y (ε(u) - B/2) du`, with `B = -C₀ - log 2π`.
///
/// Between consecutive integers `ε(u) = c_n - u + ½ log u`, so `f` is
/// integrated exactly one unit interval at a time and cached at integers.
#[derive(Debug, Clone)]
pub struct CorrectionState {
    table: Arc<SingularSeriesTable>,
    b: f64,
    // f_at[n] = f(n), n = 0..=K_max
    f_at: Vec<f64>,
}

impl CorrectionState {
    pub fn new(table: Arc<SingularSeriesTable>) -> Self {
        let b = -EULER_GAMMA - LOG_TWO_PI;
        let k_max = table.k_max();
        let mut f_at = vec![0.0; k_max + 1];
        if k_max >= 1 {
            f_at[1] = -1.0 - 0.5 * b;
            let mut acc = Neumaier::new();
            acc.add(f_at[1]);
            for n in 1..k_max {
                acc.add(Self::unit_piece(&table, b, n, 1.0));
                f_at[n + 1] = acc.value();
            }
        }
        Self { table, b, f_at }
    }

    /// `∫_n^{n+s} (ε(u) - B/2) du` for integer `n ≥ 1`, `0 ≤ s ≤ 1`.
    fn unit_piece(table: &SingularSeriesTable, b: f64, n: usize, s: f64) -> f64 {
        let nf = n as f64;
        let e_n = table.excess(n);
        // ∫_n^{n+s} ½ log u du = ½ [(n+s) log(n+s) - n log n - s]
        let y = nf + s;
        let ulogu = s * y.ln() + nf * (s / nf).ln_1p();
        (e_n - 0.5 * b) * s - 0.5 * s * s + 0.5 * (ulogu - s)
    }

    pub fn table(&self) -> &SingularSeriesTable {
        &self.table
    }

    pub fn table_arc(&self) -> &Arc<SingularSeriesTable> {
        &self.table
    }

    /// `B = -C₀ - log 2π`.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn euler_gamma(&self) -> f64 {
        EULER_GAMMA
    }

    /// Largest argument for which `ε` and `f` are available.
    pub fn y_max(&self) -> f64 {
        (self.table.k_max() + 1) as f64
    }

    fn check_range(&self, y: f64) -> Result<()> {
        if y >= self.y_max() {
            return Err(Error::TableOverflow {
                y,
                k_max: self.table.k_max(),
            });
        }
        Ok(())
    }

    /// `ε(y)`, right-continuous at integers.
    pub fn epsilon(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::domain("y", y, "ε has a log singularity at 0; needs y > 0"));
        }
        self.check_range(y)?;
        Ok(self.epsilon_unchecked(y))
    }

    #[inline]
    pub(crate) fn epsilon_unchecked(&self, y: f64) -> f64 {
        let n = y.floor() as usize;
        let e_n = if n == 0 { 0.0 } else { self.table.excess(n) };
        e_n - (y - n as f64) + 0.5 * y.ln()
    }

    /// `f(y)`.
    pub fn f(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::domain("y", y, "f is defined for y >= 0"));
        }
        self.check_range(y)?;
        Ok(self.f_unchecked(y))
    }

    #[inline]
    pub(crate) fn f_unchecked(&self, y: f64) -> f64 {
        if y <= 1.0 {
            return Self::f_unit(y, self.b);
        }
        let n = y.floor() as usize;
        let s = y - n as f64;
        if s == 0.0 {
            return self.f_at[n];
        }
        self.f_at[n] + Self::unit_piece(&self.table, self.b, n, s)
    }

    /// `f(u) = ½ u log u - (½ + B/2) u - ½ u²` on `[0, 1]`.
    pub fn f_unit(u: f64, b: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        0.5 * u * u.ln() - (0.5 + 0.5 * b) * u - 0.5 * u * u
    }

    /// `max_{1 ≤ u ≤ y_max} |f(u)| / u^p` sampled at integers; a documented
    /// surrogate for the implicit constant in `f(y) ≪ y^{1/2+ε}`.
    pub fn f_growth_constant(&self, p: f64) -> f64 {
        self.f_at
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, v)| v.abs() / (n as f64).powf(p))
            .fold(0.0, f64::max)
            .max(Self::f_unit(1.0, self.b).abs())
    }

    /// `max |ε(u)|` over `[1, y_max)`, attained at integers or just before.
    pub fn epsilon_sup(&self) -> f64 {
        let mut m: f64 = 1.0;
        for n in 1..self.table.k_max() {
            let at = self.epsilon_unchecked(n as f64).abs();
            let before = (self.table.excess(n) - 1.0 + 0.5 * ((n + 1) as f64).ln()).abs();
            m = m.max(at).max(before);
        }
        m
    }

    /// Integer grid of cached `(n, f(n))` pairs.
    pub fn f_grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.f_at.iter().enumerate().map(|(n, &v)| (n as f64, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quad::{quad_with, QuadOptions};

    fn state() -> CorrectionState {
        CorrectionState::new(Arc::new(SingularSeriesTable::new(20_000, 1_000_000)))
    }

    #[test]
    fn b_constant() {
        let c = state();
        assert!((c.b() - (-0.577_215_664_901_532_9 - (2.0 * std::f64::consts::PI).ln())).abs() < 1e-15);
    }

    #[test]
    fn epsilon_examples() {
        let c = state();
        assert!((c.epsilon(0.5).unwrap() - (0.5 * 0.5f64.ln() - 0.5)).abs() < 1e-15);
        assert!((c.epsilon(1.0).unwrap() + 1.0).abs() < 1e-15);
        let direct: f64 = (1..=100).map(|k| c.table().get(k).unwrap()).sum::<f64>() - 100.0
            + 0.5 * 100f64.ln();
        assert!((c.epsilon(100.0).unwrap() - direct).abs() < 1e-11);
        assert!(c.epsilon(0.0).is_err());
    }

    #[test]
    fn epsilon_jumps_by_singular_series() {
        let c = state();
        for k in [2usize, 3, 10, 30, 1001, 5000] {
            let kf = k as f64;
            let jump = c.epsilon(kf).unwrap() - c.epsilon(kf - 1e-9).unwrap();
            assert!((jump - c.table().get(k).unwrap()).abs() < 1e-8, "k={k}");
            // continuous off the integers
            let a = c.epsilon(kf + 0.5).unwrap();
            let b = c.epsilon(kf + 0.5 + 1e-9).unwrap();
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn f_examples() {
        let c = state();
        assert_eq!(c.f(0.0).unwrap(), 0.0);
        assert!((c.f(1.0).unwrap() - (-1.0 - c.b() / 2.0)).abs() < 1e-15);
        assert!(c.f(-1.0).is_err());
        // piecewise-exact value at 50 against adaptive quadrature of ε - B/2
        let breaks: Vec<f64> = (1..50).map(|k| k as f64).collect();
        let q = quad_with(
            |u| if u == 0.0 { 0.0 } else { c.epsilon(u).unwrap() - c.b() / 2.0 },
            0.0,
            50.0,
            &breaks,
            QuadOptions::tol(1e-12),
        )
        .unwrap();
        let f50 = c.f(50.0).unwrap();
        assert!((f50 - q.value).abs() < 1e-9, "{f50} vs {}", q.value);
        assert!(f50.abs() <= 5.0 * 50f64.powf(0.6));
    }

    #[test]
    fn f_derivative_is_epsilon_minus_half_b() {
        use rand::{Rng, SeedableRng};
        let c = state();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut y: f64 = rng.gen_range(0.01..10_000.0);
            if (y - y.round()).abs() < 1e-3 {
                y += 0.01;
            }
            let d = 1e-5;
            let num = (c.f(y + d).unwrap() - c.f(y - d).unwrap()) / (2.0 * d);
            let want = c.epsilon(y).unwrap() - c.b() / 2.0;
            assert!((num - want).abs() < 1e-5 * (1.0 + y.sqrt()), "y={y}: {num} vs {want}");
        }
    }

    #[test]
    fn out_of_range() {
        let c = state();
        assert!(c.f(20_001.0).is_err());
        assert!(c.epsilon(20_001.5).is_err());
    }
}
