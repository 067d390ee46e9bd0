use std::f64::consts::PI;

use rayon::prelude::*;

use super::table::{Provenance, ZeroTable};
use super::zeta::{theta, theta_prime, z};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`compute_zeros`].
pub const ZERO_CAP: usize = 100_000;

const MAX_SUBDIVISION_LEVELS: u32 = 12;
const ROOT_TOL: f64 = 1e-11;

/// Principal branch of Lambert W for `w > -1/e`.
fn lambert_w(w: f64) -> f64 {
    let mut x = if w < 1.0 { w / (1.0 + w).sqrt().max(0.5) } else { w.ln() - w.ln().ln().max(0.0) };
    for _ in 0..60 {
        let ex = x.exp();
        let step = (x * ex - w) / (ex * (x + 1.0));
        x -= step;
        if step.abs() < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// The Gram point `g_n` with `θ(g_n) = nπ`, for `n ≥ -1`.
///
/// Depends only on `n`, so tables computed in different batches agree bit for bit.
pub fn gram_point(n: i64) -> f64 {
    assert!(n >= -1, "Gram points are indexed from -1");
    // θ(t) ≈ (t/2) log(t/2πe) - π/8
    let target = n as f64 * PI;
    let w = (n as f64 + 0.125) / std::f64::consts::E;
    let mut t = 2.0 * PI * std::f64::consts::E * lambert_w(w).exp();
    for _ in 0..50 {
        let step = (theta(t) - target) / theta_prime(t);
        t -= step;
        if step.abs() <= 1e-14 * t {
            break;
        }
    }
    t
}

fn sign(v: f64) -> bool {
    v >= 0.0
}

/// Root of `z` in a sign-change bracket, by the Illinois variant of regula falsi.
fn refine(mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a <= ROOT_TOL {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        // fall back to bisection when the secant leaves the interior
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = z(c);
        if fc == 0.0 {
            return c;
        }
        if sign(fc) == sign(fa) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Zeros of one Gram block `[g_a, g_b]` between two good Gram points.
fn block_zeros(points: &[(f64, f64)], expected: usize) -> Result<Vec<f64>> {
    let mut grid: Vec<(f64, f64)> = points.to_vec();
    let mut level = 0;
    loop {
        let changes = grid.windows(2).filter(|w| sign(w[0].1) != sign(w[1].1)).count();
        if changes == expected {
            break;
        }
        if changes > expected || level == MAX_SUBDIVISION_LEVELS {
            return Err(Error::MissedZero {
                lo: points[0].0,
                hi: points[points.len() - 1].0,
                expected,
                found: changes,
            });
        }
        let mut finer = Vec::with_capacity(2 * grid.len());
        for w in grid.windows(2) {
            finer.push(w[0]);
            let m = 0.5 * (w[0].0 + w[1].0);
            finer.push((m, z(m)));
        }
        finer.push(grid[grid.len() - 1]);
        grid = finer;
        level += 1;
    }
    Ok(grid
        .windows(2)
        .filter(|w| sign(w[0].1) != sign(w[1].1))
        .map(|w| refine(w[0].0, w[0].1, w[1].0, w[1].1))
        .collect())
}

/// The first `n` zeros of `ζ(1/2 + it)` with `t > 0`.
///
/// Zeros are located in Gram blocks (runs between Gram points `g_j` with
/// `(-1)^j Z(g_j) > 0`); a block spanning `k` Gram intervals must show `k` sign
/// changes after subdivision, otherwise [`Error::MissedZero`] is returned.
pub fn compute_zeros(n: usize) -> Result<ZeroTable> {
    if n > ZERO_CAP {
        return Err(Error::ZeroCapExceeded {
            requested: n,
            cap: ZERO_CAP,
        });
    }
    if n == 0 {
        return ZeroTable::new(Vec::new(), Some(0.0), Provenance::Computed);
    }
    // Gram indices -1..=last; zeros in (g_{-1}, g_j] number j+1 at good g_j
    let mut last = n as i64 + 16;
    let mut gram: Vec<(f64, f64)> = Vec::new();
    let good = |j: i64, v: f64| if j.rem_euclid(2) == 0 { v > 0.0 } else { v < 0.0 };
    let goods = loop {
        let from = gram.len() as i64 - 1;
        let fresh: Vec<(f64, f64)> = (from..=last)
            .into_par_iter()
            .map(|j| {
                let g = gram_point(j);
                (g, z(g))
            })
            .collect();
        gram.extend(fresh);
        let goods: Vec<usize> = (0..gram.len())
            .filter(|&i| good(i as i64 - 1, gram[i].1))
            .collect();
        if goods.first() != Some(&0) {
            return Err(Error::MissedZero {
                lo: gram[0].0,
                hi: gram[0].0,
                expected: 0,
                found: 0,
            });
        }
        // enough once a good Gram point closes n zeros
        if goods.last().is_some_and(|&i| i >= n) {
            break goods;
        }
        last += 64;
    };
    let blocks: Vec<(usize, usize)> = goods
        .windows(2)
        .map(|w| (w[0], w[1]))
        .take_while(|&(a, _)| a < n)
        .collect();
    let per_block: Vec<Result<Vec<f64>>> = blocks
        .par_iter()
        .map(|&(a, b)| block_zeros(&gram[a..=b], b - a))
        .collect();
    let mut zeros = Vec::with_capacity(n + 16);
    for r in per_block {
        zeros.extend(r?);
    }
    zeros.truncate(n);
    let t_max = zeros[n - 1];
    ZeroTable::new(zeros, Some(t_max), Provenance::Computed)
}
