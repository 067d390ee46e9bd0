//! Cosine and sine integrals, `∫_1^∞ sin(at)/t^{2n} dt`, the exponential
//! trigonometric antiderivatives and adaptive quadrature.

use zeta_paircorr::special::quad::{quad_log, quad_with, QuadOptions};
use zeta_paircorr::special::{
    cosine_integral, sin_over_x_power_integral, sine_integral, ExpTrigAntiderivative, ExpTrigKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for x in [0.1, 1.0, 4.0, 20.0, 100.0] {
        println!("ci({x}) = {:+.15}   si({x}) = {:+.15}", cosine_integral(x)?, sine_integral(x));
    }

    println!();
    for n in [1, 2] {
        for a in [0.5, 2.0, 10.0] {
            let closed = sin_over_x_power_integral(a, n)?;
            let half = std::f64::consts::PI / a;
            let breaks: Vec<f64> = (1..4000).map(|k| k as f64 * half).filter(|&b| b > 1.0).collect();
            let end = *breaks.last().unwrap();
            let q = quad_with(
                |t| (a * t).sin() / t.powi(2 * n as i32),
                1.0,
                end,
                &breaks,
                QuadOptions { tol: 1e-13, max_intervals: 50_000 },
            )?;
            let tail = (a * end).cos() / (a * end.powi(2 * n as i32));
            println!("n={n} a={a:<4} closed {closed:+.12}  quadrature + tail: {:+.12}", q.value + tail);
        }
    }

    println!();
    let p = ExpTrigAntiderivative::new(-0.7, 3.0, ExpTrigKind::XExpCos)?;
    let q = quad_with(|x| p.integrand(x), -1.0, 2.0, &[], QuadOptions::tol(1e-14))?;
    println!("int_-1^2 x e^(-0.7x) cos 3x: antiderivative {:+.14}, quadrature {:+.14}", p.definite(-1.0, 2.0), q.value);

    // ∫_1^1e8 du/(u log² u + u) via v = log u
    let r = quad_log(|u| 1.0 / (u * (u.ln().powi(2) + 1.0)), 1.0, 1e8, 1e-12)?;
    println!("log substitution: {:.12} vs atan(log 1e8) = {:.12}", r.value, 1e8f64.ln().atan());
    Ok(())
}
