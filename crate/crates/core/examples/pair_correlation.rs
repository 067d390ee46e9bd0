//! `F_h(x, T)` on computed zeros: exact against windowed, the symmetry in
//! `h`, and the range-matched prediction.
//!
//!     cargo run --release --example pair_correlation -- 5000

use zeta_paircorr::empirical::{fh, fh_exact, Mode, PairCorrRequest};
use zeta_paircorr::theory::{auto_theorem, thm1_prediction, thm3_prediction, thm4_prediction, TheoremId};
use zeta_paircorr::zeros::compute_zeros;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3000);
    let zeros = compute_zeros(n)?;
    let t = zeros.t_max();
    println!("{n} zeros, T = {t:.3}");

    for alpha in [0.3, 0.8, 1.2] {
        for h in [0.0, 1.0, -1.0] {
            let exact = fh_exact(&zeros, &PairCorrRequest::from_alpha(alpha, t, h, Mode::Exact)?)?;
            let win = fh(&zeros, &PairCorrRequest::from_alpha(alpha, t, h, Mode::Windowed { w: 50.0 })?)?;
            let x = exact.x;
            let pred = match auto_theorem(x, t) {
                TheoremId::T1 => thm1_prediction(x, t, h)?,
                TheoremId::T3 => thm3_prediction(x, t, h)?,
                _ => thm4_prediction(x, t, h)?,
            };
            println!(
                "alpha {alpha} h {h:+}: exact {:>12.3}  W=50 {:>12.3} (bound {:.1})  {} {:>12.3}",
                exact.value, win.value, win.truncation_bound, pred.theorem_id, pred.total
            );
        }
    }
    Ok(())
}
