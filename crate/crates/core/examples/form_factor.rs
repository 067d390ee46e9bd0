//! Empirical form factor `F_h(T^α, T) / ((T/2π) log T)` beside the
//! conjectured shape with the `o(1)` terms dropped.

use zeta_paircorr::empirical::{form_factor_with, Mode};
use zeta_paircorr::theory::conj1_form_factor;
use zeta_paircorr::zeros::compute_zeros;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zeros = compute_zeros(4000)?;
    let t = zeros.t_max();
    for h in [0.0, 2.0] {
        println!("h = {h}");
        for i in 1..=8 {
            let alpha = 0.25 * i as f64;
            let emp = form_factor_with(&zeros, alpha, t, h, Mode::Windowed { w: 100.0 })?;
            println!("  alpha {alpha:.2}: empirical {emp:+.4}  conjectured {:+.4}", conj1_form_factor(alpha, t, h));
        }
    }
    Ok(())
}
