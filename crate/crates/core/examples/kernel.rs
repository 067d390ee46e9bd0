//! The smooth truncation `Re Ψ̂_U(y) = sinc(2πy) sinc(2πΔy)^{K+1}` against
//! plain `sinc`, and how the gap shrinks as `Δ` is halved.

use std::f64::consts::PI;

use zeta_paircorr::special::{re_psi_hat, sinc, KernelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t: f64 = 74_920.83;
    let mut kp = KernelParams::from_height(t, 2, 3)?;
    println!("U = log^3 T = {:.2}", kp.u());
    for _ in 0..4 {
        let gap = (1..=20_000)
            .map(|i| i as f64 * 0.05)
            .map(|y| (re_psi_hat(y, &kp) - sinc(2.0 * PI * y)).abs())
            .fold(0.0, f64::max);
        println!("K = {}  delta = {:.3e}  max |gap| on [0, 1000] = {gap:.3e}", kp.k(), kp.delta(), );
        kp = kp.halved()?;
    }
    Ok(())
}
