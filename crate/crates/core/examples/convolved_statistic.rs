//! The statistic `Σ r((γ−γ'−h) log T/2π) w(γ−γ'−h)` for the triangle kernel,
//! whose transform is the Fejér kernel.

use zeta_paircorr::empirical::{convolved_statistic, TriangleKernel, ZeroKernel};
use zeta_paircorr::zeros::compute_zeros;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let zeros = compute_zeros(5000)?;
    let t = zeros.t_max();
    for h in [0.0, 0.5, 1.0, 3.0] {
        let v = convolved_statistic(&zeros, t, h, &TriangleKernel)?;
        println!("h = {h}: triangle {v:.6}");
    }
    println!("zero kernel: {}", convolved_statistic(&zeros, t, 0.0, &ZeroKernel)?);
    Ok(())
}
