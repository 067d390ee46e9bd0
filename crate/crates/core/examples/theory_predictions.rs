//! Predictions across the ranges of `x`, with their term breakdowns.
//! The full expansion (`T2`) needs the singular series table and takes a
//! few seconds at large `x`.

use std::sync::Arc;

use zeta_paircorr::arith::{CorrectionState, SingularSeriesTable};
use zeta_paircorr::theory::{
    conj2_density, conj3_density, thm1_prediction, thm2_prediction, thm3_prediction, thm4_prediction,
    Thm2Options,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t: f64 = 74_920.827_498_994_19;
    let h = 1.0;
    let st = CorrectionState::new(Arc::new(SingularSeriesTable::new(1_000_000, 10_000_000)));

    let x = t.powf(0.3);
    println!("{}", thm1_prediction(x, t, h)?.to_json());
    let x = t / t.ln().powi(3);
    println!("x = T/log^3 T: T3 {:.2}", thm3_prediction(x, t, h)?.total);
    println!("{}", thm2_prediction(&st, x, t, h, Thm2Options::default())?.to_json());

    // beyond T the full expansion collapses to the strong pair correlation term
    for x in [10.0 * t, t.powf(1.5)] {
        let full = thm2_prediction(&st, x, t, h, Thm2Options::default())?;
        let strong = thm4_prediction(x, t, h)?;
        println!("x = {x:.3e}: T2 {:.3}  T4 {:.3}", full.total, strong.total);
    }

    println!("\nband densities at h = 0: ");
    for a in [0.5, 1.0, 2.0] {
        println!("  alpha {a}: {:.6}  annulus [0, alpha]: {:.6}", conj2_density(a, t, 0.0)?, conj3_density(0.0, a, t)?);
    }
    Ok(())
}
