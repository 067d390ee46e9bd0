//! The correction functions: `ε(y)` jumps by `𝔖(k)` at each even `k`,
//! and `f(y) = ∫_0^y (ε(u) − B/2) du`.

use std::sync::Arc;

use zeta_paircorr::arith::{CorrectionState, SingularSeriesTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let st = CorrectionState::new(Arc::new(SingularSeriesTable::new(100_000, 1_000_000)));
    println!("B = {:.12}", st.b());
    println!("{:>8} {:>14} {:>14}", "y", "eps(y)", "f(y)");
    for y in [0.5, 1.0, 1.999, 2.0, 3.5, 10.0, 100.0, 1e3, 1e4, 99_999.5] {
        println!("{y:>8} {:>14.8} {:>14.8}", st.epsilon(y)?, st.f(y)?);
    }
    // centered difference of f recovers ε − B/2 off the integers
    let (y, d) = (37.3, 1e-5);
    let fd = (st.f(y + d)? - st.f(y - d)?) / (2.0 * d);
    println!("\nf'(37.3) = {fd:.8}, eps - B/2 = {:.8}", st.epsilon(y)? - st.b() / 2.0);
    println!("sup |eps| on the table: {:.4}", st.epsilon_sup());
    Ok(())
}
