//! Singular series values, the twin-prime constant and the partial-sum
//! envelope `|Σ_{k≤y} 𝔖(k) − y + ½ log y| ≤ C (log y)^{2/3}`.
//!
//!     cargo run --release --example singular_series

use zeta_paircorr::arith::{twin_prime_product, SingularSeriesTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = SingularSeriesTable::new(1_000_000, 10_000_000);
    let c2 = table.twin();
    println!("S(2) = {:.10}  (truncated {:.10}, certified tail {:.1e})", c2.value, c2.truncated, c2.tail_bound);
    let doubled = twin_prime_product(20_000_000);
    println!("S(2) with doubled prime bound = {:.10}", doubled.value);

    for d in [2, 4, 6, 10, 30, 210, 7] {
        println!("S({d}) = {:.8}", table.get(d)?);
    }
    println!("max S(k), k <= 1e6: {:.6}", table.max_value());

    let env = |y: f64| -> Result<f64, zeta_paircorr::Error> {
        Ok((table.partial_sum(y)? - y + 0.5 * y.ln()).abs() / y.ln().powf(2.0 / 3.0))
    };
    let c = env(100.0)?;
    println!("\n{:>10} {:>12} {:>8}", "y", "|dev|/(log y)^{2/3}", "ok");
    for e in 2..=6 {
        let y = 10f64.powi(e);
        let r = env(y)?;
        println!("{y:>10.0} {r:>12.6} {:>8}", r <= c);
    }
    Ok(())
}
