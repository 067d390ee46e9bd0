//! Sieved von Mangoldt sums against their smooth approximations.

use zeta_paircorr::arith::{prime_powers, von_mangoldt};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Lambda(1..=12): {:?}", (1..=12).map(von_mangoldt).collect::<Result<Vec<_>, _>>()?);
    let pp: Vec<(u64, f64)> = prime_powers(1_000_000).collect();
    for x in [1e2, 1e3, 1e4, 1e5, 1e6] {
        let psi: f64 = pp.iter().filter(|(n, _)| *n as f64 <= x).map(|p| p.1).sum();
        let m: f64 = pp.iter().filter(|(n, _)| *n as f64 <= x).map(|&(n, l)| l * l * n as f64).sum();
        let smooth = 0.5 * x * x * x.ln() - 0.25 * x * x;
        println!("x = {x:>8}: psi/x = {:.6}   sum L^2 n / smooth = {:.6}", psi / x, m / smooth);
    }
    Ok(())
}
