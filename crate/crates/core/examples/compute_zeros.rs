//! Compute the first N zeta zeros, check them against the counting function
//! and optionally write them out.
//!
//!     cargo run --release --example compute_zeros -- 10000 zeros.txt

use std::path::Path;
use std::time::Instant;

use zeta_paircorr::zeros::compute_zeros;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let out = args.next();

    let start = Instant::now();
    let table = compute_zeros(n)?;
    println!("computed {} zeros in {:.2?}", table.count(), start.elapsed());
    if let (Some(first), Some(last)) = (table.ordinates().first(), table.ordinates().last()) {
        println!("gamma_1 = {first:.12}");
        println!("gamma_{n} = {last:.12}");
    }
    println!("{}", table.validate_count().to_json()?);

    if let Some(path) = out {
        table.export_to(Path::new(&path))?;
        println!("wrote {path}");
    }
    Ok(())
}
