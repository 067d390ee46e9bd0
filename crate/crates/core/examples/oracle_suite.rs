//! Runs every identity check and prints one line per check; pass `--json`
//! for the full reports.

use std::sync::Arc;

use zeta_paircorr::arith::{CorrectionState, SingularSeriesTable};
use zeta_paircorr::oracle::{CheckId, Oracle};
use zeta_paircorr::zeros::compute_zeros;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let json = std::env::args().any(|a| a == "--json");
    let st = CorrectionState::new(Arc::new(SingularSeriesTable::new(1_000_000, 10_000_000)));
    let oracle = Oracle::new(Arc::new(st));
    let zeros = compute_zeros(2000)?;
    for r in oracle.run(&CheckId::ALL, Some(&zeros)) {
        let r = r?;
        if json {
            println!("{}", r.to_json());
            continue;
        }
        println!(
            "{:<5} {:<30} {:>4} points  max diff {:.2e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.check_id,
            r.points.len(),
            r.max_diff()
        );
        for (k, v) in &r.summary {
            println!("        {k} = {v:.4}");
        }
    }
    Ok(())
}
