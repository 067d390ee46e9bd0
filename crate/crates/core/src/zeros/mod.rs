//! Zero ordinates of the Riemann zeta function: loading, computing, validating.

mod compute;
mod table;
pub mod zeta;

pub use compute::{compute_zeros, gram_point, ZERO_CAP};
pub use table::{load_zeros, CountReport, Provenance, ZeroTable};
