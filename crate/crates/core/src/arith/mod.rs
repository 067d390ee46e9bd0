//! Number-theoretic primitives: von Mangoldt function, the Hardy–Littlewood
//! singular series, the correction functions ε and f, and the S/T
//! partial-sum functionals.

mod correction;
mod functional;
mod sieve;
mod singular;

pub use correction::{CorrectionState, LOG_TWO_PI};
pub use functional::{s_alpha_h, t_alpha_h, TailSum};
pub use sieve::{prime_powers, primes_up_to, smallest_prime_factors, von_mangoldt};
pub use singular::{
    twin_prime_product, SingularSeriesTable, TwinPrimeProduct, DEFAULT_K_MAX, DEFAULT_PRIME_BOUND,
};
