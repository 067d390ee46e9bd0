pub mod arith;
pub mod cli;
pub mod empirical;
pub mod error;
pub mod oracle;
pub mod special;
pub mod sum;
pub mod theory;
pub mod zeros;

pub use error::{Error, Result};
