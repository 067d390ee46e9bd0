//! Closed-form antiderivatives, sine/cosine integrals, smoothing kernels
//! and the quadrature engine used by the theory and oracle modules.

mod antiderivative;
mod kernel;
pub mod quad;
mod trig_integral;

pub use antiderivative::{exp_trig_antider, ExpTrigAntiderivative, ExpTrigKind};
pub use kernel::{fejer, re_psi_hat, sinc, KernelParams};
pub use quad::{quad, GaussLegendre, Integral, QuadOptions};
pub use trig_integral::{cosine_integral, sin_over_x_power_integral, sine_integral};

/// Euler's constant C₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
