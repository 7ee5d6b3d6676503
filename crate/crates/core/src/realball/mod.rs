//! Midpoint-radius ("ball") arithmetic over arbitrary-precision dyadics.

mod ball;
mod constants;
mod dyadic;
mod elementary;

pub use ball::{decide, nearest_half_away, with_precision, Ball};
pub use constants::{constants, ConstantTable};
pub use dyadic::{Dyadic, Round};
pub use elementary::{ball_exp, ball_log, ball_log_abs};

/// Default cap on automatic precision doubling, as a multiple of the start.
pub const PRECISION_CAP_FACTOR: u64 = 16;
