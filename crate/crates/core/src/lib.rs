//! Hitting laws of planar Brownian motion on the slit `(-inf, 0] x {0}`.
//!
//! Closed-form kernels, Green functions and conditioned densities live next
//! to the quadrature and Monte Carlo machinery used to check them.

// `!(x > 0.0)` is how argument checks reject NaN; quadrature nodes keep their published digits
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod conditioned;
pub mod green;
pub mod hyperbolic;
pub mod mc;
pub mod point;
pub mod quadrature;
pub mod slit;
pub mod specfun;
pub mod stable;

pub use error::{Error, Result};
pub use point::{Convention, HitSample, Point};
pub use quadrature::QuadSpec;
