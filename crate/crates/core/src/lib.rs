//! Series solutions of inverse source problems for degenerate
//! time-fractional diffusion, with the special functions and numerical
//! fractional operators needed to check them.

pub mod error;
pub mod field;
pub mod fracops;
pub mod inverse1;
pub mod inverse2;
pub mod legendre;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
