//! Periodic metric graphs, their geodesic flows and entropy estimators.
//!
//! The crate builds Γ-periodic metric graphs from voltage assignments over
//! finite base graphs, codes their geodesics by subshifts of finite type and
//! estimates growth rates (critical exponents, covering entropies, Bowen
//! entropy of the quotient flow) with exact counts where possible.

pub mod error;
pub mod flow;
pub mod hyperbolic;
pub mod lab;
pub mod space;
pub mod symbolic;

pub use error::{Error, Result};
