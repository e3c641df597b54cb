//! Skew-Aztec rectangle domino tilings.
//!
//! Geometry and tilability, exhaustive enumeration, Kasteleyn inverses, analytic
//! finite-n kernels, the discrete tacnode and cusp-Airy limit kernels, an MCMC
//! sampler, and serialization/rendering helpers.

pub mod cli_io;
pub mod error;
pub mod finite_kernels;
pub mod geometry;
pub mod kasteleyn;
pub mod limit_kernels;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod sampler;
pub mod tiling;

pub use error::{Error, Result};
