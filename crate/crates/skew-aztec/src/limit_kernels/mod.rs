//! Limiting kernels: the discrete tacnode kernel and its Θ determinants, the
//! Heaviside kernel, the Airy-like functions and the cusp-Airy kernel.

mod airy;
mod tacnode;

pub use airy::{airy_like, cusp_airy, cusp_limit_check, AiryConfig, CuspRow};
pub use tacnode::{
    convergence_main, heaviside, ConvergenceRow, DtacTerms, Tacnode, TacnodeParams, TacnodePoint, ThetaSign,
};
