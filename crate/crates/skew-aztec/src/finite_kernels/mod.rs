//! Analytic finite-n kernels: transition symbols and their Fourier coefficients,
//! the LGV green kernel, Toeplitz identity checks and the rescaled pre-limit kernel.

mod green;
mod prelimit;
mod symbols;
mod toeplitz;

pub use green::{kgreen, GreenKernel};
pub use prelimit::{PreLimit, PreLimitTerms, ScaledFunctions, PRELIMIT_R_CAP};
pub use symbols::{ln_binomial, phi, phi_hat, phi_hat_exponents, SymbolParams};
pub use toeplitz::{
    blowup_check, bo_check, dphi_check, fourier_coefficients, toeplitz_det, toeplitz_det_from_coeffs,
    BlowupSide, IdentityResidual,
};
