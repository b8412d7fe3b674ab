//! Operators on the truncated Fock space: quantization, the Mehler kernel,
//! the vacuum projection and the expansion of H^{−z}.

pub mod basis;
pub mod hz;
pub mod mehler;
pub mod quantize;

pub use basis::{ExactOp, FockBasis, FockOp};
pub use hz::{hz_coefficients, hz_terms};
pub use mehler::{mehler_symbol, vacuum_projection, PureGauss};
pub use quantize::{quantize_gauss, quantize_poly, quantize_poly_exact};
