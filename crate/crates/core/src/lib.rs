//! Numerical toolkit for fractional Hardy and Caffarelli-Kohn-Nirenberg
//! inequalities of the Gagliardo seminorm with kernel `|x - y|^{-(N+ps)}`.

pub mod constants;
pub mod error;
pub mod exponents;
mod halfline;
pub mod kernel;
pub mod params;
pub mod quad;
pub mod radial;
pub mod verifier;

pub use error::{Error, Result};
pub use kernel::{angular_kernel, kernel_symmetry_defect, kernel_tail_moment, sphere_area};
pub use params::{ConstantResult, FracParams, QuadratureConfig, Weight};
pub use constants::{
    c3_constant, hardy_constant, lambda_derivative, lambda_folded, lambda_unfolded, mu_constant,
    truncation_h,
};
pub use exponents::{critical_exponent_qplus, gamma_roots, sobolev_exponents, ExponentSet, RootPair};
