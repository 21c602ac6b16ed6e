//! Radial reduction of the weighted seminorms, norms, quotients and operator
//! identities.

pub mod certificate;
pub mod operator;
pub mod g1;
mod pairs;
pub mod pointwise;
pub mod profile;
pub mod quotients;
pub mod seminorm;

pub use g1::g1_double_integral;
pub use certificate::{extremal_profile, optimality_certificate, OptimalityCertificate};
pub use operator::{power_law_operator_check, OperatorCheck};
pub use pointwise::{elementary_inequality_defect, picone_defect, picone_phi};
pub use profile::{geometric_grid, PowerLawDescriptor, RadialProfile};
pub use quotients::{ckn_quotient, ckn_quotient_bounded, ground_state_remainder, hardy_quotient};
pub use seminorm::{weighted_lp_norm, weighted_seminorm, weighted_seminorm_in_ball, QuotientValue};
