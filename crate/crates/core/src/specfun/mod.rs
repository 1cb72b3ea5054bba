//! Complex special functions and quadrature primitives.

mod bessel;
pub mod dd;
pub mod extended;
mod gamma;
mod gauss;
mod hyp;
pub mod quad;

pub use bessel::bessel_k;
pub use gamma::{digamma, gamma, gamma_r, gamma_ratio, log_gamma, log_gamma_r};
pub use gauss::{gauss_sum, is_prime, primitive_root, UnitCharacter};
pub use hyp::{hyp2f1, hyp2f1_one_minus_z, hyp2f1_path, hyp2f1_pfaff, hyp2f1_series, HypPath};
pub use quad::{
    integrate, integrate_real, CompositeRule, Domain, QuadResult, QuadratureSpec, Scheme,
};

/// Working precision selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Double,
    /// Double-double arithmetic (about 32 significant digits).
    Extended,
}
