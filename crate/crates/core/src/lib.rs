//! Local spectral transforms on PGL(2).
//!
//! * [`specfun`]: complex Γ, ₂F₁, K_ν, Gauss sums, quadrature.
//! * [`arch_local`]: the hypergeometric kernel 𝒦(t, y), gamma quotients, the
//!   forward transforms h ↦ h^∨, h^♯ over ℝ and their Plancherel inversion.
//! * [`padic_local`]: L, ε, γ factors over ℚ_p as rational functions of
//!   X = p^{−s}, p-adic Mellin transforms and residue evaluation of the
//!   forward transforms.
//! * [`global_demo`]: shifted convolution sums, spectral data ingestion and
//!   truncated spectral sides.
//! * [`cli`]: job specifications and table output.

// `!(x > 0.0)` and friends are NaN-rejecting checks
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arch_local;
pub mod cli;
pub mod error;
pub mod global_demo;
pub mod padic_local;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
