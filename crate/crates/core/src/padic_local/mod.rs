//! Non-archimedean local factors and transforms for unramified principal
//! series of PGL₂(ℚ_p). Everything is a rational function of X = p^{−s};
//! contour integrals over |X| = p^{−σ} are sums of residues.

mod factors;
mod laurent;
mod transforms;
mod types;

pub use factors::{epsilon_factor, gl2_gamma, gl2_l, root_number, tate_gamma, tate_l};
pub use laurent::{LaurentPoly, LaurentRational};
pub use transforms::{
    h_sharp_padic, h_vee_padic, padic_mellin, unit_volume, ContourEval, H_padic, PadicOptions,
};
pub use types::{
    PadicCharacter, PadicElement, PadicRep, StepFunction, StepPiece, StepWeight,
    DEFAULT_CONDUCTOR_CAP,
};
