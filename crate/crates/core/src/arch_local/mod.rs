//! Local transforms at the real place.

mod appendix;
mod gammas;
mod inversion;
mod kernel;
mod transforms;
mod types;

pub use appendix::{appendix_check, appendix_check_with, AppendixCheck};
pub use gammas::{
    chi2_bar, gamma_half, gamma_one, gamma_quotient_G, local_gamma, log_local_gamma, DiscreteParity,
};
pub use inversion::{
    invert_H, invert_H_with, invert_h, invert_h_with, plancherel_density, InversionOptions,
    Plancherel, PrincipalNode, SpectralGrid, PLANCHEREL,
};
pub use kernel::{
    kernel_K, kernel_K_with, motohashi_check, motohashi_check_direct, motohashi_tilde,
    residue_kernel, wcheck,
};
pub use transforms::{
    h_flat, h_sharp, h_vee, w_eta_chi, whittaker_spherical, H_of, H_of_with, H_support, MellinData,
    SharpMethod, SharpSource, SharpTransform, TransformOptions, VeeTransform,
};
pub use types::{
    ArchCharacter, ArchRep, Atom, BivariateWeight, ContourSpec, ContourValue, RepVariant, Shape,
    Side, TestFunction,
};
