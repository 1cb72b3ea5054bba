use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::wcheck;
use super::transforms::{single_case, SharpMethod, SharpSource, SharpTransform, TransformOptions};
use super::types::{ArchCharacter, ArchRep, ContourSpec, TestFunction};
use crate::error::{Error, Result};
use crate::specfun::QuadratureSpec;

/// Both sides of the one-variable identity V̌(r) = π·h^♯(π_{r, even}, triv) for H(z) = φ(z)|z|^{½}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixCheck {
    /// V̌(r) from the single-integral closed form.
    pub lhs: Complex64,
    /// π·h^♯ through the vertical contour.
    pub rhs: Complex64,
    /// π·h^♯ through the residue kernel (None for supports in (−∞, 0)).
    pub rhs_residue: Option<Complex64>,
    /// |lhs − rhs| / max(|lhs|, |rhs|), 0 when both vanish.
    pub residual: f64,
    /// Tail estimate of the contour side, scaled by π.
    pub tail_estimate: f64,
}

pub fn appendix_check(phi: &TestFunction, r: f64, spec: &QuadratureSpec) -> Result<AppendixCheck> {
    appendix_check_with(phi, r, spec, &ContourSpec::default().with_cutoff(600.0))
}

pub fn appendix_check_with(
    phi: &TestFunction,
    r: f64,
    spec: &QuadratureSpec,
    contour: &ContourSpec,
) -> Result<AppendixCheck> {
    if phi.is_zero() {
        return Ok(AppendixCheck {
            lhs: Complex64::new(0.0, 0.0),
            rhs: Complex64::new(0.0, 0.0),
            rhs_residue: Some(Complex64::new(0.0, 0.0)),
            residual: 0.0,
            tail_estimate: 0.0,
        });
    }
    let case = single_case(&phi.support()).ok_or(Error::MixedSupport)?;
    let triv = ArchRep::principal(0.0, 0);
    let chi0 = ArchCharacter::trivial();
    let pi = ArchRep::principal(r, 0);
    let pi_factor = std::f64::consts::PI;
    let lhs = wcheck(phi, r, spec)?;
    let contour_side = SharpTransform::new(
        SharpSource::Phi(phi),
        &chi0,
        &triv,
        &triv,
        contour,
        SharpMethod::Contour,
        TransformOptions::default(),
    )?
    .eval(&pi)?;
    let rhs = contour_side.value * pi_factor;
    let rhs_residue = if case == 2 {
        None
    } else {
        let v = SharpTransform::new(
            SharpSource::Phi(phi),
            &chi0,
            &triv,
            &triv,
            contour,
            SharpMethod::Residue,
            TransformOptions::default(),
        )?
        .eval(&pi)?;
        Some(v.value * pi_factor)
    };
    let scale = lhs.norm().max(rhs.norm());
    let residual = if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    };
    Ok(AppendixCheck {
        lhs,
        rhs,
        rhs_residue,
        residual,
        tail_estimate: contour_side.tail_estimate * pi_factor,
    })
}
