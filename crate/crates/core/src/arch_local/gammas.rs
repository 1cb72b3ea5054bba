//! Archimedean γ-factors.
//!
//! `local_gamma` is the Γ_ℝ-normalised γ(s, π ⊗ |·|^a sgn^m) with
//! ε(s, sgn) = i; `gamma_quotient_G` is the bare Γ-quotient G(π; χ).

use num_complex::Complex64;
use std::f64::consts::PI;

use super::types::{ArchCharacter, ArchRep, RepVariant};
use crate::error::{Error, Result};
use crate::specfun::{log_gamma, log_gamma_r};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// i^k for integer k.
pub(crate) fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

fn lg(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map_err(|_| Error::Pole {
        function: "gamma",
        arg: format!("{z}"),
    })
}

fn lgr(z: Complex64) -> Result<Complex64> {
    log_gamma_r(z).map_err(|_| Error::Pole {
        function: "gamma_R",
        arg: format!("{z}"),
    })
}

/// Whether the discrete-series γ-factor keeps its sgn-twisted component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteParity {
    /// D_k ⊗ sgn ≅ D_k, so both parities contribute.
    #[default]
    Both,
    /// Drop the δ = 1 component (the 𝟏_{δ=0} factor of G).
    EvenOnly,
}

/// log γ(s, π ⊗ |·|^a sgn^m) and its sign/phase factor, returned as a single
/// complex logarithm.
pub fn log_local_gamma(
    s: Complex64,
    pi: &ArchRep,
    a: Complex64,
    m: u8,
    discrete: DiscreteParity,
) -> Result<Option<Complex64>> {
    let z = s + a;
    match pi.variant {
        RepVariant::Principal { r, eta } => {
            let mp = (eta + m) & 1;
            let ir = c(0.0, 1.0) * r;
            let shift = c(mp as f64, 0.0);
            let num = lgr(c(1.0, 0.0) - z - ir + shift)? + lgr(c(1.0, 0.0) - z + ir + shift)?;
            let den = lgr(z + ir + shift)? + lgr(z - ir + shift)?;
            let sign = if mp == 1 { c(0.0, PI) } else { c(0.0, 0.0) };
            Ok(Some(num - den + sign))
        }
        RepVariant::Discrete { k } => {
            if discrete == DiscreteParity::EvenOnly && (m & 1) == 1 {
                return Ok(None);
            }
            let kf = k as f64;
            let phase = c(0.0, PI / 2.0 * kf);
            let pow = (z * 2.0 - 1.0) * (2.0 * PI).ln();
            let ratio = lg(c((kf + 1.0) / 2.0, 0.0) - z)? - lg(c((kf - 1.0) / 2.0, 0.0) + z)?;
            Ok(Some(phase + pow + ratio))
        }
    }
}

/// γ(s, π ⊗ |·|^a sgn^m).
pub fn local_gamma(
    s: Complex64,
    pi: &ArchRep,
    a: Complex64,
    m: u8,
    discrete: DiscreteParity,
) -> Result<Complex64> {
    Ok(match log_local_gamma(s, pi, a, m, discrete)? {
        Some(l) => l.exp(),
        None => c(0.0, 0.0),
    })
}

/// G(π; χ) for χ = |·|^e sgn^δ, as the bare Γ-quotient:
/// Π_± Γ((½ ± ir − e + ρ)/2) / Γ((½ ± ir + e + ρ)/2) for principal series
/// (ρ = 0 iff η = δ), and 𝟏_{δ=0} i^k Γ(k/2 − e)/Γ(k/2 + e) for discrete
/// series.
#[allow(non_snake_case)]
pub fn gamma_quotient_G(pi: &ArchRep, chi: &ArchCharacter) -> Result<Complex64> {
    let e = chi.tau;
    match pi.variant {
        RepVariant::Principal { r, eta } => {
            let rho = if eta == chi.delta { 0.0 } else { 1.0 };
            let ir = c(0.0, 1.0) * r;
            let mut acc = c(0.0, 0.0);
            for sg in [1.0, -1.0] {
                let base = c(0.5 + rho, 0.0) + ir * sg;
                acc += lg((base - e) * 0.5)? - lg((base + e) * 0.5)?;
            }
            Ok(acc.exp())
        }
        RepVariant::Discrete { k } => {
            if chi.delta == 1 {
                return Ok(c(0.0, 0.0));
            }
            let h = c(k as f64 / 2.0, 0.0);
            Ok(i_pow(k as i64) * (lg(h - e)? - lg(h + e)?).exp())
        }
    }
}

/// γ(½, π ⊗ χ) for χ = |·|^τ sgn^δ.
pub fn gamma_half(
    pi: &ArchRep,
    tau: Complex64,
    delta: u8,
    discrete: DiscreteParity,
) -> Result<Complex64> {
    local_gamma(c(0.5, 0.0), pi, tau, delta, discrete)
}

/// The conjugate of the central character of π₂'s inducing data,
/// χ̄₂ = sgn^{η₂} |·|^{−i r̄₂}. Only principal series π₂ are admissible.
pub fn chi2_bar(pi2: &ArchRep) -> Result<ArchCharacter> {
    match pi2.variant {
        RepVariant::Principal { r, eta } => Ok(ArchCharacter::new(c(0.0, -1.0) * r.conj(), eta)),
        RepVariant::Discrete { .. } => Err(Error::Invalid(
            "π₂ must be a principal series representation".into(),
        )),
    }
}

/// log Γ_ℝ-quotient used for γ(1, π₁ ⊗ ξ ⊗ χ^{−1}), ξ a character, χ = |·|^τ sgn^δ.
pub fn gamma_one(
    pi1: &ArchRep,
    xi: &ArchCharacter,
    tau: Complex64,
    delta: u8,
    discrete: DiscreteParity,
) -> Result<Complex64> {
    local_gamma(
        c(1.0, 0.0),
        pi1,
        xi.tau - tau,
        (xi.delta + delta) & 1,
        discrete,
    )
}
