//! Complex log-gamma, digamma and the archimedean factor Γ_ℝ.
//!
//! Stirling's series is used once the argument has been pushed to
//! `Re z ≥ 1, |z| ≥ 10` by the recurrence `Γ(z+1) = zΓ(z)`; the logs of the
//! shift factors are summed individually so the result stays on the
//! principal branch (continuous from the upper half plane on the cut).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k-1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// B_{2k} / (2k), k = 1..7.
const DIGAMMA_ASY: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn shift_count(z: Complex64) -> usize {
    let mut n = 0usize;
    let mut w = z;
    while w.re < 1.0 || w.norm() < 10.0 {
        w.re += 1.0;
        n += 1;
    }
    n
}

/// Principal branch of log Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "log_gamma",
            arg: format!("{z}"),
        });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Invalid(format!("log_gamma of non-finite {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

/// log Γ without the pole check; callers guarantee `z` is off the pole set.
pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    let n = shift_count(z);
    // real part from the running product, imaginary part from summed
    // arguments (keeps the principal branch)
    let mut prod = Complex64::new(1.0, 0.0);
    let mut log_mod = 0.0;
    let mut arg = 0.0;
    let mut w = z;
    for _ in 0..n {
        prod *= w;
        arg += w.arg();
        if prod.norm() > 1e100 {
            log_mod += prod.norm().ln();
            prod /= prod.norm();
        }
        w.re += 1.0;
    }
    let shift = Complex64::new(log_mod + prod.norm().ln(), arg);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift
}

/// Γ(z) = exp(log Γ(z)).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "digamma",
            arg: format!("{z}"),
        });
    }
    let n = shift_count(z);
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..n {
        shift += w.inv();
        w.re += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for c in DIGAMMA_ASY {
        series += p * c;
        p *= inv2;
    }
    Ok(w.ln() - inv * 0.5 - series - shift)
}

/// log Γ_ℝ(s) = -(s/2) log π + log Γ(s/2).
pub fn log_gamma_r(s: Complex64) -> Result<Complex64> {
    let half = s * 0.5;
    if is_nonpositive_integer(half) {
        return Err(Error::Pole {
            function: "gamma_R",
            arg: format!("{s}"),
        });
    }
    Ok(-half * PI.ln() + log_gamma_unchecked(half))
}

/// Γ_ℝ(s) = π^{-s/2} Γ(s/2).
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    Ok(log_gamma_r(s)?.exp())
}

/// Γ(a)/Γ(b) evaluated through log-gamma differences.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok((log_gamma(a)? - log_gamma(b)?).exp())
}
