//! The hypergeometric kernel 𝒦(t, y), the residue kernel, and the
//! single-integral transforms built from them.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::types::TestFunction;
use crate::error::{Error, Result};
use crate::specfun::quad::{integrate, Domain, QuadratureSpec};
use crate::specfun::{extended, hyp2f1, log_gamma, Precision};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this |t| the ± sum is formed from an interpolant of the odd part.
const SMALL_T: f64 = 1e-3;

/// Σ_± (1 ± i/sinh(πt)) f(±t), with the removable singularity at t = 0
/// handled by interpolating (f(t) − f(−t))/(2 sinh πt) in t².
pub(crate) fn combine_pm<F>(f: F, t: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if t.norm() >= SMALL_T {
        let fp = f(t)?;
        let fm = f(-t)?;
        return Ok(fp + fm + I * (fp - fm) / (t * PI).sinh());
    }
    let even = if t == c(0.0, 0.0) {
        f(t)? * 2.0
    } else {
        f(t)? + f(-t)?
    };
    // q(τ) = (f(τ) − f(−τ)) / (2 sinh πτ) is even and analytic; cubic in τ².
    let mut xs = [0.0; 4];
    let mut qs = [c(0.0, 0.0); 4];
    for j in 0..4 {
        let tj = 0.004 * (j + 1) as f64;
        let tc = c(tj, 0.0);
        xs[j] = tj * tj;
        qs[j] = (f(tc)? - f(-tc)?) / (2.0 * (PI * tj).sinh());
    }
    let x = t * t;
    let mut q = c(0.0, 0.0);
    for j in 0..4 {
        let mut l = c(1.0, 0.0);
        for m in 0..4 {
            if m != j {
                l *= (x - xs[m]) / (xs[j] - xs[m]);
            }
        }
        q += qs[j] * l;
    }
    Ok(even + I * q * 2.0)
}

/// Γ(½ + a)² / Γ(1 + 2a).
fn gamma_block(a: Complex64) -> Result<Complex64> {
    Ok((log_gamma(c(0.5, 0.0) + a)? * 2.0 - log_gamma(c(1.0, 0.0) + a * 2.0)?).exp())
}

fn kernel_term(t: Complex64, y: f64) -> Result<Complex64> {
    let a = I * t;
    let p = c(0.5, 0.0) + a;
    let f = hyp2f1(p, p, c(1.0, 0.0) + a * 2.0, -1.0 / y)?;
    Ok((-p * y.ln()).exp() * gamma_block(a)? * f)
}

/// 𝒦(t, y) = ½ Σ_± (1 ± i/sinh πt) y^{−½∓it} Γ(½±it)²/Γ(1±2it) F(½±it, ½±it; 1±2it; −1/y).
#[allow(non_snake_case)]
pub fn kernel_K(t: Complex64, y: f64) -> Result<Complex64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Invalid(format!("kernel_K requires y > 0, got {y}")));
    }
    if t.im.abs() >= 0.5 {
        return Err(Error::Invalid(format!(
            "kernel_K requires |Im t| < 1/2, got {t}"
        )));
    }
    Ok(combine_pm(|s| kernel_term(s, y), t)? * 0.5)
}

/// 𝒦(t, y) at the requested working precision (extended precision needs real t).
#[allow(non_snake_case)]
pub fn kernel_K_with(t: Complex64, y: f64, precision: Precision) -> Result<Complex64> {
    match precision {
        Precision::Double => kernel_K(t, y),
        Precision::Extended => {
            if t.im != 0.0 {
                return Err(Error::Invalid(
                    "extended-precision kernel requires real t".into(),
                ));
            }
            if t.re.abs() < SMALL_T {
                return kernel_K(t, y);
            }
            extended::kernel_k(t.re, y)
        }
    }
}

fn residue_term(r: Complex64, x: f64) -> Result<Complex64> {
    let a = I * r;
    let p = c(0.5, 0.0) + a;
    let f = hyp2f1(p, p, c(1.0, 0.0) + a * 2.0, x)?;
    Ok((-(c(0.5, 0.0) - a) * x.abs().ln()).exp() * gamma_block(a)? * f)
}

/// 2 Σ_± |x|^{−½±ir} (1 ± i/sinh πr) Γ(½±ir)²/Γ(1±2ir) F(½±ir, ½±ir; 1±2ir; x),
/// the closed form of the shifted contour integral, for x < 1, x ≠ 0.
pub fn residue_kernel(r: f64, x: f64) -> Result<Complex64> {
    if !(x < 1.0) || x == 0.0 || !x.is_finite() {
        return Err(Error::Invalid(format!(
            "residue_kernel requires x < 1, x ≠ 0, got {x}"
        )));
    }
    Ok(combine_pm(|s| residue_term(s, x), c(r, 0.0))? * 2.0)
}

/// Integrate `f` over each support interval of `phi`, split at the atoms'
/// breakpoints and at the extra points supplied.
pub(crate) fn integrate_over_support<F>(
    phi: &TestFunction,
    extra: &[f64],
    f: F,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let failure = std::cell::RefCell::new(None);
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            c(0.0, 0.0)
        }
    };
    let mut acc = c(0.0, 0.0);
    for (lo, hi) in phi.support() {
        let mut pts = phi.breakpoints(lo, hi);
        for &e in extra {
            if e > lo && e < hi {
                pts.push(e);
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        for w in pts.windows(2) {
            let r = integrate(g, Domain::Finite(w[0], w[1]), spec);
            if !r.converged {
                return Err(Error::Invalid(format!(
                    "quadrature tolerance not met on [{}, {}] (error estimate {:.3e})",
                    w[0], w[1], r.error
                )));
            }
            acc += r.value;
        }
    }
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Ṽ(t) = ∫_0^∞ 𝒦(t, y) V(y) dy for V supported in (0, ∞).
pub fn motohashi_tilde(v: &TestFunction, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if v.support().iter().any(|&(lo, _)| lo < 0.0) {
        return Err(Error::Invalid(
            "motohashi_tilde needs V supported in (0, ∞)".into(),
        ));
    }
    integrate_over_support(v, &[], |y| Ok(kernel_K(c(t, 0.0), y)? * v.eval(y)), spec)
}

/// The value y(t) with σ₂(1 + 1/y)^{σ₁} = t, and 1/||t| − 1|.
fn happendix_point(t: f64) -> (f64, f64) {
    let a = t.abs();
    if a < 1.0 {
        (a / (1.0 - a), 1.0 / (1.0 - a))
    } else {
        (1.0 / (a - 1.0), 1.0 / (a - 1.0))
    }
}

/// V̌(t) = 2∫_0^∞ (∫_ℝ V(x) cos(x log((y+1)/y)) dx) 𝒦(t, y) dy/√(y(1+y)) for
/// V(x) = ∫ φ(z)|z|^{½−ix} d^×z. The inner integral is evaluated in closed
/// form, π Σ_{σ₁,σ₂} (1 + 1/y)^{σ₁/2} φ(σ₂(1 + 1/y)^{σ₁}), and the outer one is
/// carried over to the variable t = σ₂(1 + 1/y)^{σ₁}.
pub fn motohashi_check(phi: &TestFunction, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if phi.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let val = integrate_over_support(
        phi,
        &[-1.0, 1.0],
        |x| {
            let f = phi.eval(x);
            if f == 0.0 {
                return Ok(c(0.0, 0.0));
            }
            let (y, jac) = happendix_point(x);
            Ok(kernel_K(c(t, 0.0), y)? * (f * jac))
        },
        spec,
    )?;
    Ok(val * (2.0 * PI))
}

/// V̌(t) for an even spectral weight V given pointwise, with the inner
/// integral computed numerically over |x| ≤ x_cutoff.
pub fn motohashi_check_direct<V: Fn(f64) -> f64>(
    v: V,
    x_cutoff: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let inner = |y: f64| -> f64 {
        let xi = (1.0 + 1.0 / y).ln();
        // even V: ∫_ℝ V(x) cos(xξ) dx = 2∫_0^X V(x) cos(xξ) dx
        let panels = ((x_cutoff * xi / 2.0).ceil() as usize).clamp(8, 4000);
        let rule = crate::specfun::quad::CompositeRule::new(0.0, x_cutoff, panels, 16);
        2.0 * rule.integrate(|x| c(v(x) * (x * xi).cos(), 0.0)).re
    };
    let failure = std::cell::RefCell::new(None);
    let f = |y: f64| {
        if y <= 0.0 || !y.is_finite() {
            return c(0.0, 0.0);
        }
        match kernel_K(c(t, 0.0), y) {
            Ok(k) => k * (inner(y) / (y * (1.0 + y)).sqrt()),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                c(0.0, 0.0)
            }
        }
    };
    let r = integrate(
        f,
        Domain::UpperRay(0.0),
        &QuadratureSpec {
            scheme: crate::specfun::Scheme::DoubleExponential,
            ..*spec
        },
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r.value * 2.0)
}

/// The single-integral closed form
/// π Σ_± ∫ φ(t) |1/|t| − 1|^{±ir} Γ(½±ir)²/Γ(1±2ir) F(½±ir, ½±ir; 1±2ir; 1 − 1/|t|)
///   (1 ± i/sinh πr) dt / √|t(|t| − 1)|.
pub fn wcheck(phi: &TestFunction, r: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if phi.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let term = |s: Complex64, t: f64| -> Result<Complex64> {
        let a = I * s;
        let p = c(0.5, 0.0) + a;
        let at = t.abs();
        let z = 1.0 - 1.0 / at;
        let f = hyp2f1(p, p, c(1.0, 0.0) + a * 2.0, z)?;
        Ok((a * (1.0 / at - 1.0).abs().ln()).exp() * gamma_block(a)? * f)
    };
    let val = integrate_over_support(
        phi,
        &[-1.0, 1.0],
        |t| {
            let f = phi.eval(t);
            if f == 0.0 {
                return Ok(c(0.0, 0.0));
            }
            let at = t.abs();
            let k = combine_pm(|s| term(s, t), c(r, 0.0))?;
            Ok(k * (f / (at * (at - 1.0).abs()).sqrt()))
        },
        spec,
    )?;
    Ok(val * PI)
}

/// h^♯ through the residue kernel: ½ ∫ φ(y) RK(r, 1 − |y|) dy with φ(y) = H(y)|y|^{−½}.
pub(crate) fn residue_sharp<H: Fn(f64) -> f64>(
    phi_support: &TestFunction,
    phi: H,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let val = integrate_over_support(
        phi_support,
        &[-1.0, 1.0],
        |y| {
            let f = phi(y);
            if f == 0.0 {
                return Ok(c(0.0, 0.0));
            }
            Ok(residue_kernel(r, 1.0 - y.abs())? * f)
        },
        spec,
    )?;
    Ok(val * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_t_path_matches_reference() {
        // mpmath at 60 digits, y = 0.7, on both sides of SMALL_T and at 0
        let y = 0.7;
        for (t, want) in [
            (1.01e-3, 5.710_517_321_055_762),
            (0.99e-3, 5.710_518_616_394_34),
            (0.5e-3, 5.710_542_259_633_884),
            (0.0, 5.710_550_355_556_137),
        ] {
            let got = kernel_K(c(t, 0.0), y).unwrap();
            assert!(
                (got - want).norm() < 1e-10 * want,
                "t = {t}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn kernel_is_real_for_real_t() {
        let k = kernel_K(c(2.3, 0.0), 0.7).unwrap();
        assert!(k.im.abs() < 1e-14 * k.norm().max(1.0));
    }
}
