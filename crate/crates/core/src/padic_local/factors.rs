use num_complex::Complex64;

use super::laurent::{LaurentPoly, LaurentRational};
use super::types::{PadicCharacter, PadicRep};
use crate::error::Result;
use crate::specfun::gauss_sum;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// Additive character ψ_p(x) = e(−{x}_p), conductor ℤ_p; self-dual Haar measure.

/// L(s, χ) as a rational function of X = p^{−s}.
pub fn tate_l(chi: &PadicCharacter) -> LaurentRational {
    if chi.is_unramified() {
        LaurentRational::new(
            chi.p,
            LaurentPoly::constant(c(1.0, 0.0)),
            vec![chi.at_p().inv()],
        )
        .expect("χ(p) ≠ 0")
    } else {
        LaurentRational::constant(chi.p, c(1.0, 0.0))
    }
}

/// ε(s, χ, ψ_p) = χ_unit(−1)·τ(χ̄_unit)·χ(p)^m·X^m for conductor m (1 if unramified).
pub fn epsilon_factor(chi: &PadicCharacter) -> Result<LaurentRational> {
    let m = chi.conductor();
    if m == 0 {
        return Ok(LaurentRational::constant(chi.p, c(1.0, 0.0)));
    }
    let tau = gauss_sum(&chi.unit.conj())?;
    let coeff = chi.sign() * tau * chi.at_p().powi(m as i32);
    Ok(LaurentRational::from_poly(
        chi.p,
        LaurentPoly::monomial(coeff, m as i32),
    ))
}

/// ε(½, χ, ψ_p); of modulus 1 for unitary χ.
pub fn root_number(chi: &PadicCharacter) -> Result<Complex64> {
    let eps = epsilon_factor(chi)?;
    Ok(eps.eval(c((chi.p as f64).powf(-0.5), 0.0)))
}

/// γ(s, χ, ψ_p) = ε(s, χ, ψ_p)·L(1 − s, χ^{−1})/L(s, χ) in X = p^{−s}.
pub fn tate_gamma(chi: &PadicCharacter) -> Result<LaurentRational> {
    let p = chi.p;
    if chi.is_unramified() {
        // (1 − cX)/(1 − c^{−1}p^{−1}X^{−1}) = −cpX(1 − cX)/(1 − cpX)
        let a = chi.at_p();
        let pf = p as f64;
        let num = LaurentPoly {
            low: 1,
            coeffs: vec![-a * pf, a * a * pf],
        };
        return LaurentRational::new(p, num, vec![(a * pf).inv()]);
    }
    epsilon_factor(chi)
}

/// L(s, π ⊗ χ) = L(s, χμ)L(s, χμ^{−1}) with μ(p) = α.
pub fn gl2_l(pi: &PadicRep, chi: &PadicCharacter) -> LaurentRational {
    tate_l(&chi.scale_at_p(pi.satake)).mul(&tate_l(&chi.scale_at_p(pi.satake.inv())))
}

/// γ(s, π ⊗ χ, ψ_p) = γ(s, χμ)γ(s, χμ^{−1}).
pub fn gl2_gamma(pi: &PadicRep, chi: &PadicCharacter) -> Result<LaurentRational> {
    Ok(tate_gamma(&chi.scale_at_p(pi.satake))?.mul(&tate_gamma(&chi.scale_at_p(pi.satake.inv()))?))
}
