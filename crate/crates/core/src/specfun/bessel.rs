//! Modified Bessel function K_ν(x) of complex order and positive argument.
//!
//! K_ν(x) = ½∫_ℝ e^{−x cosh u} cosh(νu) du. The integrand already decays
//! double-exponentially, so the trapezoidal rule on the real line converges
//! geometrically in 1/h; h is chosen from the width of the strip of
//! analyticity and the growth of cosh(νu) off the real axis.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// K_ν(x) for x > 0.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Invalid(format!("bessel_k requires x > 0, got {x}")));
    }
    if x > 700.0 {
        return Err(Error::Overflow(
            "bessel_k: e^{-x} below the representable range",
        ));
    }
    // K_ν = K_{−ν}: evaluate with a canonical sign so the symmetry is exact
    let nu = if nu.re < 0.0 || (nu.re == 0.0 && nu.im < 0.0) {
        -nu
    } else {
        nu
    };
    let d = PI / 4.0;
    let h = (PI * d / (41.0 + d * nu.im.abs())).min(0.1);
    let log_tiny = -745.0;
    let term = |u: f64| -> Complex64 {
        let e = -x * u.cosh();
        (Complex64::new(e, 0.0) + nu * u).exp() * 0.5
            + (Complex64::new(e, 0.0) - nu * u).exp() * 0.5
    };
    let mut sum = term(0.0) * 0.5;
    let mut comp = Complex64::new(0.0, 0.0);
    let mut k = 1usize;
    loop {
        let u = k as f64 * h;
        let bound = -x * u.cosh() + nu.re.abs() * u;
        if bound < log_tiny && u > 1.0 {
            break;
        }
        if bound > 700.0 {
            return Err(Error::Overflow(
                "bessel_k: cosh(νu) growth exceeds double range",
            ));
        }
        let y = term(u) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        k += 1;
    }
    Ok(sum * h)
}
