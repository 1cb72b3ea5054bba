//! Double-double versions of log Γ, ψ, ₂F₁ and the hypergeometric kernel,
//! used to produce reference values with about 30 correct digits.

use num_complex::Complex64;

use super::dd::{CDD, DD};
use super::hyp::{growth, near_integer};
use crate::error::{Error, Result};

const EULER_GAMMA: DD = DD {
    hi: 0.577_215_664_901_532_9,
    lo: -4.942_915_152_430_645e-18,
};

/// (numerator, denominator) of B_{2k}, k = 1..16.
const BERNOULLI: [(f64, f64); 16] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
    (8_615_841_276_005.0, 14322.0),
    (-7_709_321_041_217.0, 510.0),
];

fn c(x: f64) -> CDD {
    CDD::from_f64(x, 0.0)
}

fn is_nonpositive_integer(z: CDD) -> bool {
    let z = z.to_c64();
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn shifted(z: CDD) -> (CDD, usize) {
    let mut w = z;
    let mut n = 0;
    while w.re.hi < 1.0 || w.abs_f64() < 25.0 {
        w = w.add_real(DD::ONE);
        n += 1;
    }
    (w, n)
}

/// Principal branch of log Γ(z).
pub fn log_gamma(z: CDD) -> Result<CDD> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "log_gamma",
            arg: format!("{}", z.to_c64()),
        });
    }
    let (w, n) = shifted(z);
    let mut shift = CDD::default();
    let mut v = z;
    for _ in 0..n {
        shift = shift + v.ln();
        v = v.add_real(DD::ONE);
    }
    let half_ln_2pi = DD::PI.ldexp(1).ln().ldexp(-1);
    let lw = w.ln();
    let mut out = (w.add_real(DD::new(-0.5)) * lw - w).add_real(half_ln_2pi);
    let winv = w.inv();
    let w2 = winv * winv;
    let mut pw = winv;
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let kk = 2.0 * (k as f64 + 1.0);
        out = out + pw.scale(DD::ratio(num, den * kk * (kk - 1.0)));
        pw = pw * w2;
    }
    Ok(out - shift)
}

/// ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: CDD) -> Result<CDD> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "digamma",
            arg: format!("{}", z.to_c64()),
        });
    }
    let (w, n) = shifted(z);
    let mut shift = CDD::default();
    let mut v = z;
    for _ in 0..n {
        shift = shift + v.inv();
        v = v.add_real(DD::ONE);
    }
    let winv = w.inv();
    let w2 = winv * winv;
    let mut out = w.ln() - winv.scale(DD::new(0.5));
    let mut pw = w2;
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let kk = 2.0 * (k as f64 + 1.0);
        out = out - pw.scale(DD::ratio(num, den * kk));
        pw = pw * w2;
    }
    Ok(out - shift)
}

fn series(a: CDD, b: CDD, cc: CDD, z: DD) -> Result<CDD> {
    let mut sum = c(1.0);
    let mut term = c(1.0);
    let mut quiet = 0;
    for n in 0..400_000 {
        let nf = DD::new(n as f64);
        let ratio = (a.add_real(nf) * b.add_real(nf)) / (cc.add_real(nf).scale(nf + DD::ONE));
        term = (term * ratio).scale(z);
        sum = sum + term;
        if term.abs_f64() <= 1e-34 * sum.abs_f64() && ratio.abs_f64() * z.abs().hi < 1.0 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { z: z.to_f64() })
}

fn rgamma_log(z: CDD) -> Option<CDD> {
    if is_nonpositive_integer(z) {
        None
    } else {
        log_gamma(z).ok().map(|v| -v)
    }
}

/// c = a + b + m, m ≥ 0 integer, 0 < z < 1.
fn log_case(a: CDD, b: CDD, m: usize, z: DD) -> Result<CDD> {
    let x = DD::ONE - z;
    let mf = DD::new(m as f64);
    let cc = (a + b).add_real(mf);
    let lc = log_gamma(cc)?;
    let mut out = CDD::default();
    if m > 0 {
        if let (Some(ra), Some(rb)) = (rgamma_log(a.add_real(mf)), rgamma_log(b.add_real(mf))) {
            let pre = (lc + log_gamma(CDD::real(mf))? + ra + rb).exp();
            let mut acc = CDD::default();
            let mut term = c(1.0);
            for n in 0..m {
                acc = acc + term;
                let nf = DD::new(n as f64);
                let den = (nf + DD::ONE) * (DD::ONE - mf + nf);
                term = (term * a.add_real(nf) * b.add_real(nf)).scale(x / den);
            }
            out = out + pre * acc;
        }
    }
    let (ra, rb) = match (rgamma_log(a), rgamma_log(b)) {
        (Some(ra), Some(rb)) => (ra, rb),
        _ => return Ok(out),
    };
    let mut xm = DD::ONE;
    for _ in 0..m {
        xm = xm * x;
    }
    if m % 2 == 1 {
        xm = -xm;
    }
    let pre = (lc + ra + rb).exp().scale(xm);
    let lnx = x.ln();
    let mut psi_n1 = -EULER_GAMMA;
    let mut psi_nm1 = -EULER_GAMMA;
    let mut fact = DD::ONE;
    for k in 1..=m {
        psi_nm1 = psi_nm1 + DD::ONE / DD::new(k as f64);
        fact = fact * DD::new(k as f64);
    }
    let mut psi_a = digamma(a.add_real(mf))?;
    let mut psi_b = digamma(b.add_real(mf))?;
    let mut coef = CDD::real(DD::ONE / fact);
    let mut acc = CDD::default();
    let mut quiet = 0;
    let size = a.abs_f64() + b.abs_f64();
    for n in 0..400_000 {
        let nf = DD::new(n as f64);
        let bracket = (psi_a + psi_b).add_real(lnx - psi_n1 - psi_nm1);
        let term = coef * bracket;
        acc = acc + term;
        if term.abs_f64() <= 1e-34 * acc.abs_f64() && n as f64 > size {
            quiet += 1;
            if quiet >= 3 {
                return Ok(out - pre * acc);
            }
        } else {
            quiet = 0;
        }
        let am = a.add_real(mf + nf);
        let bm = b.add_real(mf + nf);
        coef = (coef * am * bm).scale(x / ((nf + DD::ONE) * (nf + mf + DD::ONE)));
        psi_n1 = psi_n1 + DD::ONE / (nf + DD::ONE);
        psi_nm1 = psi_nm1 + DD::ONE / (nf + mf + DD::ONE);
        psi_a = psi_a + am.inv();
        psi_b = psi_b + bm.inv();
    }
    Err(Error::NonConvergence { z: z.to_f64() })
}

fn one_minus_z(a: CDD, b: CDD, cc: CDD, z: DD) -> Result<CDD> {
    let m = cc - a - b;
    let mc = m.to_c64();
    let x = DD::ONE - z;
    if let Some(mi) = near_integer(mc) {
        if mi < 0 {
            let pre = (m.scale(x.ln())).exp();
            return Ok(pre * log_case(cc - a, cc - b, (-mi) as usize, z)?);
        }
        return log_case(a, b, mi as usize, z);
    }
    let lc = log_gamma(cc)?;
    let mut out = CDD::default();
    if let (Some(r1), Some(r2)) = (rgamma_log(cc - a), rgamma_log(cc - b)) {
        let pre = (lc + log_gamma(m)? + r1 + r2).exp();
        out = out + pre * series(a, b, (a + b - cc).add_real(DD::ONE), x)?;
    }
    if let (Some(r1), Some(r2)) = (rgamma_log(a), rgamma_log(b)) {
        let pre = (lc + log_gamma(-m)? + r1 + r2 + m.scale(x.ln())).exp();
        out = out + pre * series(cc - a, cc - b, m.add_real(DD::ONE), x)?;
    }
    Ok(out)
}

fn near_one(a: CDD, b: CDD, cc: CDD, w: DD) -> Result<CDD> {
    if w.hi.abs() <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(a, b, cc, w);
    }
    let (a64, b64, c64_) = (a.to_c64(), b.to_c64(), cc.to_c64());
    let (g_series, n_series) = growth(a64, b64, c64_, w.hi);
    let m = c64_ - a64 - b64;
    let g_conn = if let Some(k) = near_integer(m) {
        let mm = k.abs() as f64;
        growth(
            a64 + mm,
            b64 + mm,
            Complex64::new(1.0 + mm, 0.0),
            1.0 - w.hi,
        )
        .0
    } else {
        let g1 = growth(a64, b64, a64 + b64 - c64_ + 1.0, 1.0 - w.hi).0;
        let g2 = growth(c64_ - a64, c64_ - b64, m + 1.0, 1.0 - w.hi).0;
        g1.max(g2)
    };
    if n_series <= 40_000 && g_series <= g_conn + 2.0 {
        series(a, b, cc, w)
    } else {
        one_minus_z(a, b, cc, w)
    }
}

/// ₂F₁(a, b; c; z) for real z < 1.
pub fn hyp2f1(a: CDD, b: CDD, cc: CDD, z: DD) -> Result<CDD> {
    if is_nonpositive_integer(cc) {
        return Err(Error::Pole {
            function: "hyp2f1",
            arg: format!("c = {}", cc.to_c64()),
        });
    }
    if !z.hi.is_finite() || z.hi >= 1.0 {
        return Err(Error::NonConvergence { z: z.to_f64() });
    }
    if z.hi.abs() <= 0.5 {
        return series(a, b, cc, z);
    }
    if z.hi > 0.5 {
        return near_one(a, b, cc, z);
    }
    let w = z / (z - DD::ONE);
    let pre = (-a.scale((DD::ONE - z).ln())).exp();
    Ok(pre * near_one(a, cc - b, cc, w)?)
}

/// 𝒦(t, y) for real t ≠ 0 and y > 0.
pub fn kernel_k(t: f64, y: f64) -> Result<Complex64> {
    if t == 0.0 || y <= 0.0 {
        return Err(Error::Invalid(format!(
            "extended kernel needs t ≠ 0, y > 0 (t = {t}, y = {y})"
        )));
    }
    let td = DD::new(t);
    let z = -(DD::ONE / DD::new(y));
    let ly = DD::new(y).ln();
    let (pi_t, e) = {
        let x = DD::PI * td;
        (x, x.exp())
    };
    let _ = pi_t;
    let sinh = (e - DD::ONE / e).ldexp(-1);
    let mut out = CDD::default();
    for sgn in [1.0, -1.0] {
        let it = CDD::new(DD::ZERO, td.mul_f64(sgn));
        let a = it.add_real(DD::new(0.5));
        let cc = it.scale(DD::new(2.0)).add_real(DD::ONE);
        let pre = CDD::new(DD::ONE, DD::new(sgn) / sinh);
        let pw = (-a.scale(ly)).exp();
        let g = (log_gamma(a)?.scale(DD::new(2.0)) - log_gamma(cc)?).exp();
        out = out + pre * pw * g * hyp2f1(a, a, cc, z)?;
    }
    Ok(out.scale(DD::new(0.5)).to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_matches_reference() {
        // log Γ(3+4i) = −1.7566267846037841105… + 4.7426644380346579282…i
        let v = log_gamma(CDD::from_f64(3.0, 4.0)).unwrap();
        assert!((v.re - DD::new(-1.756_626_784_603_784_1)).abs().hi < 1e-15);
        let err = (v.re.to_f64() + 1.756_626_784_603_784_2).abs();
        assert!(err < 1e-16);
        assert!((v.im.to_f64() - 4.742_664_438_034_658).abs() < 1e-15);
        let half = log_gamma(CDD::from_f64(0.5, 0.0)).unwrap();
        let expect = DD::PI.ln().ldexp(-1);
        assert!((half.re - expect).abs().hi < 1e-30);
    }

    #[test]
    fn digamma_one() {
        let v = digamma(CDD::from_f64(1.0, 0.0)).unwrap();
        assert!((v.re + EULER_GAMMA).abs().hi < 1e-30);
    }

    #[test]
    fn kernel_matches_reference() {
        let k = kernel_k(1.0, 1.0).unwrap();
        assert!((k.re + 1.019_684_476_440_520_4).abs() < 1e-15);
        assert!(k.im.abs() < 1e-25);
    }
}
