//! Gauss hypergeometric function ₂F₁(a, b; c; z) for complex parameters and
//! real z < 1.
//!
//! Evaluation chain: the power series for |z| ≤ 1/2; the Pfaff map
//! z ↦ z/(z−1) for z < −1/2 (for z = 1 − x this is the map x ↦ 1/x,
//! F(a,b;c;1−x) = x^{−a} F(a,c−b;c;1−1/x)); the 1 − z connection formula
//! (including the logarithmic case c − a − b ∈ ℤ) for arguments close to 1.

use num_complex::Complex64;

use super::gamma::{digamma, log_gamma_unchecked};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Nearest integer when `z` is within rounding noise of one.
pub(crate) fn near_integer(z: Complex64) -> Option<i64> {
    let k = z.re.round();
    let tol = 1e-12 * (1.0 + z.norm());
    if (z.re - k).abs() <= tol && z.im.abs() <= tol {
        Some(k as i64)
    } else {
        None
    }
}

/// Which evaluation route `hyp2f1` takes for a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypPath {
    Series,
    Pfaff,
    OneMinusZ,
    PfaffOneMinusZ,
}

/// Kahan-compensated complex accumulator.
#[derive(Default, Clone, Copy)]
struct Acc {
    sum: Complex64,
    comp: Complex64,
}

impl Acc {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Direct power series Σ (a)_n (b)_n / ((c)_n n!) z^n.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "hyp2f1",
            arg: format!("c = {c}"),
        });
    }
    let terminating = nonpositive_integer(a) || nonpositive_integer(b);
    if !terminating && z.abs() >= 1.0 {
        return Err(Error::NonConvergence { z });
    }
    let mut acc = Acc::default();
    let mut term = c64(1.0);
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        acc.add(term);
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        if term == c64(0.0) {
            return Ok(acc.sum);
        }
        if term.norm() <= 1e-17 * acc.sum.norm() && ratio.norm() < 1.0 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc.sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { z })
}

/// Pfaff route: (1 − z)^{−a} F(a, c − b; c; z/(z − 1)).
pub fn hyp2f1_pfaff(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let w = z / (z - 1.0);
    let pre = (-a * (1.0 - z).ln()).exp();
    Ok(pre * near_one(a, c - b, c, w)?)
}

/// Log of the largest partial product of the series ratios, a proxy for the
/// number of digits lost to cancellation.
pub(crate) fn growth(a: Complex64, b: Complex64, c: Complex64, w: f64) -> (f64, usize) {
    let mut lg = 0.0f64;
    let mut best = 0.0f64;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let r = ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0))).norm() * w.abs();
        if r < 1.0 && nf > a.norm() + b.norm() {
            let need = if w != 0.0 {
                (40.0 / -w.abs().ln()).ceil() as usize
            } else {
                0
            };
            return (best, n + need);
        }
        lg += r.max(1e-300).ln();
        best = best.max(lg);
        n += 1;
        if n > MAX_TERMS {
            return (best, usize::MAX);
        }
    }
}

/// F(a, b; c; w) for w ∈ [0, 1): direct series or the 1 − w connection,
/// whichever is expected to lose fewer digits.
fn near_one(a: Complex64, b: Complex64, c: Complex64, w: f64) -> Result<Complex64> {
    if w.abs() <= 0.5 || nonpositive_integer(a) || nonpositive_integer(b) {
        return hyp2f1_series(a, b, c, w);
    }
    let (g_series, n_series) = growth(a, b, c, w);
    let m = c - a - b;
    let (g_conn, _) = if let Some(k) = near_integer(m) {
        let mm = k.abs() as f64;
        growth(a + mm, b + mm, c64(1.0 + mm), 1.0 - w)
    } else {
        let g1 = growth(a, b, a + b - c + 1.0, 1.0 - w).0;
        let g2 = growth(c - a, c - b, c - a - b + 1.0, 1.0 - w).0;
        (g1.max(g2), 0)
    };
    if n_series <= 20_000 && g_series <= g_conn + 2.0 {
        hyp2f1_series(a, b, c, w)
    } else {
        hyp2f1_one_minus_z(a, b, c, w)
    }
}

fn rgamma_log(z: Complex64) -> Option<Complex64> {
    // log(1/Γ(z)); None when 1/Γ(z) = 0
    if nonpositive_integer(z) {
        None
    } else {
        Some(-log_gamma_unchecked(z))
    }
}

/// 1 − z connection formula, valid for 0 < z < 1.
pub fn hyp2f1_one_minus_z(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "hyp2f1",
            arg: format!("c = {c}"),
        });
    }
    if !(0.0 < z && z < 1.0) {
        return Err(Error::NonConvergence { z });
    }
    let m = c - a - b;
    let x = 1.0 - z;
    if let Some(mi) = near_integer(m) {
        if mi < 0 {
            // Euler: F(a,b;c;z) = (1−z)^{c−a−b} F(c−a, c−b; c; z)
            let pre = (m * x.ln()).exp();
            return Ok(pre * log_case(c - a, c - b, (-mi) as usize, z)?);
        }
        return log_case(a, b, mi as usize, z);
    }
    let lc = log_gamma_unchecked(c);
    let mut out = Complex64::new(0.0, 0.0);
    if let (Some(r1), Some(r2)) = (rgamma_log(c - a), rgamma_log(c - b)) {
        let pre = (lc + log_gamma_unchecked(m) + r1 + r2).exp();
        out += pre * hyp2f1_series(a, b, a + b - c + 1.0, x)?;
    }
    if let (Some(r1), Some(r2)) = (rgamma_log(a), rgamma_log(b)) {
        let pre = (lc + log_gamma_unchecked(-m) + r1 + r2 + m * x.ln()).exp();
        out += pre * hyp2f1_series(c - a, c - b, m + 1.0, x)?;
    }
    Ok(out)
}

/// c = a + b + m with integer m ≥ 0 (logarithmic case).
fn log_case(a: Complex64, b: Complex64, m: usize, z: f64) -> Result<Complex64> {
    let x = 1.0 - z;
    let mf = m as f64;
    let c = a + b + mf;
    let lc = log_gamma_unchecked(c);
    let mut out = Complex64::new(0.0, 0.0);
    if m > 0 {
        if let (Some(ra), Some(rb)) = (rgamma_log(a + mf), rgamma_log(b + mf)) {
            let pre = (lc + log_gamma_unchecked(c64(mf)) + ra + rb).exp();
            let mut acc = Acc::default();
            let mut term = c64(1.0);
            for n in 0..m {
                acc.add(term);
                let nf = n as f64;
                term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * x;
            }
            out += pre * acc.sum;
        }
    }
    let (ra, rb) = match (rgamma_log(a), rgamma_log(b)) {
        (Some(ra), Some(rb)) => (ra, rb),
        _ => return Ok(out),
    };
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = (lc + ra + rb).exp() * (sign * x.powi(m as i32));
    let lnx = x.ln();
    // ψ(n+1), ψ(n+m+1), ψ(a+n+m), ψ(b+n+m) advanced by recurrence
    let mut psi_n1 = -EULER_GAMMA;
    let mut psi_nm1 = -EULER_GAMMA + (1..=m).map(|k| 1.0 / k as f64).sum::<f64>();
    let mut psi_a = digamma(a + mf)?;
    let mut psi_b = digamma(b + mf)?;
    // (a+m)_n (b+m)_n / (n! (n+m)!)
    let mut coef = c64(1.0 / (1..=m).map(|k| k as f64).product::<f64>());
    let mut acc = Acc::default();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let bracket = lnx - psi_n1 - psi_nm1 + psi_a + psi_b;
        let term = coef * bracket;
        acc.add(term);
        if term.norm() <= 1e-17 * acc.sum.norm() && n as f64 > a.norm() + b.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(out - pre * acc.sum);
            }
        } else {
            quiet = 0;
        }
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * x;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += (a + mf + nf).inv();
        psi_b += (b + mf + nf).inv();
    }
    Err(Error::NonConvergence { z })
}

/// The route `hyp2f1` selects for argument z.
pub fn hyp2f1_path(z: f64) -> HypPath {
    if z.abs() <= 0.5 {
        HypPath::Series
    } else if z > 0.5 {
        HypPath::OneMinusZ
    } else if z >= -1.0 {
        HypPath::Pfaff
    } else {
        HypPath::PfaffOneMinusZ
    }
}

/// Gauss ₂F₁(a, b; c; z) for real z < 1.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if nonpositive_integer(c) {
        return Err(Error::Pole {
            function: "hyp2f1",
            arg: format!("c = {c}"),
        });
    }
    if !z.is_finite() || z >= 1.0 {
        return Err(Error::NonConvergence { z });
    }
    if z == 0.0 {
        return Ok(c64(1.0));
    }
    if nonpositive_integer(a) || nonpositive_integer(b) {
        return hyp2f1_series(a, b, c, z);
    }
    match hyp2f1_path(z) {
        HypPath::Series => hyp2f1_series(a, b, c, z),
        HypPath::OneMinusZ => near_one(a, b, c, z),
        HypPath::Pfaff | HypPath::PfaffOneMinusZ => hyp2f1_pfaff(a, b, c, z),
    }
}
