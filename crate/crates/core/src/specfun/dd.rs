//! Double-double arithmetic (about 32 significant digits) for reference
//! evaluations. Only the operations needed by [`super::extended`] are
//! provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };
    pub const PI: DD = DD {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const LN2: DD = DD {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub fn new(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    /// Exact quotient p/q of two doubles, rounded to double-double.
    pub fn ratio(p: f64, q: f64) -> DD {
        DD::new(p) / DD::new(q)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> DD {
        let (p, e) = two_prod(self.hi, b);
        let (s, e2) = quick_two_sum(p, e + self.lo * b);
        DD { hi: s, lo: e2 }
    }

    pub fn ldexp(self, k: i32) -> DD {
        let f = 2f64.powi(k);
        DD {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn sqr(self) -> DD {
        self * self
    }

    pub fn sqrt(self) -> DD {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let y = DD::new(self.hi.sqrt());
        y + (self - y.sqr()) / y.mul_f64(2.0)
    }

    pub fn exp(self) -> DD {
        if self.hi > 709.0 {
            return DD::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        let k = (self.hi / DD::LN2.hi).round();
        let r = (self - DD::LN2.mul_f64(k)).ldexp(-10);
        // Taylor series of e^r − 1
        let mut term = r;
        let mut sum = r;
        for n in 2..=14 {
            term = (term * r) / DD::new(n as f64);
            sum = sum + term;
        }
        // (1 + s)^2 − 1 = s(2 + s), squared ten times
        for _ in 0..10 {
            sum = sum * (sum + DD::new(2.0));
        }
        (sum + DD::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> DD {
        if self.hi <= 0.0 {
            return DD::new(f64::NAN);
        }
        let mut y = DD::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DD::ONE;
        }
        y
    }

    /// (sin x, cos x).
    pub fn sin_cos(self) -> (DD, DD) {
        let half_pi = DD::PI.ldexp(-1);
        let k = (self.hi / half_pi.hi).round();
        let r = self - half_pi.mul_f64(k);
        let r2 = r.sqr();
        let mut s = r;
        let mut c = DD::ONE;
        let mut ts = r;
        let mut tc = DD::ONE;
        for n in 1..=15 {
            let nf = n as f64;
            ts = -(ts * r2) / DD::new((2.0 * nf) * (2.0 * nf + 1.0));
            tc = -(tc * r2) / DD::new((2.0 * nf - 1.0) * (2.0 * nf));
            s = s + ts;
            c = c + tc;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// atan2(y, x) refined by Newton steps on the double estimate.
    pub fn atan2(y: DD, x: DD) -> DD {
        let mut t = DD::new(y.hi.atan2(x.hi));
        let r = (x.sqr() + y.sqr()).sqrt();
        if r.hi == 0.0 {
            return DD::ZERO;
        }
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            // f(t) = y cos t − x sin t, f'(t) = −(y sin t + x cos t)
            let f = y * c - x * s;
            let fp = y * s + x * c;
            t = t + f / fp;
        }
        t
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub fn new(re: DD, im: DD) -> CDD {
        CDD { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> CDD {
        CDD {
            re: DD::new(re),
            im: DD::new(im),
        }
    }

    pub fn real(re: DD) -> CDD {
        CDD { re, im: DD::ZERO }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> DD {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs_f64(self) -> f64 {
        self.to_c64().norm()
    }

    pub fn conj(self) -> CDD {
        CDD {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, k: DD) -> CDD {
        CDD {
            re: self.re * k,
            im: self.im * k,
        }
    }

    pub fn add_real(self, k: DD) -> CDD {
        CDD {
            re: self.re + k,
            im: self.im,
        }
    }

    pub fn inv(self) -> CDD {
        let d = self.norm_sqr();
        CDD {
            re: self.re / d,
            im: -self.im / d,
        }
    }

    pub fn exp(self) -> CDD {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        CDD {
            re: m * c,
            im: m * s,
        }
    }

    /// Principal logarithm.
    pub fn ln(self) -> CDD {
        CDD {
            re: self.norm_sqr().ln().ldexp(-1),
            im: DD::atan2(self.im, self.re),
        }
    }
}

impl Add for CDD {
    type Output = CDD;
    fn add(self, b: CDD) -> CDD {
        CDD {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for CDD {
    type Output = CDD;
    fn sub(self, b: CDD) -> CDD {
        CDD {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Neg for CDD {
    type Output = CDD;
    fn neg(self) -> CDD {
        CDD {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CDD {
    type Output = CDD;
    fn mul(self, b: CDD) -> CDD {
        CDD {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CDD {
    type Output = CDD;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: CDD) -> CDD {
        self * b.inv()
    }
}
