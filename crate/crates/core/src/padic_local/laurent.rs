use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Σ_j coeffs[j] X^{low + j}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub low: i32,
    pub coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(a: Complex64) -> Self {
        LaurentPoly {
            low: 0,
            coeffs: vec![a],
        }
        .trimmed()
    }

    /// a·X^k.
    pub fn monomial(a: Complex64, k: i32) -> Self {
        LaurentPoly {
            low: k,
            coeffs: vec![a],
        }
        .trimmed()
    }

    /// Exact-zero coefficients removed from both ends.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&c(0.0, 0.0)) {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .take_while(|z| **z == c(0.0, 0.0))
            .count();
        if lead == self.coeffs.len() {
            return LaurentPoly::zero();
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == c(0.0, 0.0))
    }

    /// Highest exponent (None for the zero polynomial).
    pub fn high(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i32 - 1)
        }
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        let j = k - self.low;
        if j < 0 || j as usize >= self.coeffs.len() {
            c(0.0, 0.0)
        } else {
            self.coeffs[j as usize]
        }
    }

    /// Add a·X^k in place.
    pub fn add_term(&mut self, a: Complex64, k: i32) {
        if a == c(0.0, 0.0) {
            return;
        }
        if self.coeffs.is_empty() {
            self.low = k;
            self.coeffs.push(a);
            return;
        }
        if k < self.low {
            let pad = (self.low - k) as usize;
            let mut v = vec![c(0.0, 0.0); pad];
            v.extend_from_slice(&self.coeffs);
            self.coeffs = v;
            self.low = k;
        }
        let j = (k - self.low) as usize;
        if j >= self.coeffs.len() {
            self.coeffs.resize(j + 1, c(0.0, 0.0));
        }
        self.coeffs[j] += a;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, a) in other.coeffs.iter().enumerate() {
            out.add_term(*a, other.low + j as i32);
        }
        out.trimmed()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|z| z * a).collect(),
        }
        .trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![c(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly {
            low: self.low + other.low,
            coeffs,
        }
        .trimmed()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc * x.powi(self.low)
    }

    /// X ↦ aX.
    pub fn scale_var(&self, a: Complex64) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, z)| z * a.powi(self.low + j as i32))
                .collect(),
        }
        .trimmed()
    }

    /// X ↦ b/X.
    pub fn reflect(&self, b: Complex64) -> Self {
        let mut out = LaurentPoly::zero();
        for (j, z) in self.coeffs.iter().enumerate() {
            let k = self.low + j as i32;
            out.add_term(z * b.powi(k), -k);
        }
        out.trimmed()
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Truncated power series in z: Σ_{k<len} a_k z^k.
fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut out = vec![c(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

fn series_inv(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![c(0.0, 0.0); n];
    out[0] = a[0].inv();
    for k in 1..n {
        let mut s = c(0.0, 0.0);
        for j in 1..=k {
            s += a[j] * out[k - j];
        }
        out[k] = -s * out[0];
    }
    out
}

/// (ρ + z)^k as a series in z, any integer k.
fn series_pow(rho: Complex64, k: i32, len: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); len];
    let base = rho.powi(k);
    let mut binom = 1.0;
    for (j, o) in out.iter_mut().enumerate() {
        *o = base * binom / rho.powi(j as i32);
        binom *= (k as f64 - j as f64) / (j as f64 + 1.0);
    }
    out
}

/// A rational function N(X)/D(X) of X = p^{−s}: N a Laurent polynomial and
/// D = Π(1 − X/ρ_j) with constant term 1, which fixes the representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentRational {
    pub p: u64,
    num: LaurentPoly,
    poles: Vec<Complex64>,
}

impl LaurentRational {
    pub fn from_poly(p: u64, num: LaurentPoly) -> Self {
        LaurentRational {
            p,
            num: num.trimmed(),
            poles: Vec::new(),
        }
    }

    pub fn constant(p: u64, a: Complex64) -> Self {
        Self::from_poly(p, LaurentPoly::constant(a))
    }

    /// N(X)/Π(1 − X/ρ_j); all ρ_j must be nonzero and finite.
    pub fn new(p: u64, num: LaurentPoly, poles: Vec<Complex64>) -> Result<Self> {
        if poles.iter().any(|r| *r == c(0.0, 0.0) || !r.is_finite()) {
            return Err(Error::Invalid(
                "denominator roots must be nonzero and finite".into(),
            ));
        }
        Ok(LaurentRational {
            p,
            num: num.trimmed(),
            poles,
        }
        .reduced())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// Nonzero poles with multiplicity.
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// D(X) = Π(1 − X/ρ_j) expanded.
    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::constant(c(1.0, 0.0));
        for r in &self.poles {
            d = d.mul(&LaurentPoly {
                low: 0,
                coeffs: vec![c(1.0, 0.0), -r.inv()],
            });
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut v = self.num.eval(x);
        for r in &self.poles {
            v /= c(1.0, 0.0) - x / r;
        }
        v
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&other.poles);
        LaurentRational {
            p: self.p,
            num: self.num.mul(&other.num),
            poles,
        }
        .reduced()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        LaurentRational {
            p: self.p,
            num: self.num.scale(a),
            poles: self.poles.clone(),
        }
    }

    /// X ↦ aX, i.e. s ↦ s + t for a = p^{−t}.
    pub fn scale_var(&self, a: Complex64) -> Self {
        LaurentRational {
            p: self.p,
            num: self.num.scale_var(a),
            poles: self.poles.iter().map(|r| r / a).collect(),
        }
    }

    /// X ↦ b/X, i.e. s ↦ t − s for b = p^{−t}.
    pub fn reflect(&self, b: Complex64) -> Self {
        // 1 − b/(Xρ) = −(b/ρ)·X^{−1}·(1 − Xρ/b)
        let mut num = self.num.reflect(b);
        let mut poles = Vec::with_capacity(self.poles.len());
        for r in &self.poles {
            let q = b / r;
            num = num.mul(&LaurentPoly::monomial(-q.inv(), 1));
            poles.push(q);
        }
        LaurentRational {
            p: self.p,
            num,
            poles,
        }
    }

    /// Cancel denominator factors that divide the numerator.
    pub fn reduced(mut self) -> Self {
        let mut i = 0;
        while i < self.poles.len() {
            let r = self.poles[i];
            let scale: f64 = self
                .num
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a.norm() * r.norm().powi(self.num.low + j as i32))
                .sum();
            if scale > 0.0 && self.num.eval(r).norm() <= 1e-12 * scale {
                // N = X^low P, P(X) = (X − ρ)Q(X) = (1 − X/ρ)·(−ρ Q(X))
                let p = &self.num.coeffs;
                let n = p.len();
                let mut q = vec![c(0.0, 0.0); n.saturating_sub(1)];
                let mut acc = c(0.0, 0.0);
                for j in (1..n).rev() {
                    acc = acc * r + p[j];
                    q[j - 1] = acc;
                }
                self.num = LaurentPoly {
                    low: self.num.low,
                    coeffs: q,
                }
                .scale(-r);
                self.poles.remove(i);
            } else {
                i += 1;
            }
        }
        if self.num.is_zero() {
            self.poles.clear();
        }
        self
    }

    /// Numerator span (high − low exponent) and denominator degree.
    pub fn degrees(&self) -> (usize, usize) {
        let span = match self.num.high() {
            Some(h) => (h - self.num.low) as usize,
            None => 0,
        };
        (span, self.poles.len())
    }

    /// Coefficientwise N₁D₂ = N₂D₁ up to `tol` relative to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        Self::quotients_eq(
            &self.num,
            &self.denominator(),
            &other.num,
            &other.denominator(),
            tol,
        )
    }

    /// Same comparison against an arbitrary quotient num/den of Laurent polynomials.
    pub fn equals_quotient(&self, num: &LaurentPoly, den: &LaurentPoly, tol: f64) -> bool {
        Self::quotients_eq(&self.num, &self.denominator(), num, den, tol)
    }

    fn quotients_eq(
        n1: &LaurentPoly,
        d1: &LaurentPoly,
        n2: &LaurentPoly,
        d2: &LaurentPoly,
        tol: f64,
    ) -> bool {
        let a = n1.mul(d2);
        let b = n2.mul(d1);
        let scale = a.norm().max(b.norm());
        if scale == 0.0 {
            return true;
        }
        a.add(&b.scale(c(-1.0, 0.0))).norm() <= tol * scale
    }

    /// (1/2πi) ∮_{|X| = R} F(X) dX/X by residues at the poles inside.
    pub fn circle_mean(&self, radius: f64) -> Result<Complex64> {
        if self.num.is_zero() {
            return Ok(c(0.0, 0.0));
        }
        for r in &self.poles {
            if (r.norm() - radius).abs() <= 1e-9 * radius {
                return Err(Error::PoleOnContour { radius });
            }
        }
        // residue at 0 of N(X)/(X D(X)): Σ_{j ≤ 0} n_j [X^{−j}] 1/D
        let mut total = c(0.0, 0.0);
        if self.num.low <= 0 {
            let len = (-self.num.low) as usize + 1;
            let mut inv_d = vec![c(0.0, 0.0); len];
            inv_d[0] = c(1.0, 0.0);
            for r in &self.poles {
                // 1/(1 − X/ρ) = Σ (X/ρ)^k
                let geo: Vec<Complex64> = (0..len).map(|k| r.inv().powi(k as i32)).collect();
                inv_d = series_mul(&inv_d, &geo);
            }
            for (j, a) in self.num.coeffs.iter().enumerate() {
                let k = self.num.low + j as i32;
                if k > 0 {
                    break;
                }
                total += a * inv_d[(-k) as usize];
            }
        }
        // group coincident poles
        let mut groups: Vec<(Complex64, usize)> = Vec::new();
        for r in &self.poles {
            match groups
                .iter_mut()
                .find(|(q, _)| (q - r).norm() <= 1e-10 * r.norm())
            {
                Some(g) => g.1 += 1,
                None => groups.push((*r, 1)),
            }
        }
        for (gi, &(rho, m)) in groups.iter().enumerate() {
            if rho.norm() >= radius {
                continue;
            }
            // N(X)/(X D(X)) = (−ρ)^m (X − ρ)^{−m} · N(X)/(X E(X))
            let mut num = vec![c(0.0, 0.0); m];
            for (j, a) in self.num.coeffs.iter().enumerate() {
                let s = series_pow(rho, self.num.low + j as i32 - 1, m);
                for (o, v) in num.iter_mut().zip(&s) {
                    *o += a * v;
                }
            }
            let mut den = vec![c(0.0, 0.0); m];
            den[0] = c(1.0, 0.0);
            for (gj, &(q, mq)) in groups.iter().enumerate() {
                if gj == gi {
                    continue;
                }
                let mut f = vec![c(0.0, 0.0); m];
                f[0] = c(1.0, 0.0) - rho / q;
                if m > 1 {
                    f[1] = -q.inv();
                }
                for _ in 0..mq {
                    den = series_mul(&den, &f);
                }
            }
            let g = series_mul(&num, &series_inv(&den));
            total += (-rho).powi(m as i32) * g[m - 1];
        }
        Ok(total)
    }

    /// (1/n) Σ_k F(R e^{2πik/n}): the n-point trapezoid rule for the same mean.
    pub fn trapezoid_mean(&self, radius: f64, n: usize) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let x = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            acc += self.eval(x);
        }
        acc / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_twice_is_identity() {
        let f = LaurentRational::new(
            3,
            LaurentPoly {
                low: -1,
                coeffs: vec![c(1.0, 0.5), c(2.0, 0.0), c(0.0, -1.0)],
            },
            vec![c(0.7, 0.1), c(2.0, 0.0)],
        )
        .unwrap();
        let b = c(1.0 / 3.0, 0.0);
        let g = f.reflect(b).reflect(b);
        assert!(f.approx_eq(&g, 1e-13));
        let x = c(0.3, 0.4);
        assert!((f.reflect(b).eval(x) - f.eval(b / x)).norm() < 1e-13);
    }

    #[test]
    fn double_pole_residue_matches_trapezoid() {
        let f = LaurentRational::new(
            5,
            LaurentPoly {
                low: -2,
                coeffs: vec![c(1.0, 0.0), c(-0.5, 0.2), c(0.3, 0.0)],
            },
            vec![c(0.2, 0.0), c(0.2, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        let res = f.circle_mean(0.6).unwrap();
        let tr = f.trapezoid_mean(0.6, 512);
        assert!(
            (res - tr).norm() < 1e-12 * res.norm().max(1.0),
            "{res} {tr}"
        );
    }

    #[test]
    fn cancellation_reduces() {
        // (1 − X/2)(1 + X)/(1 − X/2) = 1 + X
        let num = LaurentPoly {
            low: 0,
            coeffs: vec![c(1.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
        };
        let f = LaurentRational::new(2, num, vec![c(2.0, 0.0)]).unwrap();
        assert!(f.poles().is_empty());
        assert_eq!(f.numerator().coeffs.len(), 2);
    }
}
