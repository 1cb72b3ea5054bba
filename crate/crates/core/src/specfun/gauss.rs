//! Finite-order characters of (ℤ/p^mℤ)^× and their Gauss sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % n as u128) as u64;
        }
        b = (b as u128 * b as u128 % n as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root modulo p (p odd prime).
pub fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let fs = prime_factors(phi);
    (2..p)
        .find(|&g| fs.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .unwrap_or(1)
}

/// Generators of (ℤ/p^mℤ)^× with their orders.
fn generators(p: u64, m: u32) -> Vec<(u64, u64)> {
    let n = p.pow(m);
    if m == 0 || n == 2 {
        return vec![];
    }
    if p == 2 {
        if m == 2 {
            return vec![(3, 2)];
        }
        return vec![(n - 1, 2), (5, n / 4)];
    }
    let mut g = primitive_root(p);
    if m >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    vec![(g, n / p * (p - 1))]
}

/// A character of (ℤ/p^mℤ)^×, stored as its value table on residues mod p^m
/// (zero on non-units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCharacter {
    pub p: u64,
    pub m: u32,
    values: Vec<Complex64>,
}

impl UnitCharacter {
    /// The trivial character (modulus p^0).
    pub fn trivial(p: u64) -> Self {
        UnitCharacter {
            p,
            m: 0,
            values: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Character sending the j-th generator to exp(2πi·k_j/order_j).
    pub fn from_exponents(p: u64, m: u32, ks: &[u64]) -> Self {
        let n = p.pow(m) as usize;
        let gens = generators(p, m);
        let mut values = vec![Complex64::new(0.0, 0.0); n.max(1)];
        if gens.is_empty() {
            for (a, v) in values.iter_mut().enumerate() {
                if n <= 1 || !(a as u64).is_multiple_of(p) {
                    *v = Complex64::new(1.0, 0.0);
                }
            }
            return UnitCharacter { p, m, values };
        }
        // walk over all products of generator powers
        let mut idx = vec![0u64; gens.len()];
        loop {
            let mut a = 1u64;
            let mut phase = 0.0;
            for (j, &(g, ord)) in gens.iter().enumerate() {
                a = a * pow_mod(g, idx[j], n as u64) % n as u64;
                let k = ks.get(j).copied().unwrap_or(0) % ord;
                phase += (idx[j] * k % ord) as f64 / ord as f64;
            }
            values[a as usize] = Complex64::from_polar(1.0, 2.0 * PI * phase.fract());
            let mut j = 0;
            loop {
                if j == gens.len() {
                    return UnitCharacter { p, m, values };
                }
                idx[j] += 1;
                if idx[j] < gens[j].1 {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// All characters modulo p^m, in a fixed order.
    pub fn all(p: u64, m: u32) -> Vec<Self> {
        let gens = generators(p, m);
        let mut out = Vec::new();
        let mut ks = vec![0u64; gens.len()];
        loop {
            out.push(Self::from_exponents(p, m, &ks));
            let mut j = 0;
            loop {
                if j == gens.len() {
                    return out;
                }
                ks[j] += 1;
                if ks[j] < gens[j].1 {
                    break;
                }
                ks[j] = 0;
                j += 1;
            }
        }
    }

    /// Legendre symbol (·/p) for odd p.
    pub fn legendre(p: u64) -> Self {
        Self::from_exponents(p, 1, &[(p - 1) / 2])
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// χ(a) for an integer a (reduced mod p^m); zero when p | a and m ≥ 1.
    pub fn eval(&self, a: i64) -> Complex64 {
        let n = self.modulus() as i64;
        self.values[a.rem_euclid(n) as usize]
    }

    /// Smallest c with χ trivial on 1 + p^c ℤ_p (c = 0 for the trivial character).
    pub fn conductor(&self) -> u32 {
        let n = self.modulus();
        for c in 0..=self.m {
            let step = self.p.pow(c.max(1)).min(n);
            let trivial = if c == 0 {
                (0..n)
                    .filter(|a| a % self.p != 0)
                    .all(|a| (self.values[a as usize] - 1.0).norm() < 1e-12)
            } else {
                (0..n)
                    .filter(|a| a % step == 1 % step)
                    .all(|a| (self.values[a as usize] - 1.0).norm() < 1e-12)
            };
            if trivial {
                return c;
            }
        }
        self.m
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.conductor() == 0
    }

    pub fn conj(&self) -> Self {
        UnitCharacter {
            p: self.p,
            m: self.m,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Same character viewed modulo p^m2 (m2 ≥ m).
    pub fn lift(&self, m2: u32) -> Self {
        let m2 = m2.max(self.m);
        let n2 = self.p.pow(m2);
        let values = (0..n2)
            .map(|a| {
                if m2 > 0 && a % self.p == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.eval(a as i64)
                }
            })
            .collect();
        UnitCharacter {
            p: self.p,
            m: m2,
            values,
        }
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        let n = self.p.pow(c);
        let values = (0..n.max(1))
            .map(|a| {
                if c > 0 && a % self.p == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                // any unit lift of a modulo p^m
                let mut b = a.max(1);
                if c == 0 {
                    b = 1;
                }
                while b % self.p == 0 {
                    b += n;
                }
                self.eval(b as i64)
            })
            .collect();
        UnitCharacter {
            p: self.p,
            m: c,
            values,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.m.max(other.m);
        let (a, b) = (self.lift(m), other.lift(m));
        UnitCharacter {
            p: self.p,
            m,
            values: a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect(),
        }
    }
}

/// τ(χ) = Σ_{a mod p^m} χ(a) e(a/p^m) for primitive χ.
pub fn gauss_sum(chi: &UnitCharacter) -> Result<Complex64> {
    if !chi.is_primitive() || chi.m == 0 {
        return Err(Error::NonPrimitive {
            modulus: chi.modulus(),
        });
    }
    let n = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..n {
        if a % chi.p != 0 {
            acc += chi.eval(a as i64) * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / n as f64);
        }
    }
    Ok(acc)
}
