use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{is_prime, UnitCharacter};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{p} is not prime")))
    }
}

/// Default cap on conductor exponents.
pub const DEFAULT_CONDUCTOR_CAP: u32 = 6;

/// An element p^v·u of ℚ_p^× with the unit u known modulo p^level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicElement {
    pub valuation: i32,
    pub unit: u64,
    pub level: u32,
}

impl PadicElement {
    pub fn new(p: u64, valuation: i32, unit: u64, level: u32) -> Result<Self> {
        let n = p.pow(level);
        let unit = if level == 0 { 1 } else { unit % n };
        if level > 0 && unit % p == 0 {
            return Err(Error::Invalid(format!("{unit} is not a unit modulo {p}")));
        }
        Ok(PadicElement {
            valuation,
            unit,
            level,
        })
    }

    /// p^v exactly (unit 1, known to any level).
    pub fn power(valuation: i32) -> Self {
        PadicElement {
            valuation,
            unit: 1,
            level: u32::MAX,
        }
    }

    /// The unit class modulo p^m (m ≤ level).
    pub fn unit_mod(&self, p: u64, m: u32) -> Result<u64> {
        if m > self.level {
            return Err(Error::Invalid(format!(
                "unit known modulo p^{} only, p^{m} needed",
                self.level
            )));
        }
        Ok(self.unit % p.pow(m))
    }
}

/// A quasi-character χ(p^v u) = χ_unit(u)·p^{−v·exponent} of ℚ_p^×.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadicCharacter {
    pub p: u64,
    pub exponent: Complex64,
    pub unit: UnitCharacter,
}

impl PadicCharacter {
    /// χ_unit·|.|^exponent, with χ_unit replaced by the primitive character inducing it.
    pub fn new(p: u64, exponent: Complex64, unit: UnitCharacter) -> Result<Self> {
        check_prime(p)?;
        if unit.p != p {
            return Err(Error::Invalid(format!(
                "unit character is modulo a power of {}, not {p}",
                unit.p
            )));
        }
        Ok(PadicCharacter {
            p,
            exponent,
            unit: unit.primitive(),
        })
    }

    pub fn unramified(p: u64, exponent: Complex64) -> Result<Self> {
        Self::new(p, exponent, UnitCharacter::trivial(p))
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::unramified(p, c(0.0, 0.0))
    }

    pub fn conductor(&self) -> u32 {
        self.unit.m
    }

    pub fn is_unramified(&self) -> bool {
        self.unit.m == 0
    }

    /// χ(p) = p^{−exponent}.
    pub fn at_p(&self) -> Complex64 {
        (-self.exponent * (self.p as f64).ln()).exp()
    }

    /// χ(−1).
    pub fn sign(&self) -> Complex64 {
        self.unit.eval(-1)
    }

    pub fn eval(&self, x: &PadicElement) -> Result<Complex64> {
        let u = x.unit_mod(self.p, self.unit.m)?;
        Ok(self.unit.eval(u as i64)
            * (-self.exponent * (x.valuation as f64 * (self.p as f64).ln())).exp())
    }

    pub fn inverse(&self) -> Self {
        PadicCharacter {
            p: self.p,
            exponent: -self.exponent,
            unit: self.unit.conj(),
        }
    }

    /// Complex conjugate x ↦ conj χ(x).
    pub fn conj(&self) -> Self {
        PadicCharacter {
            p: self.p,
            exponent: self.exponent.conj(),
            unit: self.unit.conj(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        PadicCharacter {
            p: self.p,
            exponent: self.exponent + other.exponent,
            unit: self.unit.mul(&other.unit).primitive(),
        }
    }

    /// χ·|.|^t.
    pub fn twist(&self, t: Complex64) -> Self {
        PadicCharacter {
            p: self.p,
            exponent: self.exponent + t,
            unit: self.unit.clone(),
        }
    }

    /// The same unit part with χ(p) multiplied by a.
    pub fn scale_at_p(&self, a: Complex64) -> Self {
        self.twist(-a.ln() / (self.p as f64).ln())
    }

    /// |Re(exponent)|.
    pub fn theta(&self) -> f64 {
        self.exponent.re.abs()
    }
}

/// Unramified principal series of PGL₂(ℚ_p) with Satake parameter α:
/// L(s, π) = (1 − αX)^{−1}(1 − α^{−1}X)^{−1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PadicRep {
    pub p: u64,
    pub satake: Complex64,
}

impl PadicRep {
    pub fn new(p: u64, satake: Complex64) -> Result<Self> {
        check_prime(p)?;
        let pi = PadicRep { p, satake };
        if satake == c(0.0, 0.0) || !satake.is_finite() || pi.theta() >= 0.5 {
            return Err(Error::Invalid(format!(
                "Satake parameter {satake} is not θ-tempered for θ < 1/2 at p = {p}"
            )));
        }
        Ok(pi)
    }

    pub fn spherical_trivial(p: u64) -> Result<Self> {
        Self::new(p, c(1.0, 0.0))
    }

    /// θ with |α| = p^{±θ}.
    pub fn theta(&self) -> f64 {
        (self.satake.norm().ln() / (self.p as f64).ln()).abs()
    }
}

/// One piece of a step function: value on p^valuation·(class + p^level ℤ_p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPiece {
    pub valuation: i32,
    pub class: u64,
    pub value: Complex64,
}

/// A locally constant compactly supported function on ℚ_p^×: constant on
/// cells p^v·(a + p^level ℤ_p), a a unit modulo p^level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub p: u64,
    pub level: u32,
    pub pieces: Vec<StepPiece>,
}

impl StepFunction {
    pub fn new(p: u64, level: u32, pieces: Vec<StepPiece>) -> Result<Self> {
        check_prime(p)?;
        let n = p.pow(level);
        let mut pieces = pieces;
        for pc in pieces.iter_mut() {
            pc.class = if level == 0 { 0 } else { pc.class % n };
            if level > 0 && pc.class % p == 0 {
                return Err(Error::Invalid(format!(
                    "class {} is not a unit modulo {p}",
                    pc.class
                )));
            }
            if !pc.value.is_finite() {
                return Err(Error::Invalid("step values must be finite".into()));
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].valuation == pieces[j].valuation && pieces[i].class == pieces[j].class
                {
                    return Err(Error::Invalid("step pieces overlap".into()));
                }
            }
        }
        pieces.retain(|pc| pc.value != c(0.0, 0.0));
        Ok(StepFunction { p, level, pieces })
    }

    pub fn zero(p: u64) -> Self {
        StepFunction {
            p,
            level: 0,
            pieces: Vec::new(),
        }
    }

    /// value·𝟏 on p^v ℤ_p^×.
    pub fn shell(p: u64, valuation: i32, value: Complex64) -> Result<Self> {
        Self::new(
            p,
            0,
            vec![StepPiece {
                valuation,
                class: 0,
                value,
            }],
        )
    }

    /// 𝟏 on ℤ_p^×.
    pub fn unit_indicator(p: u64) -> Result<Self> {
        Self::shell(p, 0, c(1.0, 0.0))
    }

    /// The same function described on cells of a finer level.
    pub fn refine(&self, level: u32) -> Self {
        if level <= self.level {
            return self.clone();
        }
        let (n_old, n_new) = (self.p.pow(self.level), self.p.pow(level));
        let mut pieces = Vec::new();
        for pc in &self.pieces {
            for a in 0..n_new {
                if a % self.p != 0 && (self.level == 0 || a % n_old == pc.class) {
                    pieces.push(StepPiece {
                        valuation: pc.valuation,
                        class: a,
                        value: pc.value,
                    });
                }
            }
        }
        StepFunction {
            p: self.p,
            level,
            pieces,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for pc in out.pieces.iter_mut() {
            pc.value *= a;
        }
        out.pieces.retain(|pc| pc.value != c(0.0, 0.0));
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Invalid(
                "step functions over different primes".into(),
            ));
        }
        let level = self.level.max(other.level);
        let (a, b) = (self.refine(level), other.refine(level));
        let mut pieces = a.pieces.clone();
        for pc in &b.pieces {
            match pieces
                .iter_mut()
                .find(|q| q.valuation == pc.valuation && q.class == pc.class)
            {
                Some(q) => q.value += pc.value,
                None => pieces.push(*pc),
            }
        }
        StepFunction::new(self.p, level, pieces)
    }

    /// Value at p^v·u; u must be known modulo p^level.
    pub fn eval(&self, x: &PadicElement) -> Result<Complex64> {
        let a = x.unit_mod(self.p, self.level)?;
        Ok(self.value_at(x.valuation, a))
    }

    /// Value on the cell of valuation v and unit class a (a modulo p^level or finer).
    pub fn value_at(&self, valuation: i32, a: u64) -> Complex64 {
        let a = if self.level == 0 {
            0
        } else {
            a % self.p.pow(self.level)
        };
        self.pieces
            .iter()
            .find(|pc| pc.valuation == valuation && pc.class == a)
            .map(|pc| pc.value)
            .unwrap_or(c(0.0, 0.0))
    }

    /// (min, max) valuation of the support.
    pub fn valuation_range(&self) -> Option<(i32, i32)> {
        let lo = self.pieces.iter().map(|pc| pc.valuation).min()?;
        let hi = self.pieces.iter().map(|pc| pc.valuation).max()?;
        Some((lo, hi))
    }
}

/// h(y₁, y₂) = f₁(y₁)·conj f₂(y₂) on (ℚ_p^×)².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepWeight {
    pub factor1: StepFunction,
    pub factor2: StepFunction,
}

impl StepWeight {
    pub fn new(factor1: StepFunction, factor2: StepFunction) -> Result<Self> {
        if factor1.p != factor2.p {
            return Err(Error::Invalid(
                "weight factors over different primes".into(),
            ));
        }
        Ok(StepWeight { factor1, factor2 })
    }

    pub fn p(&self) -> u64 {
        self.factor1.p
    }

    pub fn is_zero(&self) -> bool {
        self.factor1.is_zero() || self.factor2.is_zero()
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        StepWeight {
            factor1: self.factor1.scaled(a),
            factor2: self.factor2.clone(),
        }
    }
}
