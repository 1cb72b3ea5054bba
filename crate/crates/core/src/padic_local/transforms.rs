use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::factors::gl2_gamma;
use super::laurent::{LaurentPoly, LaurentRational};
use super::types::{
    PadicCharacter, PadicElement, PadicRep, StepFunction, StepWeight, DEFAULT_CONDUCTOR_CAP,
};
use crate::error::{Error, Result};
use crate::specfun::UnitCharacter;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pow_mod(base: u64, mut e: u64, n: u64) -> u64 {
    let mut b = (base % n) as u128;
    let mut acc = 1u128 % n as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n as u128;
        }
        b = b * b % n as u128;
        e >>= 1;
    }
    acc as u64
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

/// Residues of units modulo p^level (level ≥ 1).
fn units(p: u64, level: u32) -> impl Iterator<Item = u64> {
    (1..p.pow(level)).filter(move |a| a % p != 0)
}

/// p-adic valuation of a nonzero integer and its unit part.
fn split(p: u64, mut d: u64) -> (u32, u64) {
    let mut w = 0;
    while d.is_multiple_of(p) {
        d /= p;
        w += 1;
    }
    (w, d)
}

/// vol(ℤ_p^×) = 1 − 1/p.
pub fn unit_volume(p: u64) -> f64 {
    1.0 - 1.0 / p as f64
}

/// How the circle integral over |X| = p^{−σ} is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContourEval {
    /// Exact sum of residues inside the circle.
    Residues,
    /// n-point trapezoid rule on the circle.
    Trapezoid(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicOptions {
    pub conductor_cap: u32,
    pub eval: ContourEval,
}

impl Default for PadicOptions {
    fn default() -> Self {
        PadicOptions {
            conductor_cap: DEFAULT_CONDUCTOR_CAP,
            eval: ContourEval::Residues,
        }
    }
}

impl PadicOptions {
    pub fn trapezoid(n: usize) -> Self {
        PadicOptions {
            eval: ContourEval::Trapezoid(n),
            ..Default::default()
        }
    }
}

/// s ↦ ∫ f(y) χ^{−1}(y) |y|^s d^×y as a Laurent polynomial in X = p^{−s}:
/// each cell p^v(a + p^m ℤ_p) contributes value·vol·χ^{−1}(p^v a)·X^v.
pub fn padic_mellin(f: &StepFunction, chi: &PadicCharacter) -> Result<LaurentRational> {
    if f.p != chi.p {
        return Err(Error::Invalid(
            "step function and character over different primes".into(),
        ));
    }
    let f = f.refine(chi.conductor());
    let inv = chi.inverse();
    let vol = if f.level == 0 {
        unit_volume(f.p)
    } else {
        (f.p as f64).powi(-(f.level as i32))
    };
    let mut poly = LaurentPoly::zero();
    for pc in &f.pieces {
        let x = PadicElement {
            valuation: pc.valuation,
            unit: if f.level == 0 { 1 } else { pc.class },
            level: f.level,
        };
        poly.add_term(pc.value * vol * inv.eval(&x)?, pc.valuation);
    }
    Ok(LaurentRational::from_poly(f.p, poly))
}

fn strip(sigma: f64, lo: f64, hi: f64) -> Result<()> {
    if sigma > lo && sigma < hi {
        Ok(())
    } else {
        Err(Error::StripViolation { sigma, lo, hi })
    }
}

fn unramified_pair(chi2: &PadicCharacter) -> Result<()> {
    if chi2.is_unramified() {
        Ok(())
    } else {
        Err(Error::Invalid("χ₂ must be unramified".into()))
    }
}

/// Shared χ-integral: (1/vol ℤ_p^×) Σ_ω ∮ γ(½, π⊗ω|.|^s) γ(1, π₁⊗ξω^{−1}|.|^{−s}) F_ω(X) dX/(2πiX).
struct CharacterIntegral<'a> {
    pi: &'a PadicRep,
    pi1: &'a PadicRep,
    xi: PadicCharacter,
    radius: f64,
    eval: ContourEval,
}

impl CharacterIntegral<'_> {
    fn term(&self, omega: &UnitCharacter, data: &LaurentRational) -> Result<Complex64> {
        let p = self.pi.p;
        let pf = p as f64;
        let w = PadicCharacter::new(p, c(0.0, 0.0), omega.clone())?;
        let g_half = gl2_gamma(self.pi, &w)?.scale_var(c(pf.powf(-0.5), 0.0));
        let g_one = gl2_gamma(self.pi1, &self.xi.mul(&w.inverse()))?.reflect(c(1.0 / pf, 0.0));
        let f = g_half.mul(&g_one).mul(data);
        match self.eval {
            ContourEval::Residues => f.circle_mean(self.radius),
            ContourEval::Trapezoid(n) => Ok(f.trapezoid_mean(self.radius, n)),
        }
    }
}

/// Cells of a step-function integral: (valuation, unit class mod p^level, weight).
struct Cells {
    level: u32,
    cells: Vec<(i32, u64, Complex64)>,
}

impl Cells {
    fn scale(&self) -> f64 {
        self.cells.iter().map(|(_, _, g)| g.norm()).sum()
    }

    /// Σ g·ω(a)^{±1}·X^{±v} over the cells.
    fn mellin(&self, omega: &UnitCharacter, sign: i32) -> LaurentPoly {
        let mut poly = LaurentPoly::zero();
        for &(v, a, g) in &self.cells {
            let w = omega.eval(a as i64);
            let w = if sign < 0 { w.conj() } else { w };
            poly.add_term(g * w, sign * v);
        }
        poly
    }
}

/// h^∨(π, y) over ℚ_p by exact residues:
/// (1/vol ℤ_p^×) Σ_ω ∮ γ(½, π⊗χ) γ(1, π₁⊗χ̄₂^{−1}⊗χ^{−1}) ∫ h(yt, y(t−1)) χ̄₂((t−1)/t) |(t−1)/t|^{−½} χ^{−1}(t) d^×t,
/// χ = ω|.|^s on Re s = σ.
pub fn h_vee_padic(
    pi: &PadicRep,
    y: &PadicElement,
    h: &StepWeight,
    pi1: &PadicRep,
    chi2: &PadicCharacter,
    sigma: f64,
    options: &PadicOptions,
) -> Result<Complex64> {
    let p = h.p();
    if pi.p != p || pi1.p != p || chi2.p != p {
        return Err(Error::Invalid(
            "all local data must be over the same prime".into(),
        ));
    }
    unramified_pair(chi2)?;
    let lo = pi1.theta() + chi2.theta();
    if lo + pi.theta() >= 0.5 {
        return Err(Error::StripViolation {
            sigma,
            lo,
            hi: 0.5 - pi.theta(),
        });
    }
    strip(sigma, lo, 0.5 - pi.theta())?;
    if h.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let cells = vee_cells(y, h, chi2)?;
    let integral = CharacterIntegral {
        pi,
        pi1,
        xi: chi2.conj().inverse(),
        radius: (p as f64).powf(-sigma),
        eval: options.eval,
    };
    sum_over_characters(&integral, &cells, -1, |_| None)
}

fn sum_over_characters<F>(
    integral: &CharacterIntegral,
    cells: &Cells,
    sign: i32,
    extra: F,
) -> Result<Complex64>
where
    F: Fn(&UnitCharacter) -> Option<LaurentRational>,
{
    let p = integral.pi.p;
    let scale = cells.scale();
    let mut acc = c(0.0, 0.0);
    for omega in UnitCharacter::all(p, cells.level) {
        let poly = cells.mellin(&omega, sign);
        let mut data = LaurentRational::from_poly(
            p,
            if poly.norm() <= 1e-14 * scale {
                LaurentPoly::zero()
            } else {
                poly
            },
        );
        if let Some(tail) = extra(&omega) {
            data = add(&data, &tail);
        }
        if data.is_zero() {
            continue;
        }
        acc += integral.term(&omega, &data)?;
    }
    Ok(acc / unit_volume(p))
}

/// Sum of a Laurent polynomial and a rational function with simple denominator.
fn add(a: &LaurentRational, b: &LaurentRational) -> LaurentRational {
    // a is a polynomial here: a + N/D = (aD + N)/D
    let num = a.numerator().mul(&b.denominator()).add(b.numerator());
    LaurentRational::new(a.p, num, b.poles().to_vec()).expect("poles of b are valid")
}

fn vee_cells(y: &PadicElement, h: &StepWeight, chi2: &PadicCharacter) -> Result<Cells> {
    let p = h.p();
    let (f1, f2) = (&h.factor1, &h.factor2);
    let (Some((lo1, hi1)), Some((_, hi2))) = (f1.valuation_range(), f2.valuation_range()) else {
        return Ok(Cells {
            level: 1,
            cells: Vec::new(),
        });
    };
    let (m1, m2) = (f1.level, f2.level);
    let uy1 = y.unit_mod(p, m1)?;
    let uy2 = y.unit_mod(p, m2)?;
    let w_max = hi2 - y.valuation;
    let level = m1
        .max(m2 + w_max.max(0) as u32)
        .max((w_max + 1).max(1) as u32);
    let n = p.pow(level);
    let (n1, n2) = (p.pow(m1), p.pow(m2));
    let vol = (p as f64).powi(-(level as i32));
    let chi2b_p = chi2.conj().at_p();
    let mut cells = Vec::new();
    for v in (lo1 - y.valuation)..=(hi1 - y.valuation) {
        for a in units(p, level) {
            let f1v = f1.value_at(y.valuation + v, mul_mod(uy1, a, n1.max(1)));
            if f1v == c(0.0, 0.0) {
                continue;
            }
            // t − 1 = p^w·b
            let (w, b) = if v > 0 {
                let pv = pow_mod(p, v as u64, n2);
                (0, (mul_mod(pv, a, n2) + n2 - 1) % n2)
            } else if v < 0 {
                let pv = pow_mod(p, (-v) as u64, n2);
                (v, (a % n2 + n2 - pv) % n2)
            } else {
                let d = (a + n - 1) % n;
                if d == 0 {
                    continue;
                }
                let (w, b) = split(p, d);
                if w as i32 > w_max {
                    continue;
                }
                (w as i32, b % n2)
            };
            let f2v = f2.value_at(y.valuation + w, mul_mod(uy2, b, n2));
            if f2v == c(0.0, 0.0) {
                continue;
            }
            let q = w - v;
            let g = f1v * f2v.conj() * chi2b_p.powi(q) * (p as f64).powf(0.5 * q as f64);
            cells.push((v, a, g * vol));
        }
    }
    Ok(Cells { level, cells })
}

/// H(y, χ₀) = ∫ h(z, yz) χ₀(z) d^×z, a function of v(y) and y mod p^{level of f₂}.
#[allow(non_snake_case)]
pub fn H_padic(y: &PadicElement, chi0: &PadicCharacter, h: &StepWeight) -> Result<Complex64> {
    let p = h.p();
    let u = y.unit_mod(p, h.factor2.level)?;
    Ok(HTable::new(chi0, h).value(y.valuation, u))
}

struct HTable<'a> {
    chi0: &'a PadicCharacter,
    h: &'a StepWeight,
    level: u32,
    cache: std::cell::RefCell<HashMap<(i32, u64), Complex64>>,
}

impl<'a> HTable<'a> {
    fn new(chi0: &'a PadicCharacter, h: &'a StepWeight) -> Self {
        let level = h
            .factor1
            .level
            .max(h.factor2.level)
            .max(chi0.conductor())
            .max(1);
        HTable {
            chi0,
            h,
            level,
            cache: Default::default(),
        }
    }

    /// Valuation range of the support of y ↦ H(y).
    fn support(&self) -> Option<(i32, i32)> {
        let (lo1, hi1) = self.h.factor1.valuation_range()?;
        let (lo2, hi2) = self.h.factor2.valuation_range()?;
        Some((lo2 - hi1, hi2 - lo1))
    }

    fn value(&self, vy: i32, uy: u64) -> Complex64 {
        let p = self.h.p();
        let n2 = p.pow(self.h.factor2.level);
        let uy = uy % n2;
        if let Some(v) = self.cache.borrow().get(&(vy, uy)) {
            return *v;
        }
        let mut acc = c(0.0, 0.0);
        let vol = (p as f64).powi(-(self.level as i32));
        if let Some((lo1, hi1)) = self.h.factor1.valuation_range() {
            for a in lo1..=hi1 {
                for z in units(p, self.level) {
                    let f1v = self.h.factor1.value_at(a, z);
                    if f1v == c(0.0, 0.0) {
                        continue;
                    }
                    let f2v = self.h.factor2.value_at(a + vy, mul_mod(uy, z, n2));
                    if f2v == c(0.0, 0.0) {
                        continue;
                    }
                    let x = PadicElement {
                        valuation: a,
                        unit: z,
                        level: self.level,
                    };
                    acc += f1v
                        * f2v.conj()
                        * self.chi0.eval(&x).expect("level covers the conductor")
                        * vol;
                }
            }
        }
        self.cache.borrow_mut().insert((vy, uy), acc);
        acc
    }
}

/// h^♯(π, χ₀) over ℚ_p by exact residues:
/// (1/vol ℤ_p^×) Σ_ω ∮ γ(½, π⊗χ) γ(1, π₁⊗χ̄₂^{−1}⊗χ^{−1}) ∫ H(y, χ₀) χ̄₂(y)|y|^{−½} χ₀χ(1−y) d^×(1−y).
#[allow(clippy::too_many_arguments)]
pub fn h_sharp_padic(
    pi: &PadicRep,
    chi0: &PadicCharacter,
    h: &StepWeight,
    pi1: &PadicRep,
    chi2: &PadicCharacter,
    sigma: f64,
    options: &PadicOptions,
) -> Result<Complex64> {
    let p = h.p();
    if pi.p != p || pi1.p != p || chi2.p != p || chi0.p != p {
        return Err(Error::Invalid(
            "all local data must be over the same prime".into(),
        ));
    }
    unramified_pair(chi2)?;
    if chi0.conductor() > options.conductor_cap {
        return Err(Error::Ramification {
            exponent: chi0.conductor(),
            cap: options.conductor_cap,
        });
    }
    if chi0.exponent.re <= -0.5 {
        return Err(Error::StripViolation {
            sigma: chi0.exponent.re,
            lo: -0.5,
            hi: f64::INFINITY,
        });
    }
    strip(sigma, pi1.theta(), 0.5 - pi.theta())?;
    if h.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let table = HTable::new(chi0, h);
    let Some((_, w_max)) = table.support() else {
        return Ok(c(0.0, 0.0));
    };
    let (lo_h, _) = table.support().expect("nonempty");
    let m2 = h.factor2.level;
    let c0 = chi0.conductor();
    let level = c0
        .max(m2 + w_max.max(0) as u32)
        .max((w_max + 1).max(1) as u32)
        .max(m2)
        .max(1);
    let n = p.pow(level);
    let n2 = p.pow(m2);
    let vol = (p as f64).powi(-(level as i32));
    let chi2b_p = chi2.conj().at_p();
    // cells x = 1 − y with v(x) < M; v(x) ≥ M has y ≡ 1 mod p^{m₂}
    let m_tail = m2.max(1) as i32;
    let mut cells = Vec::new();
    for vx in lo_h.min(0)..m_tail {
        for a in units(p, level) {
            // y = p^w·b
            let (w, b) = if vx > 0 {
                let px = pow_mod(p, vx as u64, n2);
                (0, (1 + n2 - mul_mod(px, a, n2)) % n2)
            } else if vx < 0 {
                let px = pow_mod(p, (-vx) as u64, n2);
                (vx, (px + n2 - a % n2) % n2)
            } else {
                let d = (1 + n - a) % n;
                if d == 0 {
                    continue;
                }
                let (w, b) = split(p, d);
                if w as i32 > w_max {
                    continue;
                }
                (w as i32, b % n2)
            };
            let hv = table.value(w, b);
            if hv == c(0.0, 0.0) {
                continue;
            }
            let x = PadicElement {
                valuation: vx,
                unit: a,
                level,
            };
            let g = hv * chi2b_p.powi(w) * (p as f64).powf(0.5 * w as f64) * chi0.eval(&x)?;
            cells.push((vx, a, g * vol));
        }
    }
    let h_one = table.value(0, 1);
    let c0_p = chi0.at_p();
    let chi0_unit = chi0.unit.clone();
    let tail = |omega: &UnitCharacter| -> Option<LaurentRational> {
        if h_one == c(0.0, 0.0) || !omega.mul(&chi0_unit).is_trivial() {
            return None;
        }
        // H(1)·vol ℤ_p^×·Σ_{v ≥ M} (χ₀(p)X)^v
        let num = LaurentPoly::monomial(h_one * unit_volume(p) * c0_p.powi(m_tail), m_tail);
        Some(LaurentRational::new(p, num, vec![c0_p.inv()]).expect("χ₀(p) ≠ 0"))
    };
    let integral = CharacterIntegral {
        pi,
        pi1,
        xi: chi2.conj().inverse(),
        radius: (p as f64).powf(-sigma),
        eval: options.eval,
    };
    let cells = Cells { level, cells };
    if cells.cells.is_empty() && h_one == c(0.0, 0.0) {
        return Ok(c(0.0, 0.0));
    }
    sum_over_characters(&integral, &cells, 1, tail)
}
