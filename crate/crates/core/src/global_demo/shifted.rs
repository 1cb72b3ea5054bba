use serde::{Deserialize, Serialize};

use super::coeffs::divisor_coeffs;
use super::spectral::SpectralDatum;
use super::sum::ExactSum;
use crate::arch_local::TestFunction;
use crate::error::{Error, Result};

/// Where λ_f(n), λ_g(n) come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    /// τ(n) for both forms.
    Divisor,
    /// Hecke eigenvalues of two ingested forms, λ_f(n) = f.hecke[n].
    Hecke {
        f: Box<SpectralDatum>,
        g: Box<SpectralDatum>,
    },
}

/// The weight on n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// V(n/b).
    Scaled(TestFunction),
    /// V((n − X)/Y).
    ShortInterval { x: f64, y: f64, v: TestFunction },
}

impl Window {
    pub fn eval(&self, n: f64, b: u64) -> f64 {
        match self {
            Window::Scaled(v) => v.eval(n / b as f64),
            Window::ShortInterval { x, y, v } => v.eval((n - x) / y),
        }
    }

    /// Integers n ≥ 1 at which the window can be nonzero, as an inclusive range.
    pub fn range(&self, b: u64) -> Option<(u64, u64)> {
        let (scale, shift, v) = match self {
            Window::Scaled(v) => (b as f64, 0.0, v),
            Window::ShortInterval { x, y, v } => (*y, *x, v),
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, c) in v.support() {
            let (p, q) = (shift + scale * a, shift + scale * c);
            if q < 1.0 {
                continue;
            }
            lo = lo.min(p.max(1.0));
            hi = hi.max(q);
        }
        if !(lo <= hi) {
            return None;
        }
        let (lo, hi) = (lo.ceil() as u64, hi.floor() as u64);
        (lo <= hi).then_some((lo, hi))
    }
}

/// Σ_n λ_f(n + b) λ_g(n) w(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftedSumSpec {
    pub source: CoefficientSource,
    pub b: u64,
    pub window: Window,
}

impl ShiftedSumSpec {
    pub fn new(source: CoefficientSource, b: u64, window: Window) -> Result<Self> {
        if b == 0 {
            return Err(Error::Invalid("the shift b must be ≥ 1".into()));
        }
        Ok(ShiftedSumSpec { source, b, window })
    }
}

/// Dense coefficient tables λ_f(n), λ_g(n) for n ≤ N.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl Coefficients {
    pub fn divisor(n: usize) -> Result<Self> {
        let t: Vec<f64> = divisor_coeffs(n)?.into_iter().map(f64::from).collect();
        Ok(Coefficients { f: t.clone(), g: t })
    }

    pub fn for_source(source: &CoefficientSource, n: usize) -> Result<Self> {
        match source {
            CoefficientSource::Divisor => Coefficients::divisor(n.max(1)),
            CoefficientSource::Hecke { f, g } => Ok(Coefficients {
                f: f.dense_hecke(n)?,
                g: g.dense_hecke(n)?,
            }),
        }
    }

    fn available(&self) -> usize {
        self.f.len().min(self.g.len()).saturating_sub(1)
    }
}

/// The exact shifted sum with coefficients supplied by the caller.
pub fn shifted_sum_with(spec: &ShiftedSumSpec, coeffs: &Coefficients) -> Result<f64> {
    let Some((lo, hi)) = spec.window.range(spec.b) else {
        return Ok(0.0);
    };
    let needed = (hi + spec.b) as usize;
    if coeffs.available() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            available: coeffs.available(),
        });
    }
    let mut acc = ExactSum::new();
    for n in lo..=hi {
        let w = spec.window.eval(n as f64, spec.b);
        if w != 0.0 {
            acc.add(coeffs.f[(n + spec.b) as usize] * coeffs.g[n as usize] * w);
        }
    }
    Ok(acc.value())
}

/// Σ_n λ_f(n + b) λ_g(n) w(n), correctly rounded.
pub fn shifted_sum_lhs(spec: &ShiftedSumSpec) -> Result<f64> {
    let Some((_, hi)) = spec.window.range(spec.b) else {
        return Ok(0.0);
    };
    let coeffs = Coefficients::for_source(&spec.source, (hi + spec.b) as usize)?;
    shifted_sum_with(spec, &coeffs)
}
