use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::quad::{integrate, Domain, QuadratureSpec};

/// Which half of ℝ^× an atom lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Negative,
}

/// Profile of a single atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Shape {
    /// exp(−1/(1 − u²)) on |u| < 1.
    Bump,
    /// Equal to 1 on |x − c| ≤ flat, falling smoothly to 0 over `halfwidth`.
    Plateau { flat: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub center: f64,
    pub halfwidth: f64,
    pub side: Side,
    pub amplitude: f64,
    #[serde(default = "default_shape")]
    pub shape: Shape,
}

fn default_shape() -> Shape {
    Shape::Bump
}

/// exp(−1/(1−u²)) and its derivative in u.
fn bump(u: f64) -> (f64, f64) {
    let q = 1.0 - u * u;
    if q <= 0.0 {
        return (0.0, 0.0);
    }
    let v = (-1.0 / q).exp();
    (v, v * (-2.0 * u / (q * q)))
}

/// Smooth step: 0 for t ≤ 0, 1 for t ≥ 1, with derivative.
fn step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    let da = a / (t * t);
    let db = -b / ((1.0 - t) * (1.0 - t));
    let s = a + b;
    (a / s, (da * s - a * (da + db)) / (s * s))
}

impl Atom {
    pub fn bump(center: f64, halfwidth: f64, side: Side, amplitude: f64) -> Self {
        Atom {
            center,
            halfwidth,
            side,
            amplitude,
            shape: Shape::Bump,
        }
    }

    pub fn plateau(center: f64, flat: f64, ramp: f64, side: Side, amplitude: f64) -> Self {
        Atom {
            center,
            halfwidth: ramp,
            side,
            amplitude,
            shape: Shape::Plateau { flat },
        }
    }

    /// Support as an interval of |x|.
    pub fn radial_support(&self) -> (f64, f64) {
        let reach = match self.shape {
            Shape::Bump => self.halfwidth,
            Shape::Plateau { flat } => flat + self.halfwidth,
        };
        (self.center - reach, self.center + reach)
    }

    /// Value and derivative with respect to |x|.
    fn radial(&self, ax: f64) -> (f64, f64) {
        match self.shape {
            Shape::Bump => {
                let u = (ax - self.center) / self.halfwidth;
                let (v, d) = bump(u);
                (self.amplitude * v, self.amplitude * d / self.halfwidth)
            }
            Shape::Plateau { flat } => {
                let d = (ax - self.center).abs();
                let t = (flat + self.halfwidth - d) / self.halfwidth;
                let (v, dv) = step(t);
                let sign = if ax >= self.center { -1.0 } else { 1.0 };
                (
                    self.amplitude * v,
                    self.amplitude * dv * sign / self.halfwidth,
                )
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.radial_support();
        let flat_ok = match self.shape {
            Shape::Bump => true,
            Shape::Plateau { flat } => flat >= 0.0,
        };
        if !(self.halfwidth > 0.0
            && lo > 0.0
            && hi.is_finite()
            && flat_ok
            && self.amplitude.is_finite())
        {
            return Err(Error::Invalid(format!(
                "atom {self:?} must have support in (0, ∞) away from 0"
            )));
        }
        Ok(())
    }
}

/// Smooth compactly supported function on ℝ^×: a sum of atoms times an
/// optional power weight |x|^power.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TestFunction {
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub power: f64,
}

impl TestFunction {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            a.validate()?;
        }
        Ok(TestFunction { atoms, power: 0.0 })
    }

    pub fn zero() -> Self {
        TestFunction::default()
    }

    /// A single positive-axis bump.
    pub fn bump(center: f64, halfwidth: f64) -> Self {
        TestFunction::new(vec![Atom::bump(center, halfwidth, Side::Positive, 1.0)])
            .expect("valid bump")
    }

    /// The same function multiplied by |x|^p.
    pub fn with_power(mut self, p: f64) -> Self {
        self.power += p;
        self
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for a in &mut self.atoms {
            a.amplitude *= k;
        }
        self
    }

    /// Pointwise sum (power weights must agree).
    pub fn plus(&self, other: &TestFunction) -> Result<TestFunction> {
        if self.atoms.is_empty() {
            return Ok(other.clone());
        }
        if other.atoms.is_empty() {
            return Ok(self.clone());
        }
        if self.power != other.power {
            return Err(Error::Invalid(
                "cannot add test functions with different power weights".into(),
            ));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Ok(TestFunction {
            atoms,
            power: self.power,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().all(|a| a.amplitude == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).1
    }

    /// (f(x), f'(x)).
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        if x == 0.0 || !x.is_finite() {
            return (0.0, 0.0);
        }
        let side = if x > 0.0 {
            Side::Positive
        } else {
            Side::Negative
        };
        let ax = x.abs();
        let mut v = 0.0;
        let mut d = 0.0;
        for a in self.atoms.iter().filter(|a| a.side == side) {
            let (lo, hi) = a.radial_support();
            if ax > lo && ax < hi {
                let (av, ad) = a.radial(ax);
                v += av;
                d += ad;
            }
        }
        if self.power != 0.0 {
            let w = ax.powf(self.power);
            d = d * w + v * self.power * w / ax;
            v *= w;
        }
        // chain rule for |x| on the negative axis
        if x < 0.0 {
            d = -d;
        }
        (v, d)
    }

    /// Support as a sorted list of disjoint closed intervals of ℝ.
    pub fn support(&self) -> Vec<(f64, f64)> {
        let mut iv: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .filter(|a| a.amplitude != 0.0)
            .map(|a| {
                let (lo, hi) = a.radial_support();
                match a.side {
                    Side::Positive => (lo, hi),
                    Side::Negative => (-hi, -lo),
                }
            })
            .collect();
        merge_intervals(&mut iv)
    }

    /// Interior breakpoints (atom centres and edges) inside [a, b].
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = vec![a, b];
        for at in &self.atoms {
            let s = if at.side == Side::Positive { 1.0 } else { -1.0 };
            let (lo, hi) = at.radial_support();
            for p in [lo, hi, at.center] {
                let x = s * p;
                if x > a && x < b {
                    pts.push(x);
                }
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.dedup();
        pts
    }

    /// ∫ f(x) χ(x) d^×x.
    pub fn mellin(&self, chi: ArchCharacter, spec: &QuadratureSpec) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (lo, hi) in self.support() {
            let pts = self.breakpoints(lo, hi);
            for w in pts.windows(2) {
                let r = integrate(
                    |x| chi.eval(x) * (self.eval(x) / x.abs()),
                    Domain::Finite(w[0], w[1]),
                    spec,
                );
                acc += r.value;
            }
        }
        acc
    }
}

pub(crate) fn merge_intervals(iv: &mut [(f64, f64)]) -> Vec<(f64, f64)> {
    iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &(lo, hi) in iv.iter() {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                last.1 = last.1.max(hi);
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

/// h(y₁, y₂) = f₁(y₁)·conj f₂(y₂). The factors are real-valued, so the
/// conjugation is trivial.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BivariateWeight {
    pub factor1: TestFunction,
    pub factor2: TestFunction,
}

impl BivariateWeight {
    pub fn new(factor1: TestFunction, factor2: TestFunction) -> Self {
        BivariateWeight { factor1, factor2 }
    }

    pub fn eval(&self, y1: f64, y2: f64) -> f64 {
        let a = self.factor1.eval(y1);
        if a == 0.0 {
            return 0.0;
        }
        a * self.factor2.eval(y2)
    }

    pub fn is_zero(&self) -> bool {
        self.factor1.is_zero() || self.factor2.is_zero()
    }

    /// Peak of |h| on a grid over the support.
    pub fn peak(&self) -> f64 {
        let grid_max = |f: &TestFunction| {
            let mut m = 0.0f64;
            for (lo, hi) in f.support() {
                for i in 0..=400 {
                    let x = lo + (hi - lo) * i as f64 / 400.0;
                    m = m.max(f.eval(x).abs());
                }
            }
            m
        };
        grid_max(&self.factor1) * grid_max(&self.factor2)
    }
}

/// sgn^δ |·|^τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchCharacter {
    pub tau: Complex64,
    pub delta: u8,
}

impl ArchCharacter {
    pub fn new(tau: Complex64, delta: u8) -> Self {
        ArchCharacter {
            tau,
            delta: delta & 1,
        }
    }

    pub fn trivial() -> Self {
        ArchCharacter::new(Complex64::new(0.0, 0.0), 0)
    }

    /// |·|^{it}.
    pub fn unitary(t: f64) -> Self {
        ArchCharacter::new(Complex64::new(0.0, t), 0)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = (self.tau * x.abs().ln()).exp();
        if self.delta == 1 && x < 0.0 {
            -v
        } else {
            v
        }
    }

    pub fn compose(&self, other: &ArchCharacter) -> ArchCharacter {
        ArchCharacter::new(self.tau + other.tau, self.delta ^ other.delta)
    }

    pub fn inverse(&self) -> ArchCharacter {
        ArchCharacter::new(-self.tau, self.delta)
    }

    pub fn conj(&self) -> ArchCharacter {
        ArchCharacter::new(self.tau.conj(), self.delta)
    }

    pub fn is_trivial(&self) -> bool {
        self.delta == 0 && self.tau == Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "series")]
pub enum RepVariant {
    Principal { r: Complex64, eta: u8 },
    Discrete { k: u32 },
}

/// A generic irreducible representation of PGL₂(ℝ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchRep {
    pub variant: RepVariant,
    pub theta: f64,
}

impl ArchRep {
    /// Tempered principal series with real spectral parameter r.
    pub fn principal(r: f64, eta: u8) -> Self {
        ArchRep {
            variant: RepVariant::Principal {
                r: Complex64::new(r, 0.0),
                eta: eta & 1,
            },
            theta: 0.0,
        }
    }

    /// Principal or complementary series with complex spectral parameter.
    pub fn principal_complex(r: Complex64, eta: u8) -> Result<Self> {
        if r.im.abs() >= 0.5 {
            return Err(Error::Invalid(format!(
                "|Im r| = {} must be < 1/2",
                r.im.abs()
            )));
        }
        Ok(ArchRep {
            variant: RepVariant::Principal { r, eta: eta & 1 },
            theta: r.im.abs(),
        })
    }

    /// Discrete series of even weight k ≥ 2.
    pub fn discrete(k: u32) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::Invalid(format!(
                "discrete series weight {k} must be even and ≥ 2"
            )));
        }
        Ok(ArchRep {
            variant: RepVariant::Discrete { k },
            theta: 0.0,
        })
    }

    pub fn is_tempered(&self) -> bool {
        self.theta == 0.0
    }
}

/// Vertical contour Re(τ) = sigma truncated at |Im τ| ≤ im_cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub sigma: f64,
    pub im_cutoff: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            sigma: 0.25,
            im_cutoff: 50.0,
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl ContourSpec {
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_cutoff(mut self, im_cutoff: f64) -> Self {
        self.im_cutoff = im_cutoff;
        self
    }
}

/// Value of a truncated contour integral with its tail report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourValue {
    pub value: Complex64,
    /// Estimated magnitude of the discarded part |Im τ| > im_cutoff.
    pub tail_estimate: f64,
    /// Largest integrand magnitude seen on the contour.
    pub peak: f64,
}

impl ContourValue {
    pub fn zero() -> Self {
        ContourValue {
            value: Complex64::new(0.0, 0.0),
            tail_estimate: 0.0,
            peak: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_difference_quotient() {
        let f = TestFunction::new(vec![
            Atom::bump(1.5, 0.5, Side::Positive, 2.0),
            Atom::plateau(2.0, 0.3, 0.4, Side::Negative, 1.0),
        ])
        .unwrap()
        .with_power(0.5);
        for x in [1.2, 1.7, -1.5, -1.8, -2.55] {
            let h = 1e-6;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!(
                (fd - f.derivative(x)).abs() < 1e-7 * (1.0 + fd.abs()),
                "{x}: {fd} {}",
                f.derivative(x)
            );
        }
    }

    #[test]
    fn plateau_is_flat() {
        let f = TestFunction::new(vec![Atom::plateau(3.0, 1.0, 0.5, Side::Positive, 1.0)]).unwrap();
        assert_eq!(f.eval(2.2), 1.0);
        assert_eq!(f.eval(3.9), 1.0);
        assert_eq!(f.eval(4.6), 0.0);
        assert!(f.eval(4.2) > 0.0 && f.eval(4.2) < 1.0);
    }

    #[test]
    fn rejects_support_through_zero() {
        assert!(TestFunction::new(vec![Atom::bump(0.3, 0.5, Side::Positive, 1.0)]).is_err());
    }

    #[test]
    fn character_composition() {
        let a = ArchCharacter::new(Complex64::new(0.2, 1.0), 1);
        let b = ArchCharacter::new(Complex64::new(-0.1, 0.5), 1);
        let c = a.compose(&b);
        let x = -2.5;
        assert!((c.eval(x) - a.eval(x) * b.eval(x)).norm() < 1e-14);
        assert_eq!(c.delta, 0);
    }
}
