//! Forward transforms over ℝ: H(y, χ), h^♭, w(η, χ), h^∨ and h^♯.
//!
//! The contour integrals are evaluated on a fixed composite Gauss–Legendre
//! grid in u = Im τ. The Mellin data T_δ(τ), S_δ(τ) of the inner integrals
//! are tabulated once per weight and reused for every π, so a sweep over the
//! tempered dual costs only the γ(½, π ⊗ χ) evaluations.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gammas::{chi2_bar, gamma_one, log_local_gamma, DiscreteParity};
use super::kernel::residue_sharp;
use super::types::{
    merge_intervals, ArchCharacter, ArchRep, BivariateWeight, ContourSpec, ContourValue,
    RepVariant, TestFunction,
};
use crate::error::{Error, Result};
use crate::specfun::bessel_k;
use crate::specfun::quad::{gauss_legendre, integrate, Domain, QuadratureSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const GL_ORDER: usize = 16;

/// Intersection of two sorted interval lists.
fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo, hi));
            }
        }
    }
    merge_intervals(&mut out)
}

/// Image of an interval list under x ↦ αx + β.
fn affine(iv: &[(f64, f64)], alpha: f64, beta: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = iv
        .iter()
        .map(|&(lo, hi)| {
            let p = alpha * lo + beta;
            let q = alpha * hi + beta;
            (p.min(q), p.max(q))
        })
        .collect();
    merge_intervals(&mut out)
}

fn breakpoints_mapped(f: &TestFunction, alpha: f64, beta: f64) -> Vec<f64> {
    f.breakpoints(f64::NEG_INFINITY, f64::INFINITY)
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| alpha * x + beta)
        .collect()
}

/// Integrate f over the union of intervals, splitting at the breakpoints.
fn integrate_pieces<F: Fn(f64) -> Complex64>(
    f: F,
    iv: &[(f64, f64)],
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> (Complex64, bool) {
    let mut acc = c(0.0, 0.0);
    let mut ok = true;
    for &(lo, hi) in iv {
        let mut pts = vec![lo, hi];
        pts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        for w in pts.windows(2) {
            let r = integrate(&f, Domain::Finite(w[0], w[1]), spec);
            ok &= r.converged;
            acc += r.value;
        }
    }
    (acc, ok)
}

/// H(y, χ) = ∫ h(z, yz) χ(z) d^×z.
#[allow(non_snake_case)]
pub fn H_of(y: f64, chi0: &ArchCharacter, h: &BivariateWeight) -> Result<Complex64> {
    H_of_with(y, chi0, h, &QuadratureSpec::default())
}

#[allow(non_snake_case)]
pub fn H_of_with(
    y: f64,
    chi0: &ArchCharacter,
    h: &BivariateWeight,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if y == 0.0 || !y.is_finite() {
        return Err(Error::Invalid(format!("H(y, χ) requires y ≠ 0, got {y}")));
    }
    if h.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let iv = intersect(
        &h.factor1.support(),
        &affine(&h.factor2.support(), 1.0 / y, 0.0),
    );
    if iv.is_empty() {
        return Ok(c(0.0, 0.0));
    }
    let mut breaks = breakpoints_mapped(&h.factor1, 1.0, 0.0);
    breaks.extend(breakpoints_mapped(&h.factor2, 1.0 / y, 0.0));
    let (v, ok) = integrate_pieces(
        |z| chi0.eval(z) * (h.eval(z, y * z) / z.abs()),
        &iv,
        &breaks,
        spec,
    );
    if !ok {
        return Err(Error::Invalid(
            "quadrature tolerance not met in H(y, χ)".into(),
        ));
    }
    Ok(v)
}

/// h^♭(χ, y) = ∫ h(z, yz) χ(z) d^×z.
pub fn h_flat(chi: &ArchCharacter, y: f64, h: &BivariateWeight) -> Result<Complex64> {
    H_of(y, chi, h)
}

/// Support of y ↦ H(y, χ) as a list of intervals.
#[allow(non_snake_case)]
pub fn H_support(h: &BivariateWeight) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a, b) in &h.factor1.support() {
        for &(p, q) in &h.factor2.support() {
            let cands = [p / a, p / b, q / a, q / b];
            let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            out.push((lo, hi));
        }
    }
    merge_intervals(&mut out)
}

/// w(η, χ) = ∫ H(y, χ) η(y) d^×y.
pub fn w_eta_chi(
    eta: &ArchCharacter,
    chi: &ArchCharacter,
    h: &BivariateWeight,
) -> Result<Complex64> {
    if eta.tau.re != 0.0 {
        return Err(Error::Invalid("η must be unitary".into()));
    }
    if h.is_zero() {
        return Ok(c(0.0, 0.0));
    }
    let spec = QuadratureSpec::default().with_tol(1e-12, 1e-10);
    let inner = QuadratureSpec::default();
    let err = std::cell::RefCell::new(None);
    let f = |y: f64| match H_of_with(y, chi, h, &inner) {
        Ok(v) => v * eta.eval(y) / y.abs(),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            c(0.0, 0.0)
        }
    };
    let (v, ok) = integrate_pieces(f, &H_support(h), &[], &spec);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    if !ok {
        return Err(Error::Invalid(
            "quadrature tolerance not met in w(η, χ)".into(),
        ));
    }
    Ok(v)
}

/// W(a(y)) = 2|y|^{½} K_{ir}(2π|y|).
pub fn whittaker_spherical(r: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Err(Error::Invalid("whittaker_spherical requires y ≠ 0".into()));
    }
    let ay = y.abs();
    Ok(2.0 * ay.sqrt() * bessel_k(c(0.0, r), 2.0 * PI * ay)?.re)
}

/// Tabulated Mellin transform x ↦ ∫ g(x) sgn(x)^p |x|^s d^×x of a compactly
/// supported function on ℝ, as a quadrature sum in v = log|x|, plus an
/// exact polynomial piece when the support contains x = 0.
#[derive(Debug, Clone, Default)]
pub struct MellinData {
    v: Vec<f64>,
    wg: Vec<Complex64>,
    negative: Vec<bool>,
    origin: Option<(f64, Vec<Complex64>)>,
}

/// Taylor expansion of g on [−ε, ε] from Chebyshev interpolation.
fn taylor_at_zero<G: Fn(f64) -> Complex64>(g: &G, eps: f64, degree: usize) -> Vec<Complex64> {
    let n = degree + 1;
    let nodes: Vec<f64> = (0..n)
        .map(|j| (PI * (j as f64 + 0.5) / n as f64).cos())
        .collect();
    let vals: Vec<Complex64> = nodes.iter().map(|&u| g(eps * u)).collect();
    // Newton divided differences in the scaled variable u = x/ε, then expand.
    let mut dd = vals.clone();
    for k in 1..n {
        for j in (k..n).rev() {
            dd[j] = (dd[j] - dd[j - 1]) / (nodes[j] - nodes[j - k]);
        }
    }
    let mut poly = vec![c(0.0, 0.0); n];
    for k in (0..n).rev() {
        // poly = poly·(u − nodes[k]) + dd[k]
        let mut next = vec![c(0.0, 0.0); n];
        for j in 0..n {
            if j + 1 < n {
                next[j + 1] += poly[j];
            }
            next[j] -= poly[j] * nodes[k];
        }
        next[0] += dd[k];
        poly = next;
    }
    let mut scale = 1.0;
    for p in poly.iter_mut() {
        *p /= scale;
        scale *= eps;
    }
    poly
}

impl MellinData {
    /// Tabulate g on the given intervals (each either avoiding 0 or, for at
    /// most one, containing it). `max_u` bounds |Im s| at which the data will
    /// be evaluated; it sets the panel width.
    pub fn build<G: Fn(f64) -> Complex64>(
        g: G,
        intervals: &[(f64, f64)],
        breaks: &[f64],
        max_u: f64,
    ) -> MellinData {
        let (gx, gw) = gauss_legendre(GL_ORDER);
        let mut data = MellinData::default();
        let eps: f64 = 0.01;
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in intervals {
            if lo < 0.0 && hi > 0.0 {
                let e = eps.min(0.25 * (-lo).min(hi));
                let coeffs = taylor_at_zero(&g, e, 11);
                data.origin = Some((e, coeffs));
                pieces.push((lo, -e));
                pieces.push((e, hi));
            } else {
                pieces.push((lo, hi));
            }
        }
        for (lo, hi) in pieces {
            let negative = hi <= 0.0;
            let (a, b) = if negative { (-hi, -lo) } else { (lo, hi) };
            let mut pts: Vec<f64> = vec![a.ln(), b.ln()];
            for &x in breaks {
                let ax = x.abs();
                if (x < 0.0) == negative && ax > a && ax < b {
                    pts.push(ax.ln());
                }
            }
            pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
            pts.dedup();
            for w in pts.windows(2) {
                let width = w[1] - w[0];
                let panels = ((width * max_u / 10.0).ceil() as usize).max(12);
                let pw = width / panels as f64;
                for p in 0..panels {
                    let base = w[0] + p as f64 * pw;
                    for (xi, wi) in gx.iter().zip(&gw) {
                        let v = base + 0.5 * pw * (xi + 1.0);
                        let x = if negative { -v.exp() } else { v.exp() };
                        let val = g(x);
                        if val != c(0.0, 0.0) {
                            data.v.push(v);
                            data.wg.push(val * (0.5 * pw * wi));
                            data.negative.push(negative);
                        }
                    }
                }
            }
        }
        data
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty() && self.origin.is_none()
    }

    /// Largest |log|x|| among the nodes.
    pub fn max_log(&self) -> f64 {
        let m = self.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        match &self.origin {
            Some((e, _)) => m.max(e.ln().abs()),
            None => m,
        }
    }

    /// ∫ g(x) sgn(x)^parity |x|^s d^×x.
    pub fn eval(&self, parity: u8, s: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for ((v, wg), neg) in self.v.iter().zip(&self.wg).zip(&self.negative) {
            let term = *wg * (s * *v).exp();
            if *neg && parity & 1 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        if let Some((e, coeffs)) = &self.origin {
            let le = e.ln();
            for (k, ck) in coeffs.iter().enumerate() {
                let same = (k + parity as usize).is_multiple_of(2);
                if same {
                    let sk = s + k as f64;
                    acc += *ck * 2.0 * (sk * le).exp() / sk;
                }
            }
        }
        acc
    }
}

/// Composite Gauss–Legendre grid on [−U, U] in u = Im τ.
#[derive(Debug, Clone)]
pub(crate) struct UGrid {
    pub sigma: f64,
    pub cutoff: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panel: f64,
}

impl UGrid {
    pub fn new(sigma: f64, cutoff: f64, max_log: f64) -> UGrid {
        let freq = max_log + 2.0 * (2.0 + cutoff).ln() + 1.0;
        // poles of the γ-factors sit at distance min(σ, ½ − σ) from the line
        let target = (14.0 / freq).min(2.0 * sigma.min(0.5 - sigma)).min(0.5);
        let panels = ((2.0 * cutoff / target).ceil() as usize).max(2);
        let panel = 2.0 * cutoff / panels as f64;
        let (gx, gw) = gauss_legendre(GL_ORDER);
        let mut nodes = Vec::with_capacity(panels * GL_ORDER);
        let mut weights = Vec::with_capacity(panels * GL_ORDER);
        for p in 0..panels {
            let base = -cutoff + p as f64 * panel;
            for (xi, wi) in gx.iter().zip(&gw) {
                nodes.push(base + 0.5 * panel * (xi + 1.0));
                weights.push(0.5 * panel * wi);
            }
        }
        UGrid {
            sigma,
            cutoff,
            nodes,
            weights,
            panel,
        }
    }

    pub fn tau(&self, k: usize) -> Complex64 {
        c(self.sigma, self.nodes[k])
    }

    /// Summarise integrand magnitudes |F(u_k)| into a truncation report.
    pub fn tail(&self, mags: &[f64]) -> (f64, f64) {
        let peak = mags.iter().cloned().fold(0.0, f64::max);
        let delta = (self.cutoff / 10.0).max(self.panel);
        let mut tail = 0.0;
        for side in [-1.0, 1.0] {
            let mut m1 = 0.0f64;
            let mut m2 = 0.0f64;
            for (u, m) in self.nodes.iter().zip(mags) {
                let d = self.cutoff - side * u;
                if d <= delta {
                    m2 = m2.max(*m);
                } else if d <= 2.0 * delta {
                    m1 = m1.max(*m);
                }
            }
            if m2 == 0.0 {
                continue;
            }
            let lambda = if m1 > m2 { (m1 / m2).ln() / delta } else { 0.0 };
            tail += if lambda > 1.0 / self.cutoff {
                m2 / lambda
            } else {
                m2 * self.cutoff
            };
        }
        (peak, tail / (2.0 * PI))
    }
}

fn strip_check(sigma: f64, lo: f64, hi: f64) -> Result<()> {
    if !(sigma > lo && sigma < hi) {
        return Err(Error::StripViolation { sigma, lo, hi });
    }
    Ok(())
}

fn principal_theta(pi: &ArchRep) -> f64 {
    match pi.variant {
        RepVariant::Principal { r, .. } => r.im.abs().max(pi.theta),
        RepVariant::Discrete { .. } => 0.0,
    }
}

/// Sum ½ Σ_δ ∫ γ(½, π ⊗ χ_{τ,δ}) · pre_δ(u) du/2π over the grid.
fn contour_sum(
    grid: &UGrid,
    pre: &[Vec<Complex64>; 2],
    pi: &ArchRep,
    discrete: DiscreteParity,
) -> Result<ContourValue> {
    let mut acc = c(0.0, 0.0);
    let mut mags = vec![0.0; grid.nodes.len()];
    for delta in 0..2u8 {
        let row = &pre[delta as usize];
        if row.iter().all(|z| *z == c(0.0, 0.0)) {
            continue;
        }
        for (k, p) in row.iter().enumerate() {
            if *p == c(0.0, 0.0) {
                continue;
            }
            let tau = grid.tau(k);
            let Some(lg) = log_local_gamma(c(0.5, 0.0), pi, tau, delta, discrete)? else {
                continue;
            };
            let term = *p * lg.exp();
            mags[k] += term.norm() / grid.weights[k];
            acc += term;
        }
    }
    let (peak, tail) = grid.tail(&mags);
    Ok(ContourValue {
        value: acc * (0.5 / (2.0 * PI)),
        tail_estimate: 0.5 * tail,
        peak: 0.5 * peak / (2.0 * PI),
    })
}

/// Options shared by the contour transforms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransformOptions {
    pub discrete: DiscreteParity,
}

/// h^∨(·, y) for a fixed weight, prepared for evaluation at many π.
#[derive(Debug, Clone)]
pub struct VeeTransform {
    grid: UGrid,
    pre: [Vec<Complex64>; 2],
    options: TransformOptions,
    max_theta: f64,
}

impl VeeTransform {
    pub fn new(
        y: f64,
        h: &BivariateWeight,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
    ) -> Result<Self> {
        Self::with_options(y, h, pi1, pi2, contour, TransformOptions::default())
    }

    pub fn with_options(
        y: f64,
        h: &BivariateWeight,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        options: TransformOptions,
    ) -> Result<Self> {
        if y == 0.0 || !y.is_finite() {
            return Err(Error::Invalid(format!("h^∨(π, y) requires y ≠ 0, got {y}")));
        }
        let chi2b = chi2_bar(pi2)?;
        let lo = principal_theta(pi1) + principal_theta(pi2);
        strip_check(contour.sigma, lo, 0.5)?;
        let sigma = contour.sigma;
        let max_theta = 0.5 - sigma;
        // t ∈ supp f₁/y ∩ (1 + supp f₂/y)
        let iv = intersect(
            &affine(&h.factor1.support(), 1.0 / y, 0.0),
            &affine(&h.factor2.support(), 1.0 / y, 1.0),
        );
        let mut breaks = breakpoints_mapped(&h.factor1, 1.0 / y, 0.0);
        breaks.extend(breakpoints_mapped(&h.factor2, 1.0 / y, 1.0));
        let g = |t: f64| {
            let v = h.eval(y * t, y * (t - 1.0));
            if v == 0.0 {
                return c(0.0, 0.0);
            }
            let q = (t - 1.0) / t;
            chi2b.eval(q) * (v / q.abs().sqrt())
        };
        let data = if h.is_zero() {
            MellinData::default()
        } else {
            MellinData::build(g, &iv, &breaks, contour.im_cutoff)
        };
        let grid = UGrid::new(sigma, contour.im_cutoff, data.max_log());
        let xi = chi2b.inverse();
        let mut pre = [
            vec![c(0.0, 0.0); grid.nodes.len()],
            vec![c(0.0, 0.0); grid.nodes.len()],
        ];
        if !data.is_empty() {
            for delta in 0..2u8 {
                for k in 0..grid.nodes.len() {
                    let tau = grid.tau(k);
                    let t_val = data.eval(delta, -tau);
                    let g1 = gamma_one(pi1, &xi, tau, delta, options.discrete)?;
                    pre[delta as usize][k] = t_val * g1 * grid.weights[k];
                }
            }
        }
        Ok(VeeTransform {
            grid,
            pre,
            options,
            max_theta,
        })
    }

    pub fn eval(&self, pi: &ArchRep) -> Result<ContourValue> {
        if principal_theta(pi) >= self.max_theta {
            return Err(Error::StripViolation {
                sigma: self.grid.sigma,
                lo: 0.0,
                hi: 0.5 - principal_theta(pi),
            });
        }
        contour_sum(&self.grid, &self.pre, pi, self.options.discrete)
    }
}

/// h^∨(π, y) by the contour formula, with a truncation report.
pub fn h_vee(
    pi: &ArchRep,
    y: f64,
    h: &BivariateWeight,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
) -> Result<ContourValue> {
    VeeTransform::new(y, h, pi1, pi2, contour)?.eval(pi)
}

/// How h^♯ is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SharpMethod {
    /// Residue kernel when applicable, contour otherwise.
    #[default]
    Auto,
    Contour,
    Residue,
}

/// Source of the function y ↦ H(y, χ₀) entering h^♯.
#[derive(Clone)]
pub enum SharpSource<'a> {
    /// H computed from a bivariate weight.
    Weight(&'a BivariateWeight),
    /// H(y) = φ(y)|y|^{½} given directly through φ.
    Phi(&'a TestFunction),
}

impl SharpSource<'_> {
    fn support(&self) -> Vec<(f64, f64)> {
        match self {
            SharpSource::Weight(h) => H_support(h),
            SharpSource::Phi(phi) => phi.support(),
        }
    }

    fn breaks(&self) -> Vec<f64> {
        match self {
            SharpSource::Weight(_) => Vec::new(),
            SharpSource::Phi(phi) => breakpoints_mapped(phi, 1.0, 0.0),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            SharpSource::Weight(h) => h.is_zero(),
            SharpSource::Phi(phi) => phi.is_zero(),
        }
    }

    fn eval(&self, y: f64, chi0: &ArchCharacter) -> Result<Complex64> {
        match self {
            SharpSource::Weight(h) => H_of(y, chi0, h),
            SharpSource::Phi(phi) => Ok(c(phi.eval(y) * y.abs().sqrt(), 0.0)),
        }
    }
}

/// Which single appendix case a support list falls in, if any.
pub(crate) fn single_case(support: &[(f64, f64)]) -> Option<u8> {
    let case = |lo: f64, hi: f64| {
        if lo > 0.0 && hi < 1.0 {
            Some(0)
        } else if lo > 1.0 {
            Some(1)
        } else if hi < 0.0 {
            Some(2)
        } else {
            None
        }
    };
    let mut found = None;
    for &(lo, hi) in support {
        let k = case(lo, hi)?;
        if found.is_some_and(|f| f != k) {
            return None;
        }
        found = Some(k);
    }
    found
}

/// h^♯(·, χ₀) for a fixed weight, prepared for evaluation at many π.
#[derive(Clone)]
pub struct SharpTransform<'a> {
    source: SharpSource<'a>,
    chi0: ArchCharacter,
    grid: UGrid,
    pre: [Vec<Complex64>; 2],
    options: TransformOptions,
    residue_ok: bool,
    method: SharpMethod,
    max_theta: f64,
}

impl<'a> SharpTransform<'a> {
    pub fn new(
        source: SharpSource<'a>,
        chi0: &ArchCharacter,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        method: SharpMethod,
        options: TransformOptions,
    ) -> Result<Self> {
        let chi2b = chi2_bar(pi2)?;
        strip_check(contour.sigma, principal_theta(pi1), 0.5)?;
        if chi0.tau.re <= -0.5 {
            return Err(Error::StripViolation {
                sigma: chi0.tau.re,
                lo: -0.5,
                hi: f64::INFINITY,
            });
        }
        let sigma = contour.sigma;
        let support = source.support();
        let trivial_pair = |p: &ArchRep| {
            p.variant
                == RepVariant::Principal {
                    r: c(0.0, 0.0),
                    eta: 0,
                }
        };
        let residue_ok = chi0.is_trivial()
            && trivial_pair(pi1)
            && trivial_pair(pi2)
            && matches!(single_case(&support), Some(0 | 1));
        if method == SharpMethod::Residue && !residue_ok {
            return Err(Error::Invalid(
                "residue evaluation needs trivial χ₀, π₁ = π₂ = π(0, even) and support in a single case".into(),
            ));
        }
        let use_contour = match method {
            SharpMethod::Contour => true,
            SharpMethod::Residue => false,
            SharpMethod::Auto => !residue_ok,
        };
        let mut grid = UGrid::new(sigma, contour.im_cutoff, 0.0);
        let mut pre = [Vec::new(), Vec::new()];
        if use_contour && !source.is_zero() {
            // x = 1 − y
            let iv = affine(&support, -1.0, 1.0);
            let breaks: Vec<f64> = source.breaks().iter().map(|b| 1.0 - b).collect();
            let err = std::cell::RefCell::new(None);
            let g = |x: f64| {
                let y = 1.0 - x;
                match source.eval(y, chi0) {
                    Ok(hv) => hv * chi2b.eval(y) / y.abs().sqrt(),
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        c(0.0, 0.0)
                    }
                }
            };
            let data = MellinData::build(g, &iv, &breaks, contour.im_cutoff);
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            grid = UGrid::new(sigma, contour.im_cutoff, data.max_log());
            let xi = chi2b.inverse();
            pre = [
                vec![c(0.0, 0.0); grid.nodes.len()],
                vec![c(0.0, 0.0); grid.nodes.len()],
            ];
            for delta in 0..2u8 {
                for k in 0..grid.nodes.len() {
                    let tau = grid.tau(k);
                    let s_val = data.eval((delta + chi0.delta) & 1, tau + chi0.tau);
                    let g1 = gamma_one(pi1, &xi, tau, delta, options.discrete)?;
                    pre[delta as usize][k] = s_val * g1 * grid.weights[k];
                }
            }
        }
        Ok(SharpTransform {
            source,
            chi0: *chi0,
            grid,
            pre,
            options,
            residue_ok,
            method: if use_contour {
                SharpMethod::Contour
            } else {
                SharpMethod::Residue
            },
            max_theta: 0.5 - sigma,
        })
    }

    /// The method actually used.
    pub fn method(&self) -> SharpMethod {
        self.method
    }

    pub fn eval(&self, pi: &ArchRep) -> Result<ContourValue> {
        if principal_theta(pi) >= self.max_theta {
            return Err(Error::StripViolation {
                sigma: self.grid.sigma,
                lo: 0.0,
                hi: 0.5 - principal_theta(pi),
            });
        }
        if self.source.is_zero() {
            return Ok(ContourValue::zero());
        }
        let residue_pi = match pi.variant {
            RepVariant::Principal { r, eta: 0 } if r.im == 0.0 => Some(r.re),
            _ => None,
        };
        if self.method == SharpMethod::Residue {
            if let Some(r) = residue_pi.filter(|_| self.residue_ok) {
                return self.eval_residue(r);
            }
            return Err(Error::Invalid(
                "residue evaluation needs π = π(r, even) with real r".into(),
            ));
        }
        contour_sum(&self.grid, &self.pre, pi, self.options.discrete)
    }

    fn eval_residue(&self, r: f64) -> Result<ContourValue> {
        let support = self.source.support();
        let mut atoms = Vec::new();
        for (lo, hi) in support {
            let side = if lo > 0.0 {
                super::types::Side::Positive
            } else {
                super::types::Side::Negative
            };
            let (a, b) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
            atoms.push(super::types::Atom::bump(
                0.5 * (a + b),
                0.5 * (b - a),
                side,
                1.0,
            ));
        }
        // only the support/breakpoints of this stand-in are used
        let mut shape = TestFunction { atoms, power: 0.0 };
        if let SharpSource::Phi(phi) = &self.source {
            shape = (*phi).clone();
        }
        let chi0 = self.chi0;
        let err = std::cell::RefCell::new(None);
        let phi = |y: f64| match self.source.eval(y, &chi0) {
            Ok(v) => v.re / y.abs().sqrt(),
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let v = residue_sharp(
            &shape,
            phi,
            r,
            &QuadratureSpec::default().with_tol(1e-14, 1e-12),
        )?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(ContourValue {
            value: v,
            tail_estimate: 0.0,
            peak: v.norm(),
        })
    }
}

/// h^♯(π, χ₀) with the residue kernel used automatically when it applies.
pub fn h_sharp(
    pi: &ArchRep,
    chi0: &ArchCharacter,
    h: &BivariateWeight,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
) -> Result<ContourValue> {
    SharpTransform::new(
        SharpSource::Weight(h),
        chi0,
        pi1,
        pi2,
        contour,
        SharpMethod::Auto,
        TransformOptions::default(),
    )?
    .eval(pi)
}
