//! Plancherel inversion of h ↦ h^∨ and H ↦ h^♯.
//!
//! The inner integral over the tempered dual is a quadrature over a
//! [`SpectralGrid`]: Gauss–Legendre nodes in r on [0, R_cut] for each parity
//! of the principal series and the discrete series of even weight k ≤ K_cut.
//! The outer character integral is then taken on a vertical contour, inner
//! integral first.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::gammas::{chi2_bar, gamma_one, log_local_gamma, DiscreteParity};
use super::transforms::{
    SharpMethod, SharpSource, SharpTransform, TransformOptions, UGrid, VeeTransform,
};
use super::types::{
    ArchCharacter, ArchRep, BivariateWeight, ContourSpec, ContourValue, RepVariant,
};
use crate::error::{Error, Result};
use crate::specfun::quad::gauss_legendre;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Normalisation of the Plancherel measure: density `scale · r tanh(πr)` on
/// each parity of the principal series, and mass
/// `scale · discrete_ratio · (k − 1)` at the discrete series of weight k.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Plancherel {
    pub scale: f64,
    pub discrete_ratio: f64,
}

/// Calibrated constants (see `plancherel_density`).
pub const PLANCHEREL: Plancherel = Plancherel {
    scale: 1.0 / (4.0 * PI * PI),
    discrete_ratio: 1.0,
};

impl Default for Plancherel {
    fn default() -> Self {
        PLANCHEREL
    }
}

impl Plancherel {
    pub fn density(&self, pi: &ArchRep) -> f64 {
        match pi.variant {
            RepVariant::Principal { r, .. } => {
                let r = r.re;
                self.scale * r * (PI * r).tanh()
            }
            RepVariant::Discrete { k } => self.scale * self.discrete_ratio * (k as f64 - 1.0),
        }
    }
}

/// Density of the Plancherel measure against dr on each principal-series
/// parity, or the point mass of a discrete-series representation.
pub fn plancherel_density(pi: &ArchRep) -> f64 {
    PLANCHEREL.density(pi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalNode {
    pub r: f64,
    /// Quadrature weight in r (density not included).
    pub weight: f64,
    /// Transform values at parity 0 and 1.
    pub values: [Complex64; 2],
}

/// Values of a transform over the truncated tempered dual.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub r_cut: f64,
    pub k_cut: u32,
    pub principal: Vec<PrincipalNode>,
    pub discrete: Vec<(u32, Complex64)>,
    /// Largest truncation estimate among the tabulated values.
    pub max_tail: f64,
    /// The shift y of an h^∨(π, y) table.
    pub shift: Option<f64>,
}

/// Panel layout for the r-quadrature: unit panels with 16 nodes.
fn r_nodes(r_cut: f64) -> Vec<(f64, f64)> {
    let panels = r_cut.ceil().max(1.0) as usize;
    let width = r_cut / panels as f64;
    let (x, w) = gauss_legendre(16);
    let mut out = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            out.push((
                p as f64 * width + 0.5 * width * (xi + 1.0),
                0.5 * width * wi,
            ));
        }
    }
    out
}

impl SpectralGrid {
    /// Tabulate `f` over the truncated tempered dual.
    pub fn tabulate<F>(r_cut: f64, k_cut: u32, f: F) -> Result<SpectralGrid>
    where
        F: Fn(&ArchRep) -> Result<ContourValue> + Sync,
    {
        if !(r_cut > 0.0) {
            return Err(Error::Invalid(format!(
                "R_cut must be positive, got {r_cut}"
            )));
        }
        let nodes = r_nodes(r_cut);
        let principal_vals: Vec<Result<[ContourValue; 2]>> = nodes
            .par_iter()
            .map(|&(r, _)| Ok([f(&ArchRep::principal(r, 0))?, f(&ArchRep::principal(r, 1))?]))
            .collect();
        let ks: Vec<u32> = (2..=k_cut).step_by(2).collect();
        let discrete_vals: Vec<Result<ContourValue>> =
            ks.par_iter().map(|&k| f(&ArchRep::discrete(k)?)).collect();
        let mut max_tail = 0.0f64;
        let mut principal = Vec::with_capacity(nodes.len());
        for (&(r, weight), v) in nodes.iter().zip(principal_vals) {
            let v = v?;
            max_tail = max_tail.max(v[0].tail_estimate).max(v[1].tail_estimate);
            principal.push(PrincipalNode {
                r,
                weight,
                values: [v[0].value, v[1].value],
            });
        }
        let mut discrete = Vec::with_capacity(ks.len());
        for (&k, v) in ks.iter().zip(discrete_vals) {
            let v = v?;
            max_tail = max_tail.max(v.tail_estimate);
            discrete.push((k, v.value));
        }
        Ok(SpectralGrid {
            r_cut,
            k_cut,
            principal,
            discrete,
            max_tail,
            shift: None,
        })
    }

    /// The grid layout with all values zero.
    pub fn zero(r_cut: f64, k_cut: u32) -> Result<SpectralGrid> {
        SpectralGrid::tabulate(r_cut, k_cut, |_| Ok(ContourValue::zero()))
    }

    /// h^∨(π, shift) over the grid.
    pub fn hvee(
        shift: f64,
        h: &BivariateWeight,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        r_cut: f64,
        k_cut: u32,
    ) -> Result<SpectralGrid> {
        Self::hvee_with(
            shift,
            h,
            pi1,
            pi2,
            contour,
            r_cut,
            k_cut,
            TransformOptions::default(),
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn hvee_with(
        shift: f64,
        h: &BivariateWeight,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        r_cut: f64,
        k_cut: u32,
        options: TransformOptions,
    ) -> Result<SpectralGrid> {
        let vt = VeeTransform::with_options(shift, h, pi1, pi2, contour, options)?;
        let mut grid = SpectralGrid::tabulate(r_cut, k_cut, |pi| vt.eval(pi))?;
        grid.shift = Some(shift);
        Ok(grid)
    }

    /// h^♯(π, χ₀) over the grid (contour evaluation throughout).
    #[allow(clippy::too_many_arguments)]
    pub fn hsharp_with(
        source: SharpSource<'_>,
        chi0: &ArchCharacter,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        r_cut: f64,
        k_cut: u32,
        options: TransformOptions,
    ) -> Result<SpectralGrid> {
        let st = SharpTransform::new(
            source,
            chi0,
            pi1,
            pi2,
            contour,
            SharpMethod::Contour,
            options,
        )?;
        SpectralGrid::tabulate(r_cut, k_cut, |pi| st.eval(pi))
    }

    pub fn hsharp(
        chi0: &ArchCharacter,
        h: &BivariateWeight,
        pi1: &ArchRep,
        pi2: &ArchRep,
        contour: &ContourSpec,
        r_cut: f64,
        k_cut: u32,
    ) -> Result<SpectralGrid> {
        Self::hsharp_with(
            SharpSource::Weight(h),
            chi0,
            pi1,
            pi2,
            contour,
            r_cut,
            k_cut,
            TransformOptions::default(),
        )
    }

    /// The same grid restricted to r ≤ r_cut' and k ≤ k_cut'. Only exact
    /// when r_cut' is a whole number of unit panels.
    pub fn truncated(&self, r_cut: f64, k_cut: u32) -> SpectralGrid {
        SpectralGrid {
            r_cut,
            k_cut,
            principal: self
                .principal
                .iter()
                .filter(|n| n.r < r_cut)
                .copied()
                .collect(),
            discrete: self
                .discrete
                .iter()
                .filter(|(k, _)| *k <= k_cut)
                .copied()
                .collect(),
            max_tail: self.max_tail,
            shift: self.shift,
        }
    }

    fn is_zero(&self) -> bool {
        self.principal.iter().all(|n| n.values == [c(0.0, 0.0); 2])
            && self.discrete.iter().all(|(_, v)| *v == c(0.0, 0.0))
    }
}

/// Settings of the inversion: Plancherel normalisation and γ-factor variant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InversionOptions {
    pub plancherel: Plancherel,
    pub discrete: DiscreteParity,
}

/// ½ Σ_δ ∫ χ_{τ,δ}(x) γ(1, π₁ ⊗ χ̄₂ ⊗ χ^{−1}) ∫ F(π) γ(½, π ⊗ χ) dπ du/2π.
fn outer_integral(
    x: f64,
    grid: &SpectralGrid,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
    options: &InversionOptions,
) -> Result<ContourValue> {
    let chi2b = chi2_bar(pi2)?;
    // grid frequencies: log|x| from χ(x) plus the γ-factor phases
    let ug = UGrid::new(contour.sigma, contour.im_cutoff, x.abs().ln().abs());
    let mut weighted: Vec<(ArchRep, [Complex64; 2])> = Vec::new();
    for n in &grid.principal {
        let d = options.plancherel.density(&ArchRep::principal(n.r, 0)) * n.weight;
        weighted.push((
            ArchRep::principal(n.r, 0),
            [n.values[0] * d, n.values[1] * d],
        ));
    }
    for &(k, v) in &grid.discrete {
        let pi = ArchRep::discrete(k)?;
        let d = options.plancherel.density(&pi);
        weighted.push((pi, [v * d, c(0.0, 0.0)]));
    }
    let mut acc = c(0.0, 0.0);
    let mut mags = vec![0.0; ug.nodes.len()];
    let lx = x.abs().ln();
    for k in 0..ug.nodes.len() {
        let tau = ug.tau(k);
        // γ(½, π_{r,η} ⊗ χ_{τ,δ}) depends on η + δ only; D_k ⊗ sgn ≅ D_k
        let mut inner = [c(0.0, 0.0); 2];
        for (pi, vals) in &weighted {
            match pi.variant {
                RepVariant::Principal { .. } => {
                    let mut g = [c(0.0, 0.0); 2];
                    for m in 0..2u8 {
                        if let Some(lg) =
                            log_local_gamma(c(0.5, 0.0), pi, tau, m, options.discrete)?
                        {
                            g[m as usize] = lg.exp();
                        }
                    }
                    inner[0] += vals[0] * g[0] + vals[1] * g[1];
                    inner[1] += vals[1] * g[0] + vals[0] * g[1];
                }
                RepVariant::Discrete { .. } => {
                    if vals[0] == c(0.0, 0.0) {
                        continue;
                    }
                    for delta in 0..2u8 {
                        if let Some(lg) =
                            log_local_gamma(c(0.5, 0.0), pi, tau, delta, options.discrete)?
                        {
                            inner[delta as usize] += vals[0] * lg.exp();
                        }
                    }
                }
            }
        }
        let chi_abs = (tau * lx).exp();
        for delta in 0..2u8 {
            let chi_x = if delta == 1 && x < 0.0 {
                -chi_abs
            } else {
                chi_abs
            };
            let g1 = gamma_one(pi1, &chi2b, tau, delta, options.discrete)?;
            let term = chi_x * g1 * inner[delta as usize];
            mags[k] += term.norm();
            acc += term * ug.weights[k];
        }
    }
    let (peak, tail) = ug.tail(&mags);
    Ok(ContourValue {
        value: acc * (0.5 / (2.0 * PI)),
        tail_estimate: 0.5 * tail,
        peak: 0.5 * peak / (2.0 * PI),
    })
}

/// Reconstruct h(y₁, y₂) from h^∨(·, y₁ − y₂) over the tempered dual.
pub fn invert_h(
    y1: f64,
    y2: f64,
    grid: &SpectralGrid,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
) -> Result<ContourValue> {
    invert_h_with(
        y1,
        y2,
        grid,
        pi1,
        pi2,
        contour,
        &InversionOptions::default(),
    )
}

pub fn invert_h_with(
    y1: f64,
    y2: f64,
    grid: &SpectralGrid,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
    options: &InversionOptions,
) -> Result<ContourValue> {
    if y1 == 0.0 || y2 == 0.0 {
        return Err(Error::Invalid("invert_h requires y₁, y₂ ≠ 0".into()));
    }
    if y1 == y2 {
        return Err(Error::Invalid("invert_h requires y₁ ≠ y₂".into()));
    }
    if let Some(shift) = grid.shift {
        if (y1 - y2 - shift).abs() > 1e-12 * shift.abs().max(1.0) {
            return Err(Error::Invalid(format!(
                "grid tabulates h^∨(π, {shift}) but y₁ − y₂ = {}",
                y1 - y2
            )));
        }
    }
    let chi2b = chi2_bar(pi2)?;
    let lo = match pi1.variant {
        RepVariant::Principal { r, .. } => r.im.abs(),
        _ => 0.0,
    } + match pi2.variant {
        RepVariant::Principal { r, .. } => r.im.abs(),
        _ => 0.0,
    };
    if !(contour.sigma > lo && contour.sigma < 0.5) {
        return Err(Error::StripViolation {
            sigma: contour.sigma,
            lo,
            hi: 0.5,
        });
    }
    if grid.is_zero() {
        return Ok(ContourValue::zero());
    }
    let pref = chi2b.eval(y1 / y2) * ((y1 * y2).abs().sqrt() / (y1 - y2).abs());
    let v = outer_integral(1.0 - y2 / y1, grid, pi1, pi2, contour, options)?;
    Ok(ContourValue {
        value: v.value * pref,
        tail_estimate: v.tail_estimate * pref.norm(),
        peak: v.peak * pref.norm(),
    })
}

/// Reconstruct H(y, χ₀) from h^♯(·, χ₀) over the tempered dual.
#[allow(non_snake_case)]
pub fn invert_H(
    y: f64,
    chi0: &ArchCharacter,
    grid: &SpectralGrid,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
) -> Result<ContourValue> {
    invert_H_with(
        y,
        chi0,
        grid,
        pi1,
        pi2,
        contour,
        &InversionOptions::default(),
    )
}

#[allow(non_snake_case)]
pub fn invert_H_with(
    y: f64,
    chi0: &ArchCharacter,
    grid: &SpectralGrid,
    pi1: &ArchRep,
    pi2: &ArchRep,
    contour: &ContourSpec,
    options: &InversionOptions,
) -> Result<ContourValue> {
    if y == 0.0 || y == 1.0 {
        return Err(Error::Invalid("invert_H requires y ∉ {0, 1}".into()));
    }
    if chi0.tau.re <= -0.5 {
        return Err(Error::StripViolation {
            sigma: chi0.tau.re,
            lo: -0.5,
            hi: f64::INFINITY,
        });
    }
    let chi2b = chi2_bar(pi2)?;
    let lo = match pi1.variant {
        RepVariant::Principal { r, .. } => r.im.abs(),
        _ => 0.0,
    };
    if !(contour.sigma > lo && contour.sigma < 0.5) {
        return Err(Error::StripViolation {
            sigma: contour.sigma,
            lo,
            hi: 0.5,
        });
    }
    if grid.is_zero() {
        return Ok(ContourValue::zero());
    }
    let pref = chi2b.eval(y).inv() * (y.abs().sqrt() / (1.0 - y).abs()) / chi0.eval(1.0 - y);
    let v = outer_integral(1.0 - y, grid, pi1, pi2, contour, options)?;
    Ok(ContourValue {
        value: v.value * pref,
        tail_estimate: v.tail_estimate * pref.norm(),
        peak: v.peak * pref.norm(),
    })
}
