use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coeffs::{divisors, EULER_GAMMA};
use super::shifted::{shifted_sum_with, CoefficientSource, Coefficients, ShiftedSumSpec, Window};
use super::sum::exact_sum;
use crate::arch_local::TestFunction;
use crate::error::{Error, Result};
use crate::specfun::{integrate_real, Domain, QuadratureSpec};

const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
const ZETA2_D1: f64 = -0.937_548_254_315_843_8;
const ZETA2_D2: f64 = 1.989_280_234_298_901_023_420_858_687_42;

/// Σ_q c_q(b) q^{−2} (log q)^k for k = 0, 1, 2, from Σ_q c_q(b) q^{−s} = σ_{1−s}(b)/ζ(s).
fn ramanujan_moments(b: u64) -> [f64; 3] {
    let mut a = [0.0; 3];
    for d in divisors(b) {
        let l = (d as f64).ln();
        let w = 1.0 / d as f64;
        a[0] += w;
        a[1] -= w * l;
        a[2] += w * l * l;
    }
    let z = [
        1.0 / ZETA2,
        -ZETA2_D1 / (ZETA2 * ZETA2),
        -ZETA2_D2 / (ZETA2 * ZETA2) + 2.0 * ZETA2_D1 * ZETA2_D1 / (ZETA2 * ZETA2 * ZETA2),
    ];
    let f0 = a[0] * z[0];
    let f1 = a[1] * z[0] + a[0] * z[1];
    let f2 = a[2] * z[0] + 2.0 * a[1] * z[1] + a[0] * z[2];
    [f0, -f1, f2]
}

/// Main-term density of τ(n)τ(n + b) at n = x:
/// Σ_q c_q(b) q^{−2} (log x + 2γ − 2 log q)(log(x + b) + 2γ − 2 log q).
pub fn divisor_correlation_density(x: f64, b: u64) -> f64 {
    let s = ramanujan_moments(b);
    let l1 = x.ln() + 2.0 * EULER_GAMMA;
    let l2 = (x + b as f64).ln() + 2.0 * EULER_GAMMA;
    s[0] * l1 * l2 - 2.0 * (l1 + l2) * s[1] + 4.0 * s[2]
}

/// ∫ V((x − X)/Y) · density(x) dx, the smooth main term of 𝒮(X, Y, b) for τ.
pub fn divisor_main_term(x: f64, y: f64, b: u64, v: &TestFunction) -> Result<f64> {
    let spec = QuadratureSpec::default().with_tol(0.0, 1e-13);
    let mut parts = Vec::new();
    for (lo, hi) in v.support() {
        let mut pts = v.breakpoints(lo, hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in pts.windows(2) {
            let r = integrate_real(
                |u| v.eval(u) * divisor_correlation_density(x + y * u, b),
                Domain::Finite(w[0], w[1]),
                &spec,
            );
            if !r.converged {
                return Err(Error::Invalid(
                    "quadrature tolerance not met in the divisor main term".into(),
                ));
            }
            parts.push(r.value.re * y);
        }
    }
    Ok(exact_sum(parts))
}

/// Settings of the short-window scaling experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub source: CoefficientSource,
    pub v: TestFunction,
    /// (X, Y, b) cells.
    pub grid: Vec<(f64, f64, u64)>,
    pub theta: f64,
    pub epsilon: f64,
    /// Midpoint samples of x ∈ [X, 2X] for the mean square.
    pub samples: usize,
}

impl ScalingConfig {
    /// X ∈ xs, Y = X^{y_exponent}, b ∈ bs, divisor coefficients, V = bump on [1, 2].
    pub fn divisor_grid(xs: &[f64], y_exponent: f64, bs: &[u64]) -> Self {
        let mut grid = Vec::new();
        for &x in xs {
            for &b in bs {
                grid.push((x, x.powf(y_exponent).round(), b));
            }
        }
        ScalingConfig {
            source: CoefficientSource::Divisor,
            v: TestFunction::bump(1.5, 0.5),
            grid,
            theta: 7.0 / 64.0,
            epsilon: 0.05,
            samples: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub x: f64,
    pub y: f64,
    pub b: u64,
    /// |𝒮(X, Y, b)|.
    pub s_abs: f64,
    /// (1/X) ∫_X^{2X} |𝒮(x, Y, b)|² dx by midpoint samples.
    pub mean_square: f64,
    /// X^{1+ε}/Y · (Y^{½} + b^{½}) · min(b^θ, 1 + Y b^{¼}/X).
    pub bound_pointwise: f64,
    /// b^{2θ} X^{1+ε} (1 + b/Y), the mean-square bound divided by X.
    pub bound_mean_square: f64,
    /// s_abs / bound_pointwise, normalised to the largest cell.
    pub ratio_pointwise: f64,
    /// mean_square / bound_mean_square, normalised to the largest cell.
    pub ratio_mean_square: f64,
    /// Same quantities after removing the smooth divisor main term (NaN for Hecke data).
    pub s_abs_off_main: f64,
    pub mean_square_off_main: f64,
    pub ratio_pointwise_off_main: f64,
    pub ratio_mean_square_off_main: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub notes: Vec<String>,
}

fn normalise(rows: &mut [ScalingRow], get: fn(&ScalingRow) -> f64, set: fn(&mut ScalingRow, f64)) {
    let m = rows
        .iter()
        .map(get)
        .fold(0.0f64, |a, b| if b.is_nan() { a } else { a.max(b) });
    for r in rows.iter_mut() {
        let v = get(r);
        set(r, if m > 0.0 { v / m } else { 0.0 });
    }
}

/// |𝒮(X, Y, b)| and its mean square over [X, 2X] against the two short-window bounds.
pub fn scaling_experiment(config: &ScalingConfig) -> Result<ScalingReport> {
    let Some(reach) = config
        .grid
        .iter()
        .map(|&(x, y, b)| {
            let w = Window::ShortInterval {
                x: 2.0 * x,
                y,
                v: config.v.clone(),
            };
            w.range(b).map(|(_, hi)| hi + b)
        })
        .max()
    else {
        return Ok(ScalingReport {
            rows: Vec::new(),
            notes: Vec::new(),
        });
    };
    let coeffs = Coefficients::for_source(&config.source, reach.unwrap_or(1) as usize + 1)?;
    let divisor = matches!(config.source, CoefficientSource::Divisor);
    let samples = config.samples.max(1);
    let cells: Vec<Result<ScalingRow>> = config
        .grid
        .par_iter()
        .map(|&(x, y, b)| {
            let sum_at = |x0: f64| -> Result<(f64, f64)> {
                let spec = ShiftedSumSpec::new(
                    config.source.clone(),
                    b,
                    Window::ShortInterval {
                        x: x0,
                        y,
                        v: config.v.clone(),
                    },
                )?;
                let s = shifted_sum_with(&spec, &coeffs)?;
                let off = if divisor {
                    s - divisor_main_term(x0, y, b, &config.v)?
                } else {
                    f64::NAN
                };
                Ok((s, off))
            };
            let (s, off) = sum_at(x)?;
            let mut sq = Vec::with_capacity(samples);
            let mut sq_off = Vec::with_capacity(samples);
            for k in 0..samples {
                let (v, o) = sum_at(x + (k as f64 + 0.5) * x / samples as f64)?;
                sq.push(v * v / samples as f64);
                sq_off.push(o * o / samples as f64);
            }
            let bf = b as f64;
            let bound_pointwise = x.powf(1.0 + config.epsilon) / y
                * (y.sqrt() + bf.sqrt())
                * bf.powf(config.theta).min(1.0 + y * bf.powf(0.25) / x);
            let bound_mean_square =
                bf.powf(2.0 * config.theta) * x.powf(1.0 + config.epsilon) * (1.0 + bf / y);
            let (mean_square, mean_square_off_main) = (exact_sum(sq), exact_sum(sq_off));
            Ok(ScalingRow {
                x,
                y,
                b,
                s_abs: s.abs(),
                mean_square,
                bound_pointwise,
                bound_mean_square,
                ratio_pointwise: s.abs() / bound_pointwise,
                ratio_mean_square: mean_square / bound_mean_square,
                s_abs_off_main: off.abs(),
                mean_square_off_main,
                ratio_pointwise_off_main: off.abs() / bound_pointwise,
                ratio_mean_square_off_main: mean_square_off_main / bound_mean_square,
            })
        })
        .collect();
    let mut rows = cells.into_iter().collect::<Result<Vec<_>>>()?;
    normalise(
        &mut rows,
        |r| r.ratio_pointwise,
        |r, v| r.ratio_pointwise = v,
    );
    normalise(
        &mut rows,
        |r| r.ratio_mean_square,
        |r, v| r.ratio_mean_square = v,
    );
    normalise(
        &mut rows,
        |r| r.ratio_pointwise_off_main,
        |r, v| r.ratio_pointwise_off_main = v,
    );
    normalise(
        &mut rows,
        |r| r.ratio_mean_square_off_main,
        |r, v| r.ratio_mean_square_off_main = v,
    );
    let mut notes = vec![format!(
        "θ = {}, ε = {}, {} midpoint samples",
        config.theta, config.epsilon, samples
    )];
    if divisor {
        notes.push("τ(n) is not cuspidal: the raw sums carry the main term Σ_q c_q(b)q^{−2}(log x + 2γ − 2log q)(log(x+b) + 2γ − 2log q)".into());
    }
    Ok(ScalingReport { rows, notes })
}
