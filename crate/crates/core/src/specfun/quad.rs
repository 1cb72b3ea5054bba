//! Quadrature: adaptive Gauss–Legendre with midpoint bisection, and
//! double-exponential rules (tanh-sinh, exp-sinh, sinh-sinh) for endpoint
//! singularities and infinite ranges. Everything here is deterministic: the
//! subdivision order and summation order are fixed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Adaptive-subdivision Gauss–Legendre (midpoint splits).
    GaussLegendre,
    /// Double-exponential (tanh-sinh / exp-sinh / sinh-sinh) with step halving.
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::GaussLegendre,
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_depth: 30,
        }
    }
}

impl QuadratureSpec {
    pub fn double_exponential() -> Self {
        QuadratureSpec {
            scheme: Scheme::DoubleExponential,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// [a, ∞)
    UpperRay(f64),
    /// (−∞, ∞)
    RealLine,
}

/// Estimate plus achieved error bound; `converged` is false when the
/// requested tolerance was not met (the estimate is still the best one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` nodes.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * width * (xi + 1.0));
                weights.push(0.5 * width * wi);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(*x) * *w;
        }
        acc
    }
}

const GL_ORDER: usize = 15;

struct Adaptive<'a, F: Fn(f64) -> Complex64> {
    f: &'a F,
    x: Vec<f64>,
    w: Vec<f64>,
    evals: usize,
    max_depth: u32,
    hit_depth: bool,
}

impl<'a, F: Fn(f64) -> Complex64> Adaptive<'a, F> {
    fn rule(&mut self, a: f64, b: f64) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = Complex64::new(0.0, 0.0);
        for (xi, wi) in self.x.iter().zip(&self.w) {
            s += (self.f)(c + h * xi) * *wi;
        }
        self.evals += self.x.len();
        s * h
    }

    fn recurse(
        &mut self,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> (Complex64, f64) {
        let m = 0.5 * (a + b);
        let left = self.rule(a, m);
        let right = self.rule(m, b);
        let halves = left + right;
        let err = (halves - whole).norm();
        if err <= tol {
            return (halves, err);
        }
        if depth >= self.max_depth || m <= a || m >= b {
            self.hit_depth = true;
            return (halves, err);
        }
        let (l, el) = self.recurse(a, m, left, 0.5 * tol, depth + 1);
        let (r, er) = self.recurse(m, b, right, 0.5 * tol, depth + 1);
        (l + r, el + er)
    }
}

fn adaptive_gl<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> QuadResult {
    let (x, w) = gauss_legendre(GL_ORDER);
    let mut st = Adaptive {
        f,
        x,
        w,
        evals: 0,
        max_depth: spec.max_depth,
        hit_depth: false,
    };
    let whole = st.rule(a, b);
    let tol = spec.abs_tol.max(spec.rel_tol * whole.norm());
    let (mut value, mut error) = st.recurse(a, b, whole, tol, 0);
    // one refinement pass if the relative target moved with the estimate
    let tol2 = spec.abs_tol.max(spec.rel_tol * value.norm());
    if error > tol2 && !st.hit_depth {
        let (v, e) = st.recurse(a, b, value, tol2, 0);
        value = v;
        error = e;
    }
    let converged = error <= spec.abs_tol.max(spec.rel_tol * value.norm()) && !st.hit_depth;
    QuadResult {
        value,
        error,
        converged,
        evaluations: st.evals,
    }
}

/// Double-exponential rule on a transformed variable t ∈ ℝ; `node(t)` returns
/// (x, dx/dt) or None when the node falls outside the representable range.
fn de_rule<F, N>(f: &F, node: N, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64) -> Complex64,
    N: Fn(f64) -> Option<(f64, f64)>,
{
    let t_max = 4.5;
    let mut h = 0.5;
    let mut evals = 0usize;
    let sum_at = |t: f64, evals: &mut usize| -> Complex64 {
        match node(t) {
            Some((x, dx)) if dx.is_finite() && dx > 0.0 && x.is_finite() => {
                *evals += 1;
                let v = f(x) * dx;
                if v.re.is_finite() && v.im.is_finite() {
                    v
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            _ => Complex64::new(0.0, 0.0),
        }
    };
    let n0 = (t_max / h) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -n0..=n0 {
        sum += sum_at(k as f64 * h, &mut evals);
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let levels = spec.max_depth.min(12);
    let mut converged = false;
    for _ in 0..levels {
        h *= 0.5;
        let n = (t_max / h) as i64;
        let mut odd = Complex64::new(0.0, 0.0);
        let mut k = -n + if n % 2 == 0 { 1 } else { 0 };
        while k <= n {
            odd += sum_at(k as f64 * h, &mut evals);
            k += 2;
        }
        sum += odd;
        let next = sum * h;
        error = (next - estimate).norm();
        estimate = next;
        if error <= spec.abs_tol.max(spec.rel_tol * estimate.norm()) {
            converged = true;
            break;
        }
    }
    QuadResult {
        value: estimate,
        error,
        converged,
        evaluations: evals,
    }
}

fn tanh_sinh<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    let half = 0.5 * (b - a);
    let node = |t: f64| -> Option<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the nearer endpoint: (b−a)·e/(1+e)
        let dist = (b - a) * e / (1.0 + e);
        let x = if u >= 0.0 { b - dist } else { a + dist };
        if x <= a || x >= b {
            return None;
        }
        let sech = 2.0 * (-u.abs()).exp() / (1.0 + e);
        let dx = half * FRAC_PI_2 * t.cosh() * sech * sech;
        Some((x, dx))
    };
    de_rule(f, node, spec)
}

fn exp_sinh<F: Fn(f64) -> Complex64>(f: &F, a: f64, spec: &QuadratureSpec) -> QuadResult {
    let node = |t: f64| -> Option<(f64, f64)> {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + e;
        if e == 0.0 || x <= a {
            return None;
        }
        Some((x, FRAC_PI_2 * t.cosh() * e))
    };
    de_rule(f, node, spec)
}

fn sinh_sinh<F: Fn(f64) -> Complex64>(f: &F, spec: &QuadratureSpec) -> QuadResult {
    let node = |t: f64| -> Option<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        Some((u.sinh(), FRAC_PI_2 * t.cosh() * u.cosh()))
    };
    de_rule(f, node, spec)
}

/// Integrate `f` over `domain`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> QuadResult {
    match (spec.scheme, domain) {
        (_, Domain::Finite(a, b)) if a == b => QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            converged: true,
            evaluations: 0,
        },
        (_, Domain::Finite(a, b)) if a > b => {
            let mut r = integrate(f, Domain::Finite(b, a), spec);
            r.value = -r.value;
            r
        }
        (Scheme::GaussLegendre, Domain::Finite(a, b)) => adaptive_gl(&f, a, b, spec),
        (Scheme::DoubleExponential, Domain::Finite(a, b)) => tanh_sinh(&f, a, b, spec),
        (Scheme::GaussLegendre, Domain::UpperRay(a)) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            };
            adaptive_gl(&g, 0.0, 1.0, spec)
        }
        (Scheme::DoubleExponential, Domain::UpperRay(a)) => exp_sinh(&f, a, spec),
        (Scheme::GaussLegendre, Domain::RealLine) => {
            let g = |t: f64| {
                let s = 1.0 - t * t;
                f(t / s) * (1.0 + t * t) / (s * s)
            };
            adaptive_gl(&g, -1.0, 1.0, spec)
        }
        (Scheme::DoubleExponential, Domain::RealLine) => sinh_sinh(&f, spec),
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> QuadResult {
    integrate(|x| Complex64::new(f(x), 0.0), domain, spec)
}
