//! Command-line front end: job specifications, deterministic execution and
//! CSV/JSON table output.

mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, FromArgMatches, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arch_local::{
    appendix_check_with, invert_H, invert_h, kernel_K_with, ArchCharacter, ArchRep, Atom,
    BivariateWeight, ContourSpec, H_of, SharpMethod, SharpSource, SharpTransform, Side,
    SpectralGrid, TestFunction, TransformOptions, VeeTransform,
};
use crate::error::{Error, Result};
use crate::global_demo::{
    ingest_spectral_data, scaling_experiment, spectral_rhs_truncated, ScalingConfig,
};
use crate::padic_local::{
    h_sharp_padic, h_vee_padic, PadicCharacter, PadicElement, PadicOptions, PadicRep, StepFunction,
    StepWeight,
};
use crate::specfun::{Precision, QuadratureSpec};
pub use table::{Cell, Table};

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Usage = 1,
    ToleranceNotMet = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "spectral-local",
    version,
    about = "Local spectral transforms on PGL(2): tables and checks"
)]
pub struct Cli {
    /// JSON job file {"command": ..., "params": {...}}; replaces the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (standard output if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Working precision; extended precision is available for `kernel`.
    #[arg(long, global = true, value_enum)]
    pub precision: Option<Precision>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

impl ValueEnum for Precision {
    fn value_variants<'a>() -> &'a [Self] {
        &[Precision::Double, Precision::Extended]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }))
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case")]
pub enum Command {
    /// 𝒦(t, y) on a grid of y.
    Kernel(KernelArgs),
    /// h^∨ or h^♯ over a grid of spectral parameters.
    Transform(TransformArgs),
    /// Plancherel inversion back to h or H.
    Invert(InvertArgs),
    /// Both sides of the one-variable identity V̌(r) = π·h^♯(π_r, triv).
    Appendix(AppendixArgs),
    /// p-adic h^∨ / h^♯ by residues, with the trapezoid comparison.
    Padic(PadicArgs),
    /// Truncated spectral side from ingested data.
    Global(GlobalArgs),
    /// Short-window shifted divisor sums against the bounds.
    Scaling(ScalingArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// start:end:count, inclusive.
    #[arg(long, default_value = "0.1:10:50")]
    pub y_grid: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Vee,
    Sharp,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct WeightArgs {
    /// First factor: bump "center,halfwidth" on the positive axis.
    #[arg(long, default_value = "2.0,1.9")]
    pub f1: String,
    /// Second factor.
    #[arg(long, default_value = "1.0,0.95")]
    pub f2: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ContourArgs {
    #[arg(long, default_value_t = 0.25)]
    pub sigma: f64,
    #[arg(long, default_value_t = 50.0)]
    pub im_cutoff: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TransformArgs {
    #[arg(long, value_enum, default_value_t = TransformKind::Vee)]
    pub kind: TransformKind,
    /// start:end:count of spectral parameters r.
    #[arg(long, default_value = "0:10:11")]
    pub r_grid: String,
    #[arg(long, default_value_t = 0)]
    pub eta: u8,
    /// Shift y of h^∨(π, y).
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    /// Real exponent of χ₀ = |·|^e for h^♯.
    #[arg(long, default_value_t = 0.0)]
    pub chi0: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub contour: ContourArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum InvertKind {
    /// Reconstruct h(y₁, y₂).
    #[value(name = "h")]
    #[serde(rename = "h")]
    Weight,
    /// Reconstruct H(y, triv).
    #[value(name = "H")]
    #[serde(rename = "H")]
    Integral,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct InvertArgs {
    #[arg(long, value_enum, default_value_t = InvertKind::Weight)]
    pub kind: InvertKind,
    /// "y1,y2;y1,y2;..." for h (common y1 − y2), "y;y;..." for H.
    #[arg(long, default_value = "1.5,0.5;2,1")]
    pub points: String,
    #[arg(long, default_value_t = 40.0)]
    pub r_cut: f64,
    #[arg(long, default_value_t = 40)]
    pub k_cut: u32,
    /// Vertical cutoff of the forward transforms.
    #[arg(long, default_value_t = 250.0)]
    pub forward_cutoff: f64,
    /// Vertical cutoff of the inversion integral.
    #[arg(long, default_value_t = 100.0)]
    pub outer_cutoff: f64,
    /// Relative tolerance; exit status 2 if exceeded.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub weight: WeightArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportCase {
    /// bump(0.5, 0.45) ⊂ (0, 1).
    UnitInterval,
    /// bump(2, 0.5) ⊂ (1, ∞).
    AboveOne,
    /// bump(−0.6, 0.3) ⊂ (−∞, 0).
    Negative,
    /// bump(center, halfwidth).
    Custom,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AppendixArgs {
    #[arg(long, value_enum, default_value_t = SupportCase::UnitInterval)]
    pub support: SupportCase,
    #[arg(long, default_value_t = 0.5)]
    pub center: f64,
    #[arg(long, default_value_t = 0.25)]
    pub halfwidth: f64,
    /// Comma-separated spectral parameters.
    #[arg(long, default_value = "1.0")]
    pub r: String,
    #[arg(long, default_value_t = 600.0)]
    pub im_cutoff: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PadicArgs {
    #[arg(long, value_enum, default_value_t = TransformKind::Vee)]
    pub kind: TransformKind,
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Real Satake parameter α of π.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Valuation of y for h^∨.
    #[arg(long, default_value_t = 0)]
    pub y_valuation: i32,
    /// Valuations of the two shell indicators.
    #[arg(long, default_value = "0,0")]
    pub shells: String,
    #[arg(long, default_value_t = 0.25)]
    pub sigma: f64,
    /// Nodes of the trapezoid comparison.
    #[arg(long, default_value_t = 256)]
    pub trapezoid: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Spectral data file (JSON array of records).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long, default_value = "10,20,30,40")]
    pub cutoffs: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub contour: ContourArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ScalingArgs {
    #[arg(long, default_value = "10000,100000")]
    pub x_list: String,
    #[arg(long, default_value = "1,16")]
    pub b_list: String,
    /// Y = X^e.
    #[arg(long, default_value_t = 0.75)]
    pub y_exponent: f64,
    #[arg(long, default_value_t = 7.0 / 64.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

/// A fully resolved job.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobSpec {
    #[serde(flatten)]
    pub command: Command,
    pub precision: Precision,
}

impl JobSpec {
    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(
            serde_json::to_string(self)
                .expect("job specs serialise")
                .as_bytes(),
        ))
    }
}

/// Outcome of a job: the table and whether its tolerance was met.
pub struct Outcome {
    pub table: Table,
    pub within_tolerance: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn defaults<T: Args + FromArgMatches>() -> T {
    let cmd = T::augment_args(clap::Command::new("defaults"));
    T::from_arg_matches(&cmd.get_matches_from(["defaults"])).expect("defaults parse")
}

fn overlay<T: Serialize + DeserializeOwned>(base: T, params: &serde_json::Value) -> Result<T> {
    let mut v = serde_json::to_value(base).map_err(|e| usage(e.to_string()))?;
    if let (Some(obj), Some(extra)) = (v.as_object_mut(), params.as_object()) {
        for (k, x) in extra {
            if !obj.contains_key(k) {
                return Err(usage(format!("unknown parameter \"{k}\"")));
            }
            obj.insert(k.clone(), x.clone());
        }
    } else if !params.is_null() {
        return Err(usage("\"params\" must be an object"));
    }
    serde_json::from_value(v).map_err(|e| usage(format!("parameters: {e}")))
}

/// Resolve a JSON job file {"command": name, "params": {...}} onto the flag defaults.
pub fn command_from_config(text: &str) -> Result<Command> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "config line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let name = v
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| usage("config needs a \"command\" string"))?;
    let params = v.get("params").cloned().unwrap_or(serde_json::Value::Null);
    Ok(match name {
        "kernel" => Command::Kernel(overlay(defaults::<KernelArgs>(), &params)?),
        "transform" => Command::Transform(overlay(defaults::<TransformArgs>(), &params)?),
        "invert" => Command::Invert(overlay(defaults::<InvertArgs>(), &params)?),
        "appendix" => Command::Appendix(overlay(defaults::<AppendixArgs>(), &params)?),
        "padic" => Command::Padic(overlay(defaults::<PadicArgs>(), &params)?),
        "global" => {
            if params.get("data").is_none() {
                return Err(usage("global needs params.data"));
            }
            let base = GlobalArgs {
                data: PathBuf::new(),
                b: 1,
                cutoffs: "10,20,30,40".into(),
                weight: defaults::<WeightArgs>(),
                contour: defaults::<ContourArgs>(),
            };
            Command::Global(overlay(base, &params)?)
        }
        "scaling" => Command::Scaling(overlay(defaults::<ScalingArgs>(), &params)?),
        other => return Err(usage(format!("unknown command \"{other}\""))),
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> Result<Vec<T>> {
    s.split(sep)
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("{what}: cannot parse \"{x}\"")))
        })
        .collect()
}

fn parse_grid(s: &str, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!(
            "{what}: expected start:end:count, got \"{s}\""
        )));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: bad start")))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: bad end")))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| usage(format!("{what}: bad count")))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(usage(format!("{what}: empty or non-finite grid")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

fn parse_bump(s: &str, what: &str) -> Result<TestFunction> {
    let v: Vec<f64> = parse_list(s, ',', what)?;
    if v.len() != 2 {
        return Err(usage(format!("{what}: expected center,halfwidth")));
    }
    let side = if v[0] > 0.0 {
        Side::Positive
    } else {
        Side::Negative
    };
    TestFunction::new(vec![Atom::bump(v[0].abs(), v[1], side, 1.0)])
}

fn weight(w: &WeightArgs) -> Result<BivariateWeight> {
    Ok(BivariateWeight::new(
        parse_bump(&w.f1, "--f1")?,
        parse_bump(&w.f2, "--f2")?,
    ))
}

fn complex_cells(v: Complex64) -> [Cell; 2] {
    [Cell::Num(v.re), Cell::Num(v.im)]
}

fn run_kernel(a: &KernelArgs, precision: Precision) -> Result<Outcome> {
    let ys = parse_grid(&a.y_grid, "--y-grid")?;
    let mut t = Table::new(&["t", "y", "kernel_re", "kernel_im", "error_estimate"]);
    for y in ys {
        let d = kernel_K_with(Complex64::new(a.t, 0.0), y, Precision::Double)?;
        let e = kernel_K_with(Complex64::new(a.t, 0.0), y, Precision::Extended)?;
        let v = if precision == Precision::Extended {
            e
        } else {
            d
        };
        let [re, im] = complex_cells(v);
        t.push(vec![
            Cell::Num(a.t),
            Cell::Num(y),
            re,
            im,
            Cell::Num((d - e).norm()),
        ]);
    }
    Ok(Outcome {
        table: t,
        within_tolerance: true,
    })
}

type Evaluator<'a> = dyn Fn(&ArchRep) -> Result<crate::arch_local::ContourValue> + 'a;

fn run_transform(a: &TransformArgs) -> Result<Outcome> {
    let rs = parse_grid(&a.r_grid, "--r-grid")?;
    if a.eta > 1 {
        return Err(usage("--eta must be 0 or 1"));
    }
    let h = weight(&a.weight)?;
    let triv = ArchRep::principal(0.0, 0);
    let contour = ContourSpec::default()
        .with_sigma(a.contour.sigma)
        .with_cutoff(a.contour.im_cutoff);
    let mut t = Table::new(&["r", "eta", "value_re", "value_im", "tail_estimate"]);
    let chi0 = ArchCharacter::new(Complex64::new(a.chi0, 0.0), 0);
    let eval: Box<Evaluator> = match a.kind {
        TransformKind::Vee => {
            let vt = VeeTransform::new(a.y, &h, &triv, &triv, &contour)?;
            Box::new(move |pi| vt.eval(pi))
        }
        TransformKind::Sharp => {
            let st = SharpTransform::new(
                SharpSource::Weight(&h),
                &chi0,
                &triv,
                &triv,
                &contour,
                SharpMethod::Auto,
                TransformOptions::default(),
            )?;
            Box::new(move |pi| st.eval(pi))
        }
    };
    for r in rs {
        let v = eval(&ArchRep::principal(r, a.eta))?;
        let [re, im] = complex_cells(v.value);
        t.push(vec![
            Cell::Num(r),
            Cell::Int(a.eta as i64),
            re,
            im,
            Cell::Num(v.tail_estimate),
        ]);
    }
    Ok(Outcome {
        table: t,
        within_tolerance: true,
    })
}

fn run_invert(a: &InvertArgs) -> Result<Outcome> {
    let h = weight(&a.weight)?;
    let triv = ArchRep::principal(0.0, 0);
    let forward = ContourSpec::default().with_cutoff(a.forward_cutoff);
    let outer = ContourSpec::default().with_cutoff(a.outer_cutoff);
    let chi0 = ArchCharacter::trivial();
    let mut t = Table::new(&[
        "y1",
        "y2",
        "value_re",
        "value_im",
        "exact_re",
        "exact_im",
        "relative_error",
        "tail_estimate",
    ]);
    let mut ok = true;
    match a.kind {
        InvertKind::Weight => {
            let pts: Vec<Vec<f64>> = a
                .points
                .split(';')
                .map(|p| parse_list(p, ',', "--points"))
                .collect::<Result<_>>()?;
            if pts.is_empty() || pts.iter().any(|p| p.len() != 2) {
                return Err(usage("--points: expected y1,y2;y1,y2;..."));
            }
            let shift = pts[0][0] - pts[0][1];
            if pts
                .iter()
                .any(|p| (p[0] - p[1] - shift).abs() > 1e-12 * shift.abs().max(1.0))
            {
                return Err(usage("--points: all pairs must share y1 − y2"));
            }
            let grid = SpectralGrid::hvee(shift, &h, &triv, &triv, &forward, a.r_cut, a.k_cut)?;
            let peak = h.peak();
            for p in pts {
                let v = invert_h(p[0], p[1], &grid, &triv, &triv, &outer)?;
                let exact = h.eval(p[0], p[1]);
                let err = (v.value - exact).norm() / if exact == 0.0 { peak } else { exact.abs() };
                ok &= err <= a.tol;
                let [re, im] = complex_cells(v.value);
                t.push(vec![
                    Cell::Num(p[0]),
                    Cell::Num(p[1]),
                    re,
                    im,
                    Cell::Num(exact),
                    Cell::Num(0.0),
                    Cell::Num(err),
                    Cell::Num(v.tail_estimate),
                ]);
            }
        }
        InvertKind::Integral => {
            let ys: Vec<f64> = parse_list(&a.points, ';', "--points")?;
            let grid = SpectralGrid::hsharp(&chi0, &h, &triv, &triv, &forward, a.r_cut, a.k_cut)?;
            for y in ys {
                let v = invert_H(y, &chi0, &grid, &triv, &triv, &outer)?;
                let exact = H_of(y, &chi0, &h)?;
                let err = (v.value - exact).norm() / exact.norm().max(f64::MIN_POSITIVE);
                ok &= err <= a.tol;
                let [re, im] = complex_cells(v.value);
                let [ere, eim] = complex_cells(exact);
                t.push(vec![
                    Cell::Num(y),
                    Cell::Text(String::new()),
                    re,
                    im,
                    ere,
                    eim,
                    Cell::Num(err),
                    Cell::Num(v.tail_estimate),
                ]);
            }
        }
    }
    Ok(Outcome {
        table: t,
        within_tolerance: ok,
    })
}

fn run_appendix(a: &AppendixArgs) -> Result<Outcome> {
    let phi = match a.support {
        SupportCase::UnitInterval => TestFunction::bump(0.5, 0.45),
        SupportCase::AboveOne => TestFunction::bump(2.0, 0.5),
        SupportCase::Negative => {
            TestFunction::new(vec![Atom::bump(0.6, 0.3, Side::Negative, 1.0)])?
        }
        SupportCase::Custom => parse_bump(
            &format!("{},{}", a.center, a.halfwidth),
            "--center/--halfwidth",
        )?,
    };
    let rs: Vec<f64> = parse_list(&a.r, ',', "--r")?;
    let contour = ContourSpec::default().with_cutoff(a.im_cutoff);
    let mut t = Table::new(&[
        "r",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "residue_rhs_re",
        "residue_rhs_im",
        "residual",
        "tail_estimate",
    ]);
    let mut ok = true;
    for r in rs {
        let c = appendix_check_with(&phi, r, &QuadratureSpec::default(), &contour)?;
        ok &= c.residual <= a.tol;
        let [lr, li] = complex_cells(c.lhs);
        let [rr, ri] = complex_cells(c.rhs);
        let [sr, si] = match c.rhs_residue {
            Some(v) => complex_cells(v),
            None => [Cell::Text(String::new()), Cell::Text(String::new())],
        };
        t.push(vec![
            Cell::Num(r),
            lr,
            li,
            rr,
            ri,
            sr,
            si,
            Cell::Num(c.residual),
            Cell::Num(c.tail_estimate),
        ]);
    }
    Ok(Outcome {
        table: t,
        within_tolerance: ok,
    })
}

fn run_padic(a: &PadicArgs) -> Result<Outcome> {
    let shells: Vec<i32> = parse_list(&a.shells, ',', "--shells")?;
    if shells.len() != 2 {
        return Err(usage("--shells: expected v1,v2"));
    }
    let one = Complex64::new(1.0, 0.0);
    let h = StepWeight::new(
        StepFunction::shell(a.p, shells[0], one)?,
        StepFunction::shell(a.p, shells[1], one)?,
    )?;
    let pi = PadicRep::new(a.p, Complex64::new(a.alpha, 0.0))?;
    let pi1 = PadicRep::spherical_trivial(a.p)?;
    let chi2 = PadicCharacter::trivial(a.p)?;
    let eval = |opts: &PadicOptions| match a.kind {
        TransformKind::Vee => h_vee_padic(
            &pi,
            &PadicElement::power(a.y_valuation),
            &h,
            &pi1,
            &chi2,
            a.sigma,
            opts,
        ),
        TransformKind::Sharp => h_sharp_padic(&pi, &chi2, &h, &pi1, &chi2, a.sigma, opts),
    };
    let v = eval(&PadicOptions::default())?;
    let tr = eval(&PadicOptions::trapezoid(a.trapezoid))?;
    let gap = (v - tr).norm() / v.norm().max(1e-300);
    let mut t = Table::new(&[
        "p",
        "alpha",
        "sigma",
        "value_re",
        "value_im",
        "trapezoid_re",
        "trapezoid_im",
        "relative_gap",
    ]);
    let [re, im] = complex_cells(v);
    let [tre, tim] = complex_cells(tr);
    t.push(vec![
        Cell::Int(a.p as i64),
        Cell::Num(a.alpha),
        Cell::Num(a.sigma),
        re,
        im,
        tre,
        tim,
        Cell::Num(gap),
    ]);
    Ok(Outcome {
        table: t,
        within_tolerance: gap <= a.tol,
    })
}

fn run_global(a: &GlobalArgs) -> Result<Outcome> {
    let data = ingest_spectral_data(&a.data)?;
    for w in &data.warnings {
        eprintln!("warning: record {}: {}", w.record, w.message);
    }
    let cutoffs: Vec<f64> = parse_list(&a.cutoffs, ',', "--cutoffs")?;
    let h = weight(&a.weight)?;
    let triv = ArchRep::principal(0.0, 0);
    let contour = ContourSpec::default()
        .with_sigma(a.contour.sigma)
        .with_cutoff(a.contour.im_cutoff);
    let mut rep = spectral_rhs_truncated(a.b, &h, &triv, &triv, &data.records, &cutoffs, &contour)?;
    rep.data_sha256 = Some(data.sha256);
    let mut t = Table::new(&[
        "cutoff",
        "partial_sum_re",
        "partial_sum_im",
        "majorant",
        "tail_estimate",
    ]);
    for row in &rep.rows {
        let [re, im] = complex_cells(row.partial_sum);
        t.push(vec![
            Cell::Num(row.cutoff),
            re,
            im,
            Cell::Num(row.majorant),
            Cell::Num(row.tail_estimate),
        ]);
    }
    t.notes = rep.notes.clone();
    t.notes.push(format!(
        "data sha256 {}",
        rep.data_sha256.unwrap_or_default()
    ));
    t.notes.push(format!(
        "{} records without c_sign are in the majorant only",
        rep.unsigned_records
    ));
    Ok(Outcome {
        table: t,
        within_tolerance: true,
    })
}

fn run_scaling(a: &ScalingArgs) -> Result<Outcome> {
    let xs: Vec<f64> = parse_list(&a.x_list, ',', "--x-list")?;
    let bs: Vec<u64> = parse_list(&a.b_list, ',', "--b-list")?;
    let mut cfg = ScalingConfig::divisor_grid(&xs, a.y_exponent, &bs);
    cfg.theta = a.theta;
    cfg.epsilon = a.epsilon;
    cfg.samples = a.samples;
    let rep = scaling_experiment(&cfg)?;
    let mut t = Table::new(&[
        "X",
        "Y",
        "b",
        "s_abs",
        "mean_square",
        "bound_pointwise",
        "bound_mean_square",
        "ratio_pointwise",
        "ratio_mean_square",
        "s_abs_off_main",
        "mean_square_off_main",
        "ratio_pointwise_off_main",
        "ratio_mean_square_off_main",
        "error_estimate",
    ]);
    for r in &rep.rows {
        t.push(vec![
            Cell::Num(r.x),
            Cell::Num(r.y),
            Cell::Int(r.b as i64),
            Cell::Num(r.s_abs),
            Cell::Num(r.mean_square),
            Cell::Num(r.bound_pointwise),
            Cell::Num(r.bound_mean_square),
            Cell::Num(r.ratio_pointwise),
            Cell::Num(r.ratio_mean_square),
            Cell::Num(r.s_abs_off_main),
            Cell::Num(r.mean_square_off_main),
            Cell::Num(r.ratio_pointwise_off_main),
            Cell::Num(r.ratio_mean_square_off_main),
            // the sums are exact; the main term is a quadrature to 1e−13 relative
            Cell::Num(1e-13 * (r.s_abs - r.s_abs_off_main).abs().max(r.s_abs)),
        ]);
    }
    t.notes = rep.notes;
    Ok(Outcome {
        table: t,
        within_tolerance: true,
    })
}

/// Execute a resolved job.
pub fn execute(job: &JobSpec) -> Result<Outcome> {
    if job.precision == Precision::Extended && !matches!(job.command, Command::Kernel(_)) {
        return Err(usage(
            "extended precision is available for the kernel command only",
        ));
    }
    let mut out = match &job.command {
        Command::Kernel(a) => run_kernel(a, job.precision),
        Command::Transform(a) => run_transform(a),
        Command::Invert(a) => run_invert(a),
        Command::Appendix(a) => run_appendix(a),
        Command::Padic(a) => run_padic(a),
        Command::Global(a) => run_global(a),
        Command::Scaling(a) => run_scaling(a),
    }?;
    out.table.config_hash = job.hash();
    Ok(out)
}

/// Parse arguments, run the job, write the output; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::Usage as i32
            } else {
                Status::Success as i32
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(s) => s as i32,
        Err(e) => {
            eprintln!("error: {e}");
            Status::Usage as i32
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    let command = match (&cli.config, cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            command_from_config(&text)?
        }
        (None, Some(c)) => c,
        (Some(_), Some(_)) => return Err(usage("give either --config or a subcommand, not both")),
        (None, None) => return Err(usage("no command given (see --help)")),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be ≥ 1"));
        }
        // fails only if a pool already exists, in which case it is reused
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let job = JobSpec {
        command,
        precision: cli.precision.unwrap_or_default(),
    };
    let outcome = execute(&job)?;
    let bytes = match cli.format.unwrap_or_default() {
        Format::Csv => outcome.table.to_csv()?,
        Format::Json => outcome.table.to_json()?,
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| usage(e.to_string()))?,
    }
    for n in &outcome.table.notes {
        eprintln!("note: {n}");
    }
    Ok(if outcome.within_tolerance {
        Status::Success
    } else {
        Status::ToleranceNotMet
    })
}
