use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::coeffs::divisors;
use super::sum::ExactSum;
use crate::arch_local::{ArchRep, BivariateWeight, ContourSpec, VeeTransform};
use crate::error::{Error, Result};

/// Exponent of the Kim–Sarnak bound |λ(n)| ≤ τ(n) n^θ.
pub const KIM_SARNAK_THETA: f64 = 7.0 / 64.0;

/// One Maass form: spectral parameter, parity, Hecke eigenvalues and L-values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDatum {
    pub r: f64,
    pub parity: u8,
    pub hecke: BTreeMap<u64, f64>,
    #[serde(rename = "L_half")]
    pub l_half: Option<f64>,
    #[serde(rename = "L_one_ad")]
    pub l_one_ad: Option<f64>,
    #[serde(default)]
    pub c_abs: Option<f64>,
    #[serde(default)]
    pub c_sign: Option<i8>,
    #[serde(default)]
    pub source: String,
}

impl SpectralDatum {
    /// λ(n) for 0 ≤ n ≤ N (λ(0) = 0, λ(1) = 1 if absent).
    pub fn dense_hecke(&self, n: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n + 1];
        for (m, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = match self.hecke.get(&(m as u64)) {
                Some(&v) => v,
                None if m == 1 => 1.0,
                None => {
                    return Err(Error::InsufficientCoefficients {
                        needed: n,
                        available: m - 1,
                    })
                }
            };
        }
        Ok(out)
    }

    pub fn rep(&self) -> ArchRep {
        ArchRep::principal(self.r, self.parity)
    }

    /// |c_π|, either supplied or from the L-values.
    pub fn c_abs_value(&self) -> Result<f64> {
        if let Some(c) = self.c_abs {
            return Ok(c);
        }
        let mut missing = Vec::new();
        if self.l_half.is_none() {
            missing.push("L_half");
        }
        if self.l_one_ad.is_none() {
            missing.push("L_one_ad");
        }
        if !missing.is_empty() {
            return Err(Error::MissingData(format!(
                "record r = {}: c_abs and {}",
                self.r,
                missing.join(", ")
            )));
        }
        c_abs_from_L(
            self.l_half.unwrap(),
            self.l_one_ad.unwrap(),
            &Temperedness::TemperedAtS,
        )
    }
}

/// A non-fatal observation about an ingested record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataWarning {
    pub record: usize,
    pub message: String,
}

/// Records read from a spectral data file, with warnings and the file's SHA-256.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub records: Vec<SpectralDatum>,
    pub warnings: Vec<DataWarning>,
    pub sha256: String,
}

/// Parse and validate spectral records from JSON text.
pub fn parse_spectral_data(text: &str) -> Result<SpectralData> {
    let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
    if text.trim().is_empty() {
        return Ok(SpectralData {
            records: Vec::new(),
            warnings: Vec::new(),
            sha256,
        });
    }
    let records: Vec<SpectralDatum> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    let mut warnings = Vec::new();
    for (i, d) in records.iter().enumerate() {
        let bad =
            |field: &str, why: &str| Error::Parse(format!("record {i}, field {field}: {why}"));
        if !d.r.is_finite() || d.r < 0.0 {
            return Err(bad("r", "must be a finite number ≥ 0"));
        }
        if d.parity > 1 {
            return Err(bad("parity", "must be 0 or 1"));
        }
        if let Some(l) = d.l_one_ad {
            if !(l > 0.0) {
                return Err(bad("L_one_ad", "must be > 0"));
            }
        }
        if let Some(l) = d.l_half {
            if !(l >= 0.0) {
                return Err(bad("L_half", "must be ≥ 0"));
            }
        }
        if matches!(d.c_sign, Some(s) if s != 1 && s != -1) {
            return Err(bad("c_sign", "must be 1, -1 or null"));
        }
        if d.hecke.contains_key(&0) {
            return Err(bad("hecke", "indices start at 1"));
        }
        for message in kim_sarnak_violations(d)
            .into_iter()
            .chain(multiplicativity_defects(d, 1e-6))
        {
            warnings.push(DataWarning { record: i, message });
        }
    }
    Ok(SpectralData {
        records,
        warnings,
        sha256,
    })
}

pub fn ingest_spectral_data(path: &Path) -> Result<SpectralData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_spectral_data(&text)
}

pub fn write_spectral_data(path: &Path, records: &[SpectralDatum]) -> Result<()> {
    let text = serde_json::to_string_pretty(records).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Entries with |λ(n)| > τ(n) n^{7/64}.
pub fn kim_sarnak_violations(d: &SpectralDatum) -> Vec<String> {
    d.hecke
        .iter()
        .filter_map(|(&n, &v)| {
            let bound = divisors(n).len() as f64 * (n as f64).powf(KIM_SARNAK_THETA);
            (v.abs() > bound)
                .then(|| format!("|λ({n})| = {} exceeds τ(n)n^(7/64) = {bound:.6}", v.abs()))
        })
        .collect()
}

/// Coprime pairs m, n ≥ 2 with λ(m)λ(n) ≠ λ(mn) beyond the tolerance.
pub fn multiplicativity_defects(d: &SpectralDatum, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    for (&mn, &v) in &d.hecke {
        for m in divisors(mn) {
            let n = mn / m;
            if m < 2 || n <= m || gcd(m, n) != 1 {
                continue;
            }
            if let (Some(a), Some(b)) = (d.hecke.get(&m), d.hecke.get(&n)) {
                if (a * b - v).abs() > tol * (1.0 + v.abs()) {
                    out.push(format!("λ({m})λ({n}) = {} but λ({mn}) = {v}", a * b));
                }
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Local assumption under which |c_π| = √L(½)/L(1, Ad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperedness {
    TemperedAtS,
    /// Not tempered somewhere in S; the correction factor must be supplied.
    Corrected(Option<f64>),
}

/// |c_π| = |L(½, π₁ × π̄₂ × π)|^{½} / L(1, Ad, π), times the correction factor
/// when π₂ is not tempered at every place of S.
#[allow(non_snake_case)]
pub fn c_abs_from_L(l_half_triple: f64, l_one_ad: f64, assumption: &Temperedness) -> Result<f64> {
    if !(l_half_triple >= 0.0) {
        return Err(Error::Invalid(format!(
            "L(½) must be ≥ 0, got {l_half_triple}"
        )));
    }
    if !(l_one_ad > 0.0) {
        return Err(Error::Invalid(format!(
            "L(1, Ad) must be > 0, got {l_one_ad}"
        )));
    }
    let factor = match assumption {
        Temperedness::TemperedAtS => 1.0,
        Temperedness::Corrected(Some(g)) => *g,
        Temperedness::Corrected(None) => {
            return Err(Error::MissingData(
                "π₂ is not tempered at some place of S and no correction factor was supplied"
                    .into(),
            ))
        }
    };
    Ok(l_half_triple.sqrt() / l_one_ad * factor)
}

/// One row of a truncated spectral sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub cutoff: f64,
    /// Σ_{r_j ≤ cutoff} ½ λ_j(b) b^{−½} c_j h^∨(π_j, b) over records with a sign.
    pub partial_sum: Complex64,
    /// Σ_{r_j ≤ cutoff} ½ |λ_j(b)| b^{−½} |c_j| |h^∨(π_j, b)| over all records.
    pub majorant: f64,
    /// Majorant of the records beyond the cutoff plus the contour tails of those within.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub b: u64,
    pub rows: Vec<ReportRow>,
    /// Records that entered the majorant but not the signed sum.
    pub unsigned_records: usize,
    pub data_sha256: Option<String>,
    pub notes: Vec<String>,
}

/// Truncated cuspidal spectral side Σ_j ½ λ_j(b) b^{−½} c_j h^∨(π_j, b)
/// (the measure on the cuspidal spectrum is half the counting measure).
pub fn spectral_rhs_truncated(
    b: u64,
    h: &BivariateWeight,
    pi1: &ArchRep,
    pi2: &ArchRep,
    data: &[SpectralDatum],
    cutoffs: &[f64],
    contour: &ContourSpec,
) -> Result<SpectralReport> {
    if b == 0 {
        return Err(Error::Invalid("the shift b must be ≥ 1".into()));
    }
    let mut missing = Vec::new();
    for d in data {
        if !d.hecke.contains_key(&b) && b != 1 {
            missing.push(format!("record r = {}: hecke[{b}]", d.r));
        }
        if let Err(Error::MissingData(m)) = d.c_abs_value() {
            missing.push(m);
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingData(missing.join("; ")));
    }
    let transform = VeeTransform::new(b as f64, h, pi1, pi2, contour)?;
    let values: Vec<Result<_>> = data.par_iter().map(|d| transform.eval(&d.rep())).collect();
    let bf = b as f64;
    struct Term {
        r: f64,
        signed: Option<Complex64>,
        size: f64,
        tail: f64,
    }
    let mut terms = Vec::with_capacity(data.len());
    for (d, v) in data.iter().zip(values) {
        let v = v?;
        let lambda = d.hecke.get(&b).copied().unwrap_or(1.0);
        let c = d.c_abs_value()?;
        let weight = 0.5 * lambda / bf.sqrt() * c;
        terms.push(Term {
            r: d.r,
            signed: d.c_sign.map(|s| v.value * (weight * s as f64)),
            size: weight.abs() * v.value.norm(),
            tail: weight.abs() * v.tail_estimate,
        });
    }
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &cutoff in cutoffs {
        let (mut re, mut im, mut maj, mut beyond, mut tails) = (
            ExactSum::new(),
            ExactSum::new(),
            ExactSum::new(),
            ExactSum::new(),
            ExactSum::new(),
        );
        for t in &terms {
            if t.r <= cutoff {
                if let Some(s) = t.signed {
                    re.add(s.re);
                    im.add(s.im);
                }
                maj.add(t.size);
                tails.add(t.tail);
            } else {
                beyond.add(t.size);
            }
        }
        rows.push(ReportRow {
            cutoff,
            partial_sum: Complex64::new(re.value(), im.value()),
            majorant: maj.value(),
            tail_estimate: beyond.value() + tails.value(),
        });
    }
    Ok(SpectralReport {
        b,
        rows,
        unsigned_records: terms.iter().filter(|t| t.signed.is_none()).count(),
        data_sha256: None,
        notes: vec![
            "cuspidal Maass spectrum of the supplied records only".into(),
            "continuous (Eisenstein) spectrum, discrete series and main terms are not included"
                .into(),
        ],
    })
}
