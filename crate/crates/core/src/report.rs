//! Verification reports and sampled curves, with their JSON and CSV forms.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::util::worst_k;
use crate::Result;

/// How many offending points a report keeps.
pub const WORST_POINTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// pass ⇔ max residual < tolerance
    Upper,
    /// pass ⇔ min value > tolerance; `max_residual` then holds the minimum
    Lower,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub policy: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail_bound: Option<f64>,
}

impl Truncation {
    pub fn policy(p: &str) -> Self {
        Truncation { policy: p.into(), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn points(xs: &[f64]) -> Self {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        GridSpec { lo, hi, points: xs.len() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub tolerance: f64,
    pub max_residual: f64,
    pub worst_points: Vec<[f64; 2]>,
    pub truncation: Truncation,
    pub pass: bool,
    pub bound: Bound,
    /// Informational reports never affect the overall verdict.
    #[serde(default)]
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Upper-bound check over `(x, residual)` pairs.
    pub fn upper(check: &str, tolerance: f64, pts: Vec<(f64, f64)>) -> Self {
        let nan = pts.iter().any(|p| p.1.is_nan());
        let max = pts.iter().map(|p| p.1).fold(0.0, f64::max);
        let max = if nan { f64::NAN } else { max };
        let worst = worst_k(pts, WORST_POINTS);
        VerificationReport {
            check: check.into(),
            tolerance,
            max_residual: max,
            worst_points: worst.into_iter().map(|(x, r)| [x, r]).collect(),
            truncation: Truncation::policy("none"),
            pass: max < tolerance,
            bound: Bound::Upper,
            informational: false,
            grid: None,
            seed: None,
            notes: Vec::new(),
        }
    }

    /// Lower-bound check over `(x, value)` pairs: pass ⇔ every value exceeds
    /// `threshold`.
    pub fn lower(check: &str, threshold: f64, pts: Vec<(f64, f64)>) -> Self {
        let min = pts.iter().map(|p| p.1).fold(f64::INFINITY, |a, b| if b.is_nan() { f64::NAN } else { a.min(b) });
        let mut worst: Vec<(f64, f64)> = pts.iter().map(|&(x, v)| (x, -v)).collect();
        worst = worst_k(worst, WORST_POINTS);
        VerificationReport {
            check: check.into(),
            tolerance: threshold,
            max_residual: min,
            worst_points: worst.into_iter().map(|(x, v)| [x, -v]).collect(),
            truncation: Truncation::policy("none"),
            pass: min > threshold,
            bound: Bound::Lower,
            informational: false,
            grid: None,
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn with_grid(mut self, g: GridSpec) -> Self {
        self.grid = Some(g);
        self
    }

    pub fn with_seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn with_note(mut self, n: &str) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        self.truncation = t;
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// Re-evaluates `pass` against a different tolerance.
    pub fn retolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.pass = match self.bound {
            Bound::Upper => self.max_residual < tol,
            Bound::Lower => self.max_residual > tol,
        };
        self
    }

    pub fn summary_line(&self) -> String {
        let verdict = match (self.pass, self.informational) {
            (_, true) => "INFO",
            (true, _) => "PASS",
            (false, _) => "FAIL",
        };
        let rel = match self.bound {
            Bound::Upper => "<",
            Bound::Lower => ">",
        };
        format!(
            "{verdict} {} {} {rel} {} ({:.3e})",
            self.check, fmt17(self.max_residual), fmt17(self.tolerance), self.max_residual
        )
    }
}

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

/// Uniform samples of a complex or real curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub name: String,
    pub grid: Vec<f64>,
    pub re: Vec<f64>,
    /// `None` for real-valued curves.
    pub im: Option<Vec<f64>>,
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl SampledFunction {
    pub fn real(name: &str, grid: Vec<f64>, values: Vec<f64>) -> Self {
        SampledFunction { name: name.into(), grid, re: values, im: None, metadata: Default::default() }
    }

    pub fn complex(name: &str, grid: Vec<f64>, values: Vec<num_complex::Complex64>) -> Self {
        let re = values.iter().map(|v| v.re).collect();
        let im = values.iter().map(|v| v.im).collect();
        SampledFunction { name: name.into(), grid, re, im: Some(im), metadata: Default::default() }
    }

    pub fn meta(mut self, k: &str, v: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(k.into(), v.into());
        self
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.im {
            Some(im) => {
                s.push_str("x,re,im\n");
                for ((x, r), i) in self.grid.iter().zip(&self.re).zip(im) {
                    let _ = writeln!(s, "{},{},{}", fmt17(*x), fmt17(*r), fmt17(*i));
                }
            }
            None => {
                s.push_str("x,value\n");
                for (x, v) in self.grid.iter().zip(&self.re) {
                    let _ = writeln!(s, "{},{}", fmt17(*x), fmt17(*v));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        match &self.im {
            Some(im) => self.re.iter().zip(im).map(|(r, i)| r.hypot(*i)).fold(0.0, f64::max),
            None => self.re.iter().map(|v| v.abs()).fold(0.0, f64::max),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// One report per file, named after the check.
pub fn write_reports(dir: &Path, reports: &[VerificationReport]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for r in reports {
        let name = r.check.replace([':', '/', ' '], "_");
        write_file(&dir.join(format!("{name}.json")), &(serde_json::to_string_pretty(r)? + "\n"))?;
    }
    Ok(())
}

pub fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("check,bound,tolerance,max_residual,pass,informational\n");
    for r in reports {
        let b = match r.bound {
            Bound::Upper => "upper",
            Bound::Lower => "lower",
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.check,
            b,
            fmt17(r.tolerance),
            fmt17(r.max_residual),
            r.pass,
            r.informational
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_and_lower() {
        let r = VerificationReport::upper("a", 1e-3, vec![(0.0, 1e-4), (1.0, 2e-4)]);
        assert!(r.pass);
        assert_eq!(r.worst_points[0], [1.0, 2e-4]);
        let l = VerificationReport::lower("b", 1e-3, vec![(0.0, 0.5), (1.0, 1e-4)]);
        assert!(!l.pass);
        assert_eq!(l.max_residual, 1e-4);
        assert_eq!(l.worst_points[0], [1.0, 1e-4]);
    }

    #[test]
    fn nan_fails() {
        let r = VerificationReport::upper("a", 1.0, vec![(0.0, f64::NAN)]);
        assert!(!r.pass);
    }

    #[test]
    fn csv_roundtrip_precision() {
        let x = 0.1f64 + 0.2;
        let s = SampledFunction::real("f", vec![x], vec![1.0 / 3.0]).to_csv();
        let line = s.lines().nth(1).unwrap();
        let parts: Vec<f64> = line.split(',').map(|p| p.parse().unwrap()).collect();
        assert_eq!(parts, vec![x, 1.0 / 3.0]);
        assert!(s.starts_with("x,value\n"));
    }
}
