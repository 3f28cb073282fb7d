//! The smooth periodic bump `p`: real, even, 1-periodic, with
//! `|p(x)|² + |p(x+½)|² = 2`, flat zones on `[1/7, 3/14]` and `[3/7, 1/2]`,
//! and a bounded `(r+2)`-th derivative on the 1/112 margins of 1/7 and 3/14.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::util::{cmp_frac, reduce};
use crate::{Error, Result};

/// Smoothness grade of a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Infinite,
    Finite(u32),
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Infinite => write!(f, "inf"),
            Grade::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for Grade {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinite" | "∞" => Ok(Grade::Infinite),
            t => t
                .parse::<u32>()
                .ok()
                .filter(|&q| q > 0)
                .map(Grade::Finite)
                .ok_or_else(|| Error::Parse(format!("grade must be a positive integer or 'inf', got {s:?}"))),
        }
    }
}

/// A monotone step from 0 at `t = 0` to 1 at `t = 1`.
///
/// The base step is `s(t) = σ(t)/(σ(t)+σ(1−t))` with `σ(t) = exp(−1/t)` for
/// the infinite grade, or the degree `2q+1` polynomial step for grade `q`.
/// A flattening exponent `m ≥ 1` reparameterizes the argument through
/// `w(t) = tᵐ/(tᵐ+(1−t)ᵐ)`, which keeps `w(½) = ½`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionFunction {
    pub grade: Grade,
    pub flattening: f64,
}

pub fn make_smooth_step(grade: Grade) -> Result<TransitionFunction> {
    if grade == Grade::Finite(0) {
        return Err(Error::Domain("finite grade must be positive".into()));
    }
    Ok(TransitionFunction { grade, flattening: 1.0 })
}

impl TransitionFunction {
    pub fn with_flattening(self, m: f64) -> Self {
        assert!(m >= 1.0, "flattening exponent must be at least 1");
        TransitionFunction { flattening: m, ..self }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let w = if self.flattening == 1.0 {
            t
        } else {
            let a = t.powf(self.flattening);
            let b = (1.0 - t).powf(self.flattening);
            a / (a + b)
        };
        match self.grade {
            Grade::Infinite => exp_step(w),
            Grade::Finite(q) => poly_step(q, w),
        }
    }

    /// `k`-th derivative by central differences with one Richardson step.
    pub fn derivative(&self, k: u32, t: f64) -> f64 {
        fd_richardson(|u| self.evaluate(u), t, k, 1e-3).0
    }
}

fn exp_step(w: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    if w >= 1.0 {
        return 1.0;
    }
    // σ(w)/(σ(w)+σ(1−w)) = 1/(1 + exp(1/w − 1/(1−w)))
    1.0 / (1.0 + (1.0 / w - 1.0 / (1.0 - w)).exp())
}

fn poly_step(q: u32, w: f64) -> f64 {
    // w^{q+1} Σ_j C(q+j, j) (1−w)^j
    let mut c = 1.0;
    let mut acc = 0.0;
    let mut pw = 1.0;
    for j in 0..=q {
        if j > 0 {
            c = c * f64::from(q + j) / f64::from(j);
            pw *= 1.0 - w;
        }
        acc += c * pw;
    }
    w.powi(q as i32 + 1) * acc
}

/// Central difference of order `k` with step `h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, k: u32, h: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for i in 0..=k {
        if i > 0 {
            binom = binom * f64::from(k - i + 1) / f64::from(i);
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f(x + (f64::from(k) / 2.0 - f64::from(i)) * h);
    }
    sum / h.powi(k as i32)
}

/// Richardson-refined central difference: returns the refined estimate and
/// the two raw estimates at `h` and `h/2`.
pub fn fd_richardson<F: Fn(f64) -> f64>(f: F, x: f64, k: u32, h: f64) -> (f64, f64, f64) {
    let d1 = central_difference(&f, x, k, h);
    let d2 = central_difference(&f, x, k, h / 2.0);
    ((4.0 * d2 - d1) / 3.0, d1, d2)
}

/// The bump `p`.
#[derive(Clone, Debug, Serialize)]
pub struct Bump {
    pub step: TransitionFunction,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

#[inline]
fn lt(y: f64, p: f64, q: f64) -> bool {
    cmp_frac(y, p, q) == Ordering::Less
}

#[inline]
fn le(y: f64, p: f64, q: f64) -> bool {
    cmp_frac(y, p, q) != Ordering::Greater
}

impl Bump {
    /// Unvalidated bump from a step; see [`build_p`] for the checked route.
    pub fn from_step(r: u32, step: TransitionFunction) -> Self {
        Bump { step, r, validation: None }
    }

    pub fn is_validated(&self) -> bool {
        self.validation.as_ref().is_some_and(|v| v.pass)
    }

    // values on [3/28, 1/4] ∪ [11/28, 1/2]
    fn direct(&self, u: f64) -> f64 {
        let s = &self.step;
        if lt(u, 1.0, 7.0) {
            s.evaluate((-28.0f64).mul_add(u, 4.0))
        } else if le(u, 3.0, 14.0) {
            0.0
        } else if le(u, 1.0, 4.0) {
            s.evaluate(28.0f64.mul_add(u, -6.0))
        } else if lt(u, 3.0, 7.0) {
            s.evaluate((-28.0f64).mul_add(u, 12.0))
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = reduce(x).abs();
        let complement = lt(y, 3.0, 28.0) || (!lt(y, 1.0, 4.0) && lt(y, 11.0, 28.0));
        if complement {
            let q = self.direct(0.5 - y);
            (2.0 - q * q).sqrt()
        } else {
            self.direct(y)
        }
    }

    pub fn derivative(&self, k: u32, x: f64, h: f64) -> f64 {
        fd_richardson(|t| self.eval(t), x, k, h).0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationReport {
    pub r: u32,
    pub grade: Grade,
    pub flattening: f64,
    pub qmf_residual: f64,
    pub flat_zone_max: f64,
    pub derivative_max: f64,
    pub derivative_step: f64,
    pub derivative_reliable: bool,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Finite-difference step used for the margin derivative estimate. Small
/// enough that the stencil stays inside the 1/112 window for every order
/// in use.
pub const DERIVATIVE_STEP: f64 = 1e-4;
/// Points sampled per margin window.
pub const MARGIN_SAMPLES: usize = 401;

pub fn validate_p(p: &Bump, r: u32) -> ValidationReport {
    validate_with_step(p, r, DERIVATIVE_STEP)
}

pub fn validate_with_step(p: &Bump, r: u32, h: f64) -> ValidationReport {
    let n = 4096;
    let qmf_residual = (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            let a = p.eval(x);
            let b = p.eval(x + 0.5);
            (a * a + b * b - 2.0).abs()
        })
        .fold(0.0, f64::max);

    let zones = [(1.0 / 7.0, 3.0 / 14.0), (3.0 / 7.0, 0.5)];
    let mut flat_zone_max: f64 = 0.0;
    for &(a, b) in &zones {
        for i in 0..=1024 {
            let x = a + (b - a) * i as f64 / 1024.0;
            flat_zone_max = flat_zone_max.max(p.eval(x).abs()).max(p.eval(-x).abs());
        }
    }

    let k = r + 2;
    let w = 1.0 / 112.0;
    let mut derivative_max: f64 = 0.0;
    let mut reliable = true;
    for &c in &[3.0 / 14.0, 1.0 / 7.0] {
        for i in 1..MARGIN_SAMPLES - 1 {
            let x = c - w + 2.0 * w * i as f64 / (MARGIN_SAMPLES - 1) as f64;
            let (d, d1, d2) = fd_richardson(|t| p.eval(t), x, k, h);
            derivative_max = derivative_max.max(d.abs());
            let big = d1.abs().max(d2.abs());
            if big > 1e-3 && (d1 - d2).abs() > 0.1 * big {
                reliable = false;
            }
        }
    }

    let checks = vec![
        Check { name: "qmf_identity".into(), value: qmf_residual, threshold: 1e-10, pass: qmf_residual < 1e-10 },
        Check { name: "flat_zones".into(), value: flat_zone_max, threshold: 1e-12, pass: flat_zone_max < 1e-12 },
        Check {
            name: format!("margin_derivative_order_{k}"),
            value: derivative_max,
            threshold: 1.0,
            pass: derivative_max < 1.0,
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    ValidationReport {
        r,
        grade: p.step.grade,
        flattening: p.step.flattening,
        qmf_residual,
        flat_zone_max,
        derivative_max,
        derivative_step: h,
        derivative_reliable: reliable,
        checks,
        pass,
    }
}

/// Largest flattening exponent tried before giving up.
pub const MAX_FLATTENING: f64 = 16.0;
pub const FLATTENING_INCREMENT: f64 = 0.25;

/// Builds `p` for smoothness target `r`, raising the flattening exponent in
/// steps of 1/4 until the margin derivative bound holds.
pub fn build_p(r: u32, step: TransitionFunction) -> Result<Bump> {
    let mut m = step.flattening.max(1.0);
    loop {
        let mut p = Bump::from_step(r, step.with_flattening(m));
        let v = validate_p(&p, r);
        if v.pass {
            p.validation = Some(v);
            return Ok(p);
        }
        if v.qmf_residual >= 1e-10 || v.flat_zone_max >= 1e-12 {
            return Err(Error::Flatness(format!("structural check failed at m = {m}")));
        }
        m += FLATTENING_INCREMENT;
        if m > MAX_FLATTENING {
            return Err(Error::Flatness(format!(
                "derivative of order {} still {:.3e} at flattening {}",
                r + 2,
                v.derivative_max,
                m - FLATTENING_INCREMENT
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SQRT2;

    fn inf() -> TransitionFunction {
        make_smooth_step(Grade::Infinite).unwrap()
    }

    #[test]
    fn step_endpoints_and_midpoint() {
        let s = inf();
        assert_eq!(s.evaluate(0.0), 0.0);
        assert_eq!(s.evaluate(1.0), 1.0);
        assert_eq!(s.evaluate(0.5), 0.5);
        let f = s.with_flattening(3.25);
        assert_eq!(f.evaluate(0.5), 0.5);
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!((s.evaluate(t) + s.evaluate(1.0 - t) - 1.0).abs() < 1e-15);
            assert!(s.evaluate(t) >= s.evaluate(t - 0.01));
        }
    }

    #[test]
    fn poly_step_is_smoothstep() {
        let s = make_smooth_step(Grade::Finite(1)).unwrap();
        let t: f64 = 0.3;
        assert!((s.evaluate(t) - (3.0 * t * t - 2.0 * t * t * t)).abs() < 1e-15);
        assert!(make_smooth_step(Grade::Finite(0)).is_err());
    }

    #[test]
    fn step_derivatives_vanish_at_ends() {
        let s = inf();
        for k in 1..=4 {
            assert!(s.derivative(k, 0.0).abs() < 1e-9, "k={k}");
            assert!(s.derivative(k, 1.0).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn p_golden_values() {
        let p = Bump::from_step(1, inf().with_flattening(3.25));
        assert_eq!(p.eval(0.0), SQRT2);
        assert_eq!(p.eval(1.0 / 28.0), SQRT2);
        assert_eq!(p.eval(1.0 / 7.0), 0.0);
        assert_eq!(p.eval(3.0 / 7.0), 0.0);
        assert_eq!(p.eval(0.25), 1.0);
        assert_eq!(p.eval(3.0 / 28.0), 1.0);
        // p(1/8) sits at the middle of a transition
        assert!((p.eval(0.125) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn p_plateau_and_complement() {
        let p = Bump::from_step(0, inf().with_flattening(3.0));
        for i in 0..=200 {
            let x = -1.0 / 14.0 + i as f64 / 1400.0;
            assert_eq!(p.eval(x), SQRT2, "x={x}");
        }
        for i in 0..=300 {
            let x = 3.0 / 28.0 * i as f64 / 300.0;
            let a = p.eval(x);
            let b = p.eval(0.5 - x);
            assert!((a * a + b * b - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn build_finds_minimal_flattening() {
        let want = [(0, 2.75), (1, 3.25), (2, 3.5)];
        for (r, m) in want {
            let p = build_p(r, inf()).unwrap();
            assert_eq!(p.step.flattening, m, "r={r}");
            assert!(p.is_validated());
        }
    }
}
