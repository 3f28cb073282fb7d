//! Single low-pass/high-pass pairs and their cascades: Haar, Shannon, Cohen.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::filter::PeriodicFilter;
use crate::report::{GridSpec, VerificationReport};
use crate::support::{q, IntervalUnion};
use crate::util::{linspace, SQRT2};
use crate::{Error, Result};

/// Largest number of factors before a cascade gives up.
pub const J_MAX: usize = 128;
/// Remaining-factor tolerance for cascades without a plateau.
pub const TAIL_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Haar,
    Shannon,
    Cohen,
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reference::Haar => "haar",
            Reference::Shannon => "shannon",
            Reference::Cohen => "cohen",
        })
    }
}

impl FromStr for Reference {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(Reference::Haar),
            "shannon" => Ok(Reference::Shannon),
            "cohen" => Ok(Reference::Cohen),
            _ => Err(Error::Parse(format!("unknown classical filter {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassicalFilterPair {
    pub name: String,
    pub h: PeriodicFilter,
    pub g: PeriodicFilter,
    /// `h(y) = √2` for `|y| < plateau`.
    pub plateau: Option<f64>,
    /// Lipschitz constant of `h/√2`, used to bound the cascade tail.
    pub slope: f64,
}

fn expo(a: f64) -> Complex64 {
    Complex64::from_polar(1.0, a)
}

pub fn reference_filters(which: Reference) -> ClassicalFilterPair {
    match which {
        Reference::Haar => ClassicalFilterPair {
            name: "haar".into(),
            h: PeriodicFilter::closed("h", "(1+exp(-2 pi i x))/sqrt(2)", false, false, |x| {
                (1.0 + expo(-2.0 * PI * x)) / SQRT2
            }),
            g: PeriodicFilter::closed("g", "(1-exp(-2 pi i x))/sqrt(2)", false, false, |x| {
                (1.0 - expo(-2.0 * PI * x)) / SQRT2
            }),
            plateau: None,
            slope: PI,
        },
        Reference::Shannon => ClassicalFilterPair {
            name: "shannon".into(),
            h: PeriodicFilter::sqrt2_indicator(
                "h",
                IntervalUnion::single(crate::support::Interval::half_open(q(-1, 4), q(1, 4))),
                true,
            ),
            g: PeriodicFilter::sqrt2_indicator("g", IntervalUnion::symmetric(q(1, 4), q(1, 2), false), true),
            plateau: Some(0.25),
            slope: 0.0,
        },
        Reference::Cohen => ClassicalFilterPair {
            name: "cohen".into(),
            h: PeriodicFilter::closed("h", "(1+exp(-6 pi i x))/sqrt(2)", false, false, |x| {
                (1.0 + expo(-6.0 * PI * x)) / SQRT2
            }),
            g: PeriodicFilter::closed("g", "(1-exp(-6 pi i x))/sqrt(2)", false, false, |x| {
                (1.0 - expo(-6.0 * PI * x)) / SQRT2
            }),
            plateau: None,
            slope: 3.0 * PI,
        },
    }
}

fn qmf_residual(h: &PeriodicFilter) -> f64 {
    (0..4096)
        .map(|i| {
            let x = i as f64 / 4096.0;
            (h.eval(x).norm_sqr() + h.eval(x + 0.5).norm_sqr() - 2.0).abs()
        })
        .fold(0.0, f64::max)
}

/// `g(x) = e^{2πix} · conj(h(x + 1/2))`.
pub fn high_pass_from_low(h: &PeriodicFilter) -> Result<PeriodicFilter> {
    let r = qmf_residual(h);
    if r > 1e-8 {
        return Err(Error::Domain(format!("low-pass fails the QMF identity by {r:.3e}")));
    }
    let h = Arc::new(h.clone());
    Ok(PeriodicFilter::closed(
        "g",
        &format!("exp(2 pi i x) conj({}(x+1/2))", h.name),
        false,
        false,
        move |x| expo(2.0 * PI * x) * h.eval(x + 0.5).conj(),
    ))
}

/// Cascade evaluation with the number of factors used.
#[derive(Clone, Copy, Debug)]
pub struct CascadeEval {
    pub value: Complex64,
    pub factors: usize,
}

/// `Π_{j≥1} h(x/2^j)/√2`, truncated exactly at the plateau when there is one,
/// otherwise once `2·slope·|x|/2^j`, twice the summed bound on the later
/// factors' distance from 1, drops below [`TAIL_TOL`].
pub fn cascade_eval(pair: &ClassicalFilterPair, x: f64) -> Result<CascadeEval> {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut y = x;
    for j in 1..=J_MAX {
        y /= 2.0;
        if let Some(rho) = pair.plateau {
            if y.abs() < rho {
                return Ok(CascadeEval { value: acc, factors: j - 1 });
            }
        }
        acc *= pair.h.eval(y) / SQRT2;
        if pair.plateau.is_none() && 2.0 * pair.slope * y.abs() < TAIL_TOL {
            return Ok(CascadeEval { value: acc, factors: j });
        }
    }
    Err(Error::NoConvergence { x, factors: J_MAX })
}

pub fn cascade_scaling(pair: &ClassicalFilterPair, x: f64) -> Result<Complex64> {
    cascade_eval(pair, x).map(|e| e.value)
}

/// `ψ̂(x) = (1/√2) g(x/2) φ̂(x/2)`.
pub fn wavelet_hat_classical(pair: &ClassicalFilterPair, x: f64) -> Result<Complex64> {
    let y = x / 2.0;
    Ok(pair.g.eval(y) * cascade_scaling(pair, y)? / SQRT2)
}

/// Evaluator wrapper for `φ̂` of a classical pair.
#[derive(Clone, Debug)]
pub struct ScalingHat {
    pub source: ClassicalFilterPair,
    pub truncation_radius: Option<f64>,
}

impl ScalingHat {
    pub fn new(source: ClassicalFilterPair) -> Self {
        let truncation_radius = source.plateau;
        ScalingHat { source, truncation_radius }
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        cascade_scaling(&self.source, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// Closed-form transform of `χ_[0,1/2) − χ_[1/2,1)`.
pub fn haar_psi_closed(x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let a = 1.0 - expo(-PI * x);
    a * a / Complex64::new(0.0, 2.0 * PI * x)
}

/// Closed-form transform of `(1/3) χ_[0,3)`.
pub fn cohen_phi_closed(x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let u = 3.0 * PI * x;
    expo(-u) * (u.sin() / u)
}

/// Residuals of the classical identities: `|h|²` QMF, `|g|²` QMF and
/// `h·conj(g)` orthogonality, on `n` uniform points of one period.
pub fn check_classical_eqs(pair: &ClassicalFilterPair, n: usize, tol: f64) -> Vec<VerificationReport> {
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64 - 0.5).collect();
    let mut r3 = Vec::with_capacity(n);
    let mut r4 = Vec::with_capacity(n);
    let mut r5 = Vec::with_capacity(n);
    for &x in &xs {
        let (h0, h1) = (pair.h.eval(x), pair.h.eval(x + 0.5));
        let (g0, g1) = (pair.g.eval(x), pair.g.eval(x + 0.5));
        r3.push((x, (h0.norm_sqr() + h1.norm_sqr() - 2.0).abs()));
        r4.push((x, (g0.norm_sqr() + g1.norm_sqr() - 2.0).abs()));
        r5.push((x, (h0 * g0.conj() + h1 * g1.conj()).norm()));
    }
    let grid = GridSpec::points(&xs);
    vec![
        VerificationReport::upper(&format!("{}:qmf_low", pair.name), tol, r3).with_grid(grid.clone()),
        VerificationReport::upper(&format!("{}:qmf_high", pair.name), tol, r4).with_grid(grid.clone()),
        VerificationReport::upper(&format!("{}:low_high_orthogonality", pair.name), tol, r5).with_grid(grid),
    ]
}

/// Values of `|h|` below this count as zeros.
pub const NONVANISHING_FLOOR: f64 = 1e-8;

/// Minimum of `|h|` on `[-1/4, 1/4)`, sampled on a grid that includes the
/// points `k/24`. Informational: a hypothesis of the MRA criterion.
pub fn check_nonvanishing(pair: &ClassicalFilterPair) -> VerificationReport {
    let mut xs = linspace(-0.25, 0.25, 1201);
    xs.pop();
    let pts = xs.iter().map(|&x| (x, pair.h.eval(x).norm())).collect();
    VerificationReport::lower(&format!("{}:low_pass_nonvanishing", pair.name), NONVANISHING_FLOOR, pts)
        .informational()
        .with_note("hypothesis check only")
}

/// `φ̂(x) − (1/√2) h(x/2) φ̂(x/2)` at the given points.
pub fn check_multiplicativity(pair: &ClassicalFilterPair, xs: &[f64], tol: f64) -> VerificationReport {
    let pts = xs
        .iter()
        .map(|&x| {
            let lhs = cascade_scaling(pair, x);
            let rhs = cascade_scaling(pair, x / 2.0).map(|v| pair.h.eval(x / 2.0) * v / SQRT2);
            let r = match (lhs, rhs) {
                (Ok(a), Ok(b)) => (a - b).norm(),
                _ => f64::NAN,
            };
            (x, r)
        })
        .collect();
    VerificationReport::upper(&format!("{}:cascade_multiplicativity", pair.name), tol, pts)
        .with_grid(GridSpec::points(xs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_examples() {
        let s = reference_filters(Reference::Shannon);
        assert_eq!(s.h.eval(0.0).re, SQRT2);
        assert_eq!(cascade_scaling(&s, 0.3).unwrap().re, 1.0);
        assert_eq!(cascade_scaling(&s, 0.7).unwrap().norm(), 0.0);
        assert_eq!(wavelet_hat_classical(&s, 0.75).unwrap().norm(), 1.0);
        assert_eq!(wavelet_hat_classical(&s, 0.3).unwrap().norm(), 0.0);
    }

    #[test]
    fn cascade_at_zero() {
        for w in [Reference::Haar, Reference::Shannon, Reference::Cohen] {
            let p = reference_filters(w);
            assert!((cascade_scaling(&p, 0.0).unwrap() - 1.0).norm() < 1e-15);
            assert_eq!(wavelet_hat_classical(&p, 0.0).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn cohen_matches_closed_form() {
        let c = reference_filters(Reference::Cohen);
        let x = 0.2;
        assert!((cascade_scaling(&c, x).unwrap() - cohen_phi_closed(x)).norm() < 1e-12);
    }

    #[test]
    fn haar_matches_closed_form() {
        let h = reference_filters(Reference::Haar);
        for i in 0..200 {
            let x = -20.0 + 40.0 * (i as f64 + 0.3) / 200.0;
            let d = (wavelet_hat_classical(&h, x).unwrap() - haar_psi_closed(x)).norm();
            assert!(d < 1e-12, "x={x} d={d}");
        }
    }

    #[test]
    fn eq7_high_pass() {
        let s = reference_filters(Reference::Shannon);
        let g = high_pass_from_low(&s.h).unwrap();
        let v = g.eval(0.3);
        assert!((v.norm() - SQRT2).abs() < 1e-15);
        assert!((v - SQRT2 * expo(2.0 * PI * 0.3)).norm() < 1e-15);
        assert_eq!(g.eval(0.1).norm(), 0.0);
        let h = reference_filters(Reference::Haar);
        let gh = high_pass_from_low(&h.h).unwrap();
        for i in 0..64 {
            let x = i as f64 / 64.0 + 0.003;
            assert!((gh.eval(x).norm_sqr() + gh.eval(x + 0.5).norm_sqr() - 2.0).abs() < 1e-12);
            let o = h.h.eval(x) * gh.eval(x).conj() + h.h.eval(x + 0.5) * gh.eval(x + 0.5).conj();
            assert!(o.norm() < 1e-12);
        }
        let bad = PeriodicFilter::closed("h", "1", true, true, |_| Complex64::new(2.0, 0.0));
        assert!(high_pass_from_low(&bad).is_err());
    }

    #[test]
    fn cohen_vanishes_in_quarter_band() {
        let c = reference_filters(Reference::Cohen);
        let r = check_nonvanishing(&c);
        assert!(!r.pass);
        assert!(r.max_residual < 1e-12);
        assert!(check_nonvanishing(&reference_filters(Reference::Haar)).pass);
    }
}
