//! Frame functionals: dimension function, periodization, Calderón and shift
//! sums, decay profiles, time-domain samples and the proof identities.
//!
//! Every truncated sum is sized from a [`DecayModel`], an explicit pointwise
//! envelope of the transform, and carries the tail bound it implies.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::classical::{wavelet_hat_classical, ClassicalFilterPair, Reference};
use crate::gmra::GeneralizedFilterBank;
use crate::report::{GridSpec, SampledFunction, Truncation, VerificationReport};
use crate::support::{self, q_from_f64, IntervalUnion, Which};
use crate::util::{reduce, rng, SQRT2};
use crate::{Error, Result};

/// Pointwise envelope of a transform `f̂`, used to size truncations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayModel {
    /// `f̂ = 0` for `|x| ≥ radius` and for `|x| < gap`; `|f̂| ≤ 1` otherwise.
    Compact { radius: f64, gap: f64 },
    /// `|f̂(x)| ≤ min(1, high·|x|^-power, low·|x|)`.
    Algebraic { high: f64, power: f64, low: f64 },
    /// Generation bound `3^{n+1} 8^{r+1} 8^{-3n/2} / |y|^{r+1}` on
    /// `8^n/2 < |y| < 8^{n+1}`, with `y = x/scale`, times `count`
    /// (the number of scaling functions contributing); zero for `|x| < gap`.
    Generations { r: u32, scale: f64, count: f64, gap: f64 },
}

/// Components per generation of `A_n ∪ B_n ∪ C_n`.
fn components_in_generation(n: u32) -> f64 {
    3.0 * 2f64.powi(n as i32 + 2)
}

/// Measure of `A_n ∪ B_n ∪ C_n`.
fn measure_of_generation(n: u32) -> f64 {
    3.0 * 2f64.powi(n as i32 + 2) / 7.0
}

/// The bound printed for generation `n`, divided by `|y|^{r+1}`.
pub fn generation_bound(r: u32, n: u32, y: f64) -> f64 {
    let c = 3f64.powi(n as i32 + 1) * 8f64.powi(r as i32 + 1) / 8f64.powf(1.5 * n as f64);
    c / y.abs().powi(r as i32 + 1)
}

/// The constant `3^{n+1} 8^{r+1} / 8^{3n/2}`.
pub fn decay_bound(r: u32, n: u32) -> f64 {
    generation_bound(r, n, 1.0)
}

const GEN_CAP: u32 = 60;

impl DecayModel {
    /// Envelope of `|f̂(x)|` at `|x| = a`.
    pub fn pointwise(&self, a: f64) -> f64 {
        let a = a.abs();
        match *self {
            DecayModel::Compact { radius, gap } => {
                if a >= radius || a < gap {
                    0.0
                } else {
                    1.0
                }
            }
            DecayModel::Algebraic { high, power, low } => (high * a.powf(-power)).min(low * a).min(1.0),
            DecayModel::Generations { r, scale, count, gap } => {
                if a < gap {
                    return 0.0;
                }
                let y = a / scale;
                if y <= 4.0 {
                    return 1.0;
                }
                let mut best: f64 = 0.0;
                for n in 0..GEN_CAP {
                    let p = 8f64.powi(n as i32);
                    if y > p / 2.0 && y < 8.0 * p {
                        best = best.max(count * generation_bound(r, n, y));
                    }
                    if p / 2.0 > y {
                        break;
                    }
                }
                best.min(1.0)
            }
        }
    }

    fn gen_sup(r: u32, scale: f64, count: f64, n: u32, from: f64) -> f64 {
        let lo = (8f64.powi(n as i32) / 2.0).max(from / scale);
        (count * generation_bound(r, n, lo)).min(1.0)
    }

    fn gens_beyond(scale: f64, x: f64) -> impl Iterator<Item = u32> {
        (0..GEN_CAP).filter(move |&n| scale * 8f64.powi(n as i32 + 1) > x)
    }

    /// Bound on `Σ_{j≥0} |f̂(2^j a)|²`.
    pub fn dyadic_tail(&self, a: f64) -> f64 {
        let mut s = 0.0;
        let mut y = a.abs();
        if y == 0.0 {
            return 0.0;
        }
        for _ in 0..4000 {
            let e = self.pointwise(y);
            s += e * e;
            if let DecayModel::Compact { radius, .. } = *self {
                if y >= radius {
                    break;
                }
            } else if y > 1.0 && e * e < 1e-40 * s.max(1e-300) {
                break;
            }
            y *= 2.0;
            if !y.is_finite() {
                break;
            }
        }
        s
    }

    /// Bound on `Σ_{j<0} |f̂(2^j a)|²` (the part below `a`).
    pub fn dyadic_low_tail(&self, a: f64) -> f64 {
        match *self {
            DecayModel::Compact { gap, .. } | DecayModel::Generations { gap, .. } => {
                if a.abs() / 2.0 < gap {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            DecayModel::Algebraic { low, .. } => low * low * a * a / 4.0 / (1.0 - 0.25),
        }
    }

    /// Bound on `Σ |f̂(x+l)|²` over the integers `l` with `|x+l| > cut`.
    pub fn lattice_tail(&self, cut: f64) -> f64 {
        match *self {
            DecayModel::Compact { radius, .. } => {
                if cut >= radius {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            DecayModel::Algebraic { high, power, .. } => {
                if cut <= 1.0 || power <= 0.5 {
                    return f64::INFINITY;
                }
                2.0 * high * high * (cut - 1.0).powf(1.0 - 2.0 * power) / (2.0 * power - 1.0)
            }
            DecayModel::Generations { r, scale, count, .. } => {
                // each component is shorter than 1, so holds at most one lattice point
                Self::gens_beyond(scale, cut)
                    .map(|n| {
                        let s = Self::gen_sup(r, scale, count, n, cut);
                        components_in_generation(n) * 2.0 * s * s
                    })
                    .sum()
            }
        }
    }

    /// Bound on `Σ_{j≥1} Σ_k |f̂(2^j(x+k))|²` over the terms with
    /// `|2^j(x+k)| > cut`.
    pub fn dilation_lattice_tail(&self, x: f64, cut: f64) -> f64 {
        let d = match reduce(x).abs() {
            v if v == 0.0 => 1.0,
            v => v,
        };
        match *self {
            DecayModel::Compact { radius, .. } => {
                if cut >= radius {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            DecayModel::Algebraic { high, power, .. } => {
                if power <= 0.5 {
                    return f64::INFINITY;
                }
                let mut s = 0.0;
                let mut step = 2.0;
                while step * d < 1e300 {
                    let from = cut.max(step * d);
                    // lattice of spacing `step`, starting at `from`
                    s += 2.0 * high * high * (from.powf(-2.0 * power) + from.powf(1.0 - 2.0 * power) / ((2.0 * power - 1.0) * step));
                    if from.powf(-2.0 * power) < 1e-40 && step * d > cut {
                        break;
                    }
                    step *= 2.0;
                }
                s
            }
            DecayModel::Generations { r, scale, count, .. } => Self::gens_beyond(scale, cut)
                .map(|n| {
                    let top = scale * 8f64.powi(n as i32 + 1);
                    let len = 2.0 * top;
                    let ncomp = components_in_generation(n);
                    let jmax = (top / d).log2().ceil().max(1.0) as i32;
                    let pts: f64 = (1..=jmax).map(|j| ncomp.min(len / 2f64.powi(j) + 2.0)).sum();
                    let s = Self::gen_sup(r, scale, count, n, cut);
                    pts * s * s
                })
                .sum(),
        }
    }

    /// Bound on `∫_{|x|>cut} |f̂|²`.
    pub fn energy_tail(&self, cut: f64) -> f64 {
        match *self {
            DecayModel::Compact { radius, .. } => {
                if cut >= radius {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            DecayModel::Algebraic { high, power, .. } => {
                if power <= 0.5 {
                    return f64::INFINITY;
                }
                2.0 * high * high * cut.powf(1.0 - 2.0 * power) / (2.0 * power - 1.0)
            }
            DecayModel::Generations { r, scale, count, .. } => Self::gens_beyond(scale, cut)
                .map(|n| {
                    let s = Self::gen_sup(r, scale, count, n, cut);
                    scale * measure_of_generation(n) * s * s
                })
                .sum(),
        }
    }

    /// Smallest `2^k` (k ≥ 0) whose tail, as measured by `tail`, is at most `tol`.
    pub fn cutoff_for(&self, tol: f64, tail: impl Fn(&Self, f64) -> f64) -> Result<(f64, f64)> {
        if let DecayModel::Compact { radius, .. } = *self {
            return Ok((radius, 0.0));
        }
        let mut x: f64 = 1.0;
        for _ in 0..64 {
            let t = tail(self, x);
            if t <= tol {
                return Ok((x, t));
            }
            x *= 2.0;
        }
        Err(Error::Domain(format!("no truncation reaches tail {tol:e}")))
    }

    pub fn describe(&self) -> String {
        match *self {
            DecayModel::Compact { radius, gap } => format!("compact support, radius {radius}, gap {gap}"),
            DecayModel::Algebraic { high, power, low } => {
                format!("algebraic envelope min(1, {high}|x|^-{power}, {low}|x|)")
            }
            DecayModel::Generations { r, scale, count, .. } => {
                format!("generation bound r={r}, argument scale {scale}, multiplicity {count}")
            }
        }
    }
}

/// A transform together with its envelope.
#[derive(Clone)]
pub struct Spectrum {
    pub name: String,
    pub model: DecayModel,
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    support: Option<Arc<dyn Fn(f64) -> Result<Vec<(f64, f64)>> + Send + Sync>>,
}

impl std::fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectrum").field("name", &self.name).field("model", &self.model).finish()
    }
}

impl Spectrum {
    pub fn new(name: &str, model: DecayModel, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Spectrum { name: name.into(), model, f: Arc::new(f), support: None }
    }

    /// Attach a map from a cutoff to the support components inside it.
    pub fn with_support(mut self, s: impl Fn(f64) -> Result<Vec<(f64, f64)>> + Send + Sync + 'static) -> Self {
        self.support = Some(Arc::new(s));
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    /// Support components within `[-cutoff, cutoff]`; the whole window if
    /// no support map is attached.
    pub fn components(&self, cutoff: f64) -> Result<Vec<(f64, f64)>> {
        match &self.support {
            Some(s) => s(cutoff),
            None => Ok(vec![(-cutoff, cutoff)]),
        }
    }
}

fn bank_r(bank: &GeneralizedFilterBank) -> Option<u32> {
    bank.bump.as_ref().map(|p| p.r)
}

/// `ψ̂` of a filter bank with its envelope.
pub fn psi_spectrum(bank: &Arc<GeneralizedFilterBank>) -> Spectrum {
    let b = bank.clone();
    let model = match bank_r(bank) {
        Some(r) => DecayModel::Generations { r, scale: 2.0, count: 2.0, gap: 1.0 / 7.0 },
        None => DecayModel::Compact { radius: 16.0 / 7.0, gap: 2.0 / 7.0 },
    };
    let s = Spectrum::new(&format!("{}:psi_hat", bank.name), model, move |x| b.psi_hat(x));
    if bank.bump.is_some() {
        s.with_support(|cut| {
            let half = q_from_f64(cut / 2.0);
            let u = support::limit_support(Which::Phi1, &half)?.union(&support::limit_support(Which::Phi2, &half)?);
            Ok(u.scale(&support::qi(2)).components_within(cut))
        })
    } else {
        let set = crate::gmra::journe_wavelet_set();
        s.with_support(move |cut| Ok(set.components_within(cut)))
    }
}

/// `φ̂₁` or `φ̂₂` of a filter bank with its envelope.
pub fn phi_spectrum(bank: &Arc<GeneralizedFilterBank>, which: Which) -> Spectrum {
    let b = bank.clone();
    let i = match which {
        Which::Phi1 => 0,
        Which::Phi2 => 1,
    };
    let model = match bank_r(bank) {
        Some(r) => DecayModel::Generations { r, scale: 1.0, count: 1.0, gap: 0.0 },
        None => DecayModel::Compact { radius: if i == 0 { 4.0 / 7.0 } else { 8.0 / 7.0 }, gap: 0.0 },
    };
    let name = format!("{}:phi{}_hat", bank.name, i + 1);
    let s = Spectrum::new(&name, model, move |x| b.phi_hat(x)[i]);
    if bank.bump.is_some() {
        s.with_support(move |cut| Ok(support::limit_support(which, &q_from_f64(cut))?.components_within(cut)))
    } else {
        let set = crate::gmra::journe_scaling_sets()[i].clone();
        s.with_support(move |cut| Ok(set.components_within(cut)))
    }
}

/// `ψ̂` of a classical pair with its envelope.
pub fn classical_psi_spectrum(pair: &ClassicalFilterPair, which: Reference) -> Spectrum {
    let model = match which {
        Reference::Haar => DecayModel::Algebraic { high: 2.0 / PI, power: 1.0, low: PI / 2.0 },
        Reference::Shannon => DecayModel::Compact { radius: 1.0, gap: 0.5 },
        // (1/3)χ_[0,3) has the same envelope shape as Haar, with its own constants
        Reference::Cohen => DecayModel::Algebraic { high: 2.0 / (3.0 * PI), power: 1.0, low: 3.0 * PI / 2.0 },
    };
    let p = pair.clone();
    let s = Spectrum::new(&format!("{}:psi_hat", pair.name), model, move |x| {
        wavelet_hat_classical(&p, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    });
    if which == Reference::Shannon {
        let set = IntervalUnion::symmetric(support::q(1, 2), support::q(1, 1), false);
        s.with_support(move |cut| Ok(set.components_within(cut)))
    } else {
        s
    }
}

// Dimension function

/// `Σ_{|k|≤k_max} Σ_{j=1..j_max} |ψ̂(2^j(x+k))|²`.
pub fn dimension_function(psi: impl Fn(f64) -> Complex64, x: f64, j_max: u32, k_max: u32) -> f64 {
    let k = k_max as i64;
    let mut s = 0.0;
    for kk in -k..=k {
        let y = x + kk as f64;
        let mut t = y;
        for _ in 1..=j_max {
            t *= 2.0;
            s += psi(t).norm_sqr();
        }
    }
    s
}

/// A truncated value with its truncation record.
#[derive(Clone, Debug, Serialize)]
pub struct Truncated<T> {
    pub value: T,
    pub truncation: Truncation,
}

/// Dimension function keeping every term with `|2^j(x+k)| ≤ cutoff`, where
/// the cutoff makes the model's tail bound at most `tail_tol`.
pub fn dimension_function_auto(psi: &Spectrum, x: f64, tail_tol: f64) -> Result<Truncated<f64>> {
    let m = psi.model;
    let (cut, tail) = m.cutoff_for(tail_tol, |m, c| m.dilation_lattice_tail(x, c))?;
    let kmax = (cut / 2.0 + 1.0).ceil() as i64;
    let mut s = 0.0;
    let mut jmax = 0i64;
    for k in -kmax..=kmax {
        let y = x + k as f64;
        if y == 0.0 {
            continue;
        }
        let mut t = 2.0 * y;
        let mut j = 1;
        while t.abs() <= cut {
            s += psi.eval(t).norm_sqr();
            jmax = jmax.max(j);
            t *= 2.0;
            j += 1;
        }
    }
    Ok(Truncated {
        value: s,
        truncation: Truncation {
            policy: format!("|2^j(x+k)| <= cutoff; {}", m.describe()),
            j_range: Some([1, jmax]),
            k_range: Some([-kmax, kmax]),
            cutoff: Some(cut),
            tail_bound: Some(tail),
        },
    })
}

// Periodization

/// `Σ_{|l|≤k_max} |f̂(x+l)|²`.
pub fn periodization(f: impl Fn(f64) -> Complex64, x: f64, k_max: u32) -> f64 {
    let k = k_max as i64;
    (-k..=k).map(|l| f(x + l as f64).norm_sqr()).sum()
}

/// Periodization keeping the lattice points with `|x+l| ≤ cutoff`.
pub fn periodization_auto(f: &Spectrum, x: f64, tail_tol: f64) -> Result<Truncated<f64>> {
    let m = f.model;
    let (cut, tail) = m.cutoff_for(tail_tol, |m, c| m.lattice_tail(c))?;
    let lo = (-cut - x).ceil() as i64;
    let hi = (cut - x).floor() as i64;
    let s = (lo..=hi).map(|l| f.eval(x + l as f64).norm_sqr()).sum();
    Ok(Truncated {
        value: s,
        truncation: Truncation {
            policy: format!("|x+l| <= cutoff; {}", m.describe()),
            j_range: None,
            k_range: Some([lo, hi]),
            cutoff: Some(cut),
            tail_bound: Some(tail),
        },
    })
}

// Calderón and shift sums

/// `Σ_{j=j_lo..j_hi} |ψ̂(2^j ξ)|²`.
pub fn calderon_sum(psi: impl Fn(f64) -> Complex64, xi: f64, j_lo: i32, j_hi: i32) -> f64 {
    (j_lo..=j_hi).map(|j| psi(xi * 2f64.powi(j)).norm_sqr()).sum()
}

/// The `j` range whose two-sided tail is at most `tail_tol`, with the bound.
pub fn calderon_range(model: &DecayModel, xi: f64, tail_tol: f64) -> Result<(i32, i32, f64)> {
    if xi == 0.0 {
        return Err(Error::Domain("calderon sum at 0".into()));
    }
    let a = xi.abs();
    let half = tail_tol / 2.0;
    let mut j_lo = 0i32;
    // lowest j whose whole lower tail is within budget
    loop {
        let t = model.dyadic_low_tail(a * 2f64.powi(j_lo));
        if t <= half {
            break;
        }
        j_lo -= 1;
        if j_lo < -1100 {
            return Err(Error::Domain("no lower truncation".into()));
        }
    }
    while j_lo < 1100 && model.dyadic_low_tail(a * 2f64.powi(j_lo + 1)) <= half {
        j_lo += 1;
    }
    let low = model.dyadic_low_tail(a * 2f64.powi(j_lo));
    let mut j_hi = j_lo;
    loop {
        let t = model.dyadic_tail(a * 2f64.powi(j_hi + 1));
        if t <= half {
            return Ok((j_lo, j_hi, low + t));
        }
        j_hi += 1;
        if j_hi > 1100 {
            return Err(Error::Domain("no upper truncation".into()));
        }
    }
}

pub fn calderon_auto(psi: &Spectrum, xi: f64, tail_tol: f64) -> Result<Truncated<f64>> {
    let (lo, hi, tail) = calderon_range(&psi.model, xi, tail_tol)?;
    Ok(Truncated {
        value: calderon_sum(|x| psi.eval(x), xi, lo, hi),
        truncation: Truncation {
            policy: format!("dyadic window; {}", psi.model.describe()),
            j_range: Some([lo as i64, hi as i64]),
            k_range: None,
            cutoff: None,
            tail_bound: Some(tail),
        },
    })
}

/// `t_q(ξ) = Σ_{j=0..j_hi} ψ̂(2^j ξ) conj ψ̂(2^j (ξ+q))` for odd `q`.
pub fn shift_sum(psi: impl Fn(f64) -> Complex64, xi: f64, q: i64, j_hi: u32) -> Result<Complex64> {
    if q % 2 == 0 {
        return Err(Error::Domain(format!("shift sum needs odd q, got {q}")));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..=j_hi as i32 {
        let p = 2f64.powi(j);
        s += psi(p * xi) * psi(p * (xi + q as f64)).conj();
    }
    Ok(s)
}

pub fn shift_auto(psi: &Spectrum, xi: f64, q: i64, tail_tol: f64) -> Result<Truncated<Complex64>> {
    let m = psi.model;
    let (a, b) = (xi.abs(), (xi + q as f64).abs());
    let mut j_hi = 0u32;
    let tail = loop {
        let p = 2f64.powi(j_hi as i32 + 1);
        let t = (m.dyadic_tail(p * a) * m.dyadic_tail(p * b)).sqrt();
        if t <= tail_tol {
            break t;
        }
        j_hi += 1;
        if j_hi > 1100 {
            return Err(Error::Domain("no shift-sum truncation".into()));
        }
    };
    Ok(Truncated {
        value: shift_sum(|x| psi.eval(x), xi, q, j_hi)?,
        truncation: Truncation {
            policy: format!("Cauchy-Schwarz tail; {}", m.describe()),
            j_range: Some([0, j_hi as i64]),
            k_range: None,
            cutoff: None,
            tail_bound: Some(tail),
        },
    })
}

fn merge_truncations(ts: &[Truncation]) -> Truncation {
    let Some(first) = ts.first() else {
        return Truncation::policy("none");
    };
    let mut out = first.clone();
    for t in &ts[1..] {
        out.j_range = match (out.j_range, t.j_range) {
            (Some(a), Some(b)) => Some([a[0].min(b[0]), a[1].max(b[1])]),
            (a, b) => a.or(b),
        };
        out.k_range = match (out.k_range, t.k_range) {
            (Some(a), Some(b)) => Some([a[0].min(b[0]), a[1].max(b[1])]),
            (a, b) => a.or(b),
        };
        out.cutoff = match (out.cutoff, t.cutoff) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        out.tail_bound = match (out.tail_bound, t.tail_bound) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
    out
}

/// Points of `[lo, hi]` at least `margin` away from every multiple of
/// `1/den`, and from 0.
pub fn jittered_points(lo: f64, hi: f64, n: usize, seed: u64, den: f64, margin: f64) -> Vec<f64> {
    let mut g = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = g.gen_range(lo..hi);
        let k = (x * den).round();
        if (x - k / den).abs() < margin || x.abs() < margin {
            continue;
        }
        out.push(x);
    }
    out
}

/// Calderón sums on the grid, compared with 1.
pub fn check_calderon(psi: &Spectrum, xs: &[f64], tol: f64, tail_tol: f64) -> VerificationReport {
    let rows: Vec<(f64, f64, Truncation)> = xs
        .par_iter()
        .map(|&x| match calderon_auto(psi, x, tail_tol) {
            Ok(t) => (x, (t.value - 1.0).abs(), t.truncation),
            Err(_) => (x, f64::NAN, Truncation::policy("failed")),
        })
        .collect();
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    VerificationReport::upper(&format!("{}:calderon", psi.name), tol, rows.into_iter().map(|r| (r.0, r.1)).collect())
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
}

/// `|t_q(ξ)|` on the grid for each odd `q`.
pub fn check_shift(psi: &Spectrum, xs: &[f64], qs: &[i64], tol: f64, tail_tol: f64) -> VerificationReport {
    let rows: Vec<(f64, f64, Truncation)> = xs
        .par_iter()
        .map(|&x| {
            let mut worst: f64 = 0.0;
            let mut trs = Vec::new();
            for &q in qs {
                match shift_auto(psi, x, q, tail_tol) {
                    Ok(t) => {
                        worst = worst.max(t.value.norm());
                        trs.push(t.truncation);
                    }
                    Err(_) => worst = f64::NAN,
                }
            }
            (x, worst, merge_truncations(&trs))
        })
        .collect();
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    let qtxt = qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
    VerificationReport::upper(&format!("{}:shift", psi.name), tol, rows.into_iter().map(|r| (r.0, r.1)).collect())
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
        .with_note(&format!("q in {{{qtxt}}}"))
}

// Decay

#[derive(Clone, Debug, Serialize)]
pub struct DecayProfile {
    pub n: u32,
    pub r: u32,
    pub which: Which,
    /// `max |x|^{r+1} |φ̂_i(x)|` over the samples
    pub measured: f64,
    pub argmax: f64,
    pub bound: f64,
    pub samples: usize,
}

/// Samples `samples_per_component` jittered points in every component of
/// `A_n ∪ B_n ∪ C_n` and records the largest weighted magnitude.
pub fn decay_profile(
    bank: &GeneralizedFilterBank,
    which: Which,
    r: u32,
    n: u32,
    samples_per_component: usize,
    seed: u64,
) -> Result<DecayProfile> {
    if n == 0 {
        return Err(Error::Domain("decay profile needs n >= 1".into()));
    }
    let set = support::set_a(n)?.union(&support::set_b(n)?).union(&support::set_c(n)?);
    let mut g = rng(seed ^ (n as u64) << 8);
    let mut xs = Vec::new();
    for &(a, b) in set.approx() {
        let w = (b - a) / samples_per_component as f64;
        for k in 0..samples_per_component {
            let u: f64 = g.gen_range(0.05..0.95);
            xs.push(a + (k as f64 + u) * w);
        }
    }
    let i = match which {
        Which::Phi1 => 0,
        Which::Phi2 => 1,
    };
    let (measured, argmax) = xs
        .par_iter()
        .map(|&x| (x.abs().powi(r as i32 + 1) * bank.phi_hat(x)[i].norm(), x))
        .reduce(|| (0.0, 0.0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    Ok(DecayProfile { n, r, which, measured, argmax, bound: decay_bound(r, n), samples: xs.len() })
}

// Time domain

fn gl32() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| GaussLegendre::new(32).expect("degree 32").as_node_weight_pairs().to_vec())
}

#[derive(Clone, Debug)]
pub struct TimeDomain {
    pub samples: SampledFunction,
    /// `max |Im ψ(t)|`
    pub im_residual: f64,
    pub cutoff: f64,
    pub energy_tail: f64,
    pub panels: usize,
    /// `∫_{|x|≤cutoff} |ψ̂|²` by the same quadrature
    pub frequency_energy: f64,
}

/// Smallest cutoff whose truncated energy is at most `energy_tol`.
pub fn required_cutoff(model: &DecayModel, energy_tol: f64) -> Result<(f64, f64)> {
    model.cutoff_for(energy_tol, |m, c| m.energy_tail(c))
}

/// `ψ(t) ≈ ∫_{|x|≤cutoff} ψ̂(x) e^{2πixt} dx` with 32-point Gauss–Legendre
/// panels no wider than `panel_width`, aligned to the support components.
pub fn time_domain_samples(
    psi: &Spectrum,
    t_grid: &[f64],
    cutoff: f64,
    energy_tol: f64,
    panel_width: f64,
) -> Result<TimeDomain> {
    let (required, _) = required_cutoff(&psi.model, energy_tol)?;
    if cutoff < required {
        return Err(Error::Cutoff { given: cutoff, required });
    }
    let tail = psi.model.energy_tail(cutoff);
    let comps = psi.components(cutoff)?;
    let mut panels = Vec::new();
    for (a, b) in comps {
        let n = ((b - a) / panel_width).ceil().max(1.0) as usize;
        let w = (b - a) / n as f64;
        for k in 0..n {
            panels.push((a + k as f64 * w, a + (k + 1) as f64 * w));
        }
    }
    let nodes: Vec<(f64, f64, Complex64)> = panels
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
            gl32().iter().map(move |&(u, w)| (c + h * u, h * w))
        })
        .map(|(x, w)| (x, w, psi.eval(x)))
        .filter(|n| n.2 != Complex64::new(0.0, 0.0))
        .collect();
    let frequency_energy = nodes.iter().map(|n| n.1 * n.2.norm_sqr()).sum();
    let values: Vec<Complex64> = t_grid
        .par_iter()
        .map(|&t| {
            nodes
                .iter()
                .map(|&(x, w, v)| w * v * Complex64::from_polar(1.0, 2.0 * PI * x * t))
                .sum()
        })
        .collect();
    let im_residual = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let samples = SampledFunction::complex(&format!("{}:time", psi.name), t_grid.to_vec(), values)
        .meta("cutoff", cutoff)
        .meta("energy_tail", tail)
        .meta("panels", panels.len())
        .meta("quadrature", "gauss-legendre 32");
    Ok(TimeDomain { samples, im_residual, cutoff, energy_tail: tail, panels: panels.len(), frequency_energy })
}

/// Trapezoid rule for `∫|ψ(t)|² dt` on a uniform grid.
pub fn time_energy(s: &SampledFunction) -> f64 {
    let n = s.grid.len();
    if n < 2 {
        return 0.0;
    }
    let h = (s.grid[n - 1] - s.grid[0]) / (n - 1) as f64;
    let mag = |i: usize| s.re[i] * s.re[i] + s.im.as_ref().map_or(0.0, |im| im[i] * im[i]);
    h * ((0..n).map(mag).sum::<f64>() - 0.5 * (mag(0) + mag(n - 1)))
}

// Proof identities

/// `Σ c_k e^{2πikx}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigPoly {
    pub coeffs: Vec<(i64, Complex64)>,
}

impl TrigPoly {
    pub fn constant(c: f64) -> Self {
        TrigPoly { coeffs: vec![(0, Complex64::new(c, 0.0))] }
    }

    pub fn zero() -> Self {
        TrigPoly { coeffs: Vec::new() }
    }

    /// Coefficients uniform in the unit square for `|k| ≤ degree`.
    pub fn random(degree: i64, g: &mut impl Rng) -> Self {
        let coeffs = (-degree..=degree)
            .map(|k| (k, Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0))))
            .collect();
        TrigPoly { coeffs }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x))
            .sum()
    }
}

/// Residual of `T(S_H(f₁,f₂))(x) = √2 (f₁(2x)φ̂₁(2x) + f₂(2x)φ̂₂(2x))`
/// with `T(u₁,u₂) = u₁φ̂₁ + u₂φ̂₂`. Each `f_i` acts as the multiplier
/// `f_i χ_{S_i}` (periodized level set).
pub fn check_intertwining(
    bank: &GeneralizedFilterBank,
    f1: &TrigPoly,
    f2: &TrigPoly,
    xs: &[f64],
    tol: f64,
) -> VerificationReport {
    let s = [bank.m.level_set(1), bank.m.level_set(2)];
    let f = |i: usize, p: &TrigPoly, y: f64| if s[i].contains(reduce(y)) { p.eval(y) } else { Complex64::new(0.0, 0.0) };
    let pts = xs
        .par_iter()
        .map(|&x| {
            let a = f(0, f1, 2.0 * x);
            let b = f(1, f2, 2.0 * x);
            let h = bank.filter_matrix(x);
            let u1 = h[0][0] * a + h[1][0] * b;
            let u2 = h[0][1] * a + h[1][1] * b;
            let phi = bank.phi_hat(x);
            let lhs = u1 * phi[0] + u2 * phi[1];
            let phi2 = bank.phi_hat(2.0 * x);
            let rhs = SQRT2 * (a * phi2[0] + b * phi2[1]);
            (x, (lhs - rhs).norm())
        })
        .collect();
    VerificationReport::upper(&format!("{}:intertwining", bank.name), tol, pts).with_grid(GridSpec::points(xs))
}

/// Residual of `Σ_i g_i(x) e^{4πikx} φ̂_i(x) = √2 e^{4πikx} ψ̂(2x)`. With
/// `literal` the factor `√2` is dropped, matching the unnormalized display.
pub fn check_sg_base(bank: &GeneralizedFilterBank, k: i64, xs: &[f64], tol: f64, literal: bool) -> VerificationReport {
    let c = if literal { 1.0 } else { SQRT2 };
    let pts = xs
        .par_iter()
        .map(|&x| {
            let e = Complex64::from_polar(1.0, 4.0 * PI * k as f64 * x);
            let phi = bank.phi_hat(x);
            let lhs = bank.g[0].eval(x) * e * phi[0] + bank.g[1].eval(x) * e * phi[1];
            let rhs = c * e * bank.psi_hat(2.0 * x);
            (x, (lhs - rhs).norm())
        })
        .collect();
    let name = if literal {
        format!("{}:sg_base_k{k}_literal", bank.name)
    } else {
        format!("{}:sg_base_k{k}", bank.name)
    };
    let r = VerificationReport::upper(&name, tol, pts).with_grid(GridSpec::points(xs));
    if literal {
        r.informational().with_note("without the sqrt(2) normalization; expected to differ")
    } else {
        r
    }
}

/// `|ψ̂(−x) − conj ψ̂(x)|`.
pub fn check_hermitian(psi: &Spectrum, xs: &[f64], tol: f64) -> VerificationReport {
    let pts = xs.par_iter().map(|&x| (x, (psi.eval(-x) - psi.eval(x).conj()).norm())).collect();
    VerificationReport::upper(&format!("{}:hermitian_symmetry", psi.name), tol, pts).with_grid(GridSpec::points(xs))
}

// Periodization-based checks

fn per_rows(f: &Spectrum, xs: &[f64], tail_tol: f64) -> Vec<(f64, f64, Truncation)> {
    xs.par_iter()
        .map(|&x| match periodization_auto(f, x, tail_tol) {
            Ok(t) => (x, t.value, t.truncation),
            Err(_) => (x, f64::NAN, Truncation::policy("failed")),
        })
        .collect()
}

/// Upper check: `Per f < tol` at every point.
pub fn check_per_small(name: &str, f: &Spectrum, xs: &[f64], tol: f64, tail_tol: f64) -> VerificationReport {
    let rows = per_rows(f, xs, tail_tol);
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    VerificationReport::upper(name, tol, rows.into_iter().map(|r| (r.0, r.1)).collect())
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
}

/// Lower check: `Per f > threshold` at every point.
pub fn check_per_positive(name: &str, f: &Spectrum, xs: &[f64], threshold: f64, tail_tol: f64) -> VerificationReport {
    let rows = per_rows(f, xs, tail_tol);
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    VerificationReport::lower(name, threshold, rows.into_iter().map(|r| (r.0, r.1)).collect())
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
}

/// `Σ_{n≥0} 2^n 8^{-(n-1)r}`; infinite for `r = 0`.
pub fn per_upper_bound(r: u32) -> f64 {
    if r == 0 {
        return f64::INFINITY;
    }
    let q = 2.0 / 8f64.powi(r as i32);
    8f64.powi(r as i32) / (1.0 - q)
}

/// Existence check: the smallest sampled `Per f` on `xs` is below `tol`.
pub fn check_per_dips(name: &str, f: &Spectrum, xs: &[f64], tol: f64, tail_tol: f64) -> VerificationReport {
    let rows = per_rows(f, xs, tail_tol);
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    let best = rows
        .iter()
        .map(|r| (r.0, r.1))
        .fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    VerificationReport::upper(name, tol, vec![best])
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
        .with_note("passes when some sampled point falls below the tolerance")
}

/// `Per f > 0` exactly on `set` (periodized), at points at least `margin`
/// from its boundary.
pub fn check_per_support(name: &str, f: &Spectrum, set: &IntervalUnion, xs: &[f64], tail_tol: f64) -> VerificationReport {
    let rows = per_rows(f, xs, tail_tol);
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    let pts = rows
        .into_iter()
        .map(|(x, v, _)| {
            let inside = set.contains(reduce(x));
            (x, if (v > 0.0) == inside { 0.0 } else { 1.0 })
        })
        .collect();
    VerificationReport::upper(name, 0.5, pts)
        .with_grid(GridSpec::points(xs))
        .with_truncation(tr)
        .with_note("residual 1 marks a point where positivity and membership disagree")
}

/// `|D(x) − (Per φ̂₁ + Per φ̂₂)(x)|`.
pub fn check_dimension_per_identity(
    psi: &Spectrum,
    phi: [&Spectrum; 2],
    xs: &[f64],
    tol: f64,
    tail_tol: f64,
) -> VerificationReport {
    let rows: Vec<(f64, f64, Truncation)> = xs
        .par_iter()
        .map(|&x| {
            let d = dimension_function_auto(psi, x, tail_tol);
            let p1 = periodization_auto(phi[0], x, tail_tol);
            let p2 = periodization_auto(phi[1], x, tail_tol);
            match (d, p1, p2) {
                (Ok(d), Ok(a), Ok(b)) => (x, (d.value - a.value - b.value).abs(), d.truncation),
                _ => (x, f64::NAN, Truncation::policy("failed")),
            }
        })
        .collect();
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    VerificationReport::upper(
        &format!("{}:dimension_equals_periodized_scaling", psi.name),
        tol,
        rows.into_iter().map(|r| (r.0, r.1)).collect(),
    )
    .with_grid(GridSpec::points(xs))
    .with_truncation(tr)
}

/// Dimension function against the multiplicity function: the residual is
/// `|D(x) − m(x)|` before rounding. A second, informational report compares
/// only where each is nonzero.
pub fn check_dimension_multiplicity(
    psi: &Spectrum,
    m: &crate::gmra::MultiplicityFunction,
    xs: &[f64],
    tol: f64,
    tail_tol: f64,
) -> [VerificationReport; 2] {
    let rows: Vec<(f64, f64, Truncation)> = xs
        .par_iter()
        .map(|&x| match dimension_function_auto(psi, x, tail_tol) {
            Ok(t) => (x, t.value, t.truncation),
            Err(_) => (x, f64::NAN, Truncation::policy("failed")),
        })
        .collect();
    let tr = merge_truncations(&rows.iter().map(|r| r.2.clone()).collect::<Vec<_>>());
    let value = rows.iter().map(|r| (r.0, (r.1 - m.eval(r.0) as f64).abs())).collect();
    let supp = rows
        .iter()
        .map(|r| (r.0, if (r.1 > 1e-12) == (m.eval(r.0) > 0) { 0.0 } else { 1.0 }))
        .collect();
    [
        VerificationReport::upper(&format!("{}:dimension_function", psi.name), tol, value)
            .with_grid(GridSpec::points(xs))
            .with_truncation(tr.clone()),
        VerificationReport::upper(&format!("{}:dimension_support", psi.name), 0.5, supp)
            .with_grid(GridSpec::points(xs))
            .with_truncation(tr)
            .informational()
            .with_note("positivity of the dimension function against positivity of m"),
    ]
}

// Partial-product supports

/// Entries of the `3n`-factor partial product outside their predicted
/// lattice-family supports, plus the upper-right entry everywhere.
pub fn check_partial_supports(
    bank: &GeneralizedFilterBank,
    n: u32,
    xs: &[f64],
    tol: f64,
    upper_right_tol: f64,
) -> Result<Vec<VerificationReport>> {
    let fam = [support::support_a(n)?, support::support_c(n)?, support::support_d(n)?];
    let rows: Vec<(f64, [f64; 4])> = xs
        .par_iter()
        .map(|&x| {
            let p = bank.partial_product(x, n as usize);
            let off = |k: usize, v: Complex64| if fam[k].contains(x) { 0.0 } else { v.norm() };
            (x, [off(0, p[0][0]), off(1, p[1][0]), off(2, p[1][1]), p[0][1].norm()])
        })
        .collect();
    let grid = GridSpec::points(xs);
    let names = ["upper_left", "lower_left", "lower_right"];
    let mut out: Vec<VerificationReport> = (0..3)
        .map(|k| {
            VerificationReport::upper(
                &format!("{}:partial_product_n{n}_{}_outside_support", bank.name, names[k]),
                tol,
                rows.iter().map(|r| (r.0, r.1[k])).collect(),
            )
            .with_grid(grid.clone())
        })
        .collect();
    out.push(
        VerificationReport::upper(
            &format!("{}:partial_product_n{n}_upper_right", bank.name),
            upper_right_tol,
            rows.iter().map(|r| (r.0, r.1[3])).collect(),
        )
        .with_grid(grid),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::{build_p, make_smooth_step, Grade};
    use crate::classical::reference_filters;
    use crate::gmra::{example_bank, journe_bank};

    fn example(r: u32) -> Arc<GeneralizedFilterBank> {
        let p = build_p(r, make_smooth_step(Grade::Infinite).unwrap()).unwrap();
        Arc::new(example_bank(Arc::new(p)).unwrap())
    }

    #[test]
    fn journe_dimension_values() {
        let b = Arc::new(journe_bank());
        let psi = psi_spectrum(&b);
        // every term at 0 sits on an endpoint; -2 is excluded from the set
        assert_eq!(dimension_function(|x| psi.eval(x), 0.0, 10, 10), 1.0);
        assert_eq!(dimension_function(|x| psi.eval(x), 0.01, 10, 10), 2.0);
        assert_eq!(dimension_function(|x| psi.eval(x), 0.3, 10, 10), 0.0);
        assert_eq!(dimension_function_auto(&psi, 0.05, 1e-9).unwrap().value, 2.0);
    }

    #[test]
    fn journe_calderon_exact() {
        let b = Arc::new(journe_bank());
        let psi = psi_spectrum(&b);
        let c = calderon_auto(&psi, 0.6, 1e-10).unwrap();
        assert_eq!(c.value, 1.0);
        assert_eq!(shift_sum(|x| psi.eval(x), 0.1, 1, 10).unwrap().norm(), 0.0);
        assert!(shift_sum(|x| psi.eval(x), 0.1, 2, 10).is_err());
    }

    #[test]
    fn haar_calderon() {
        let h = reference_filters(Reference::Haar);
        let psi = classical_psi_spectrum(&h, Reference::Haar);
        let c = calderon_auto(&psi, 0.7, 1e-8).unwrap();
        assert!((c.value - 1.0).abs() < 1e-6, "{}", c.value);
    }

    #[test]
    fn example_calderon_point() {
        let b = example(1);
        let psi = psi_spectrum(&b);
        let c = calderon_auto(&psi, 0.3, 1e-9).unwrap();
        assert!((c.value - 1.0).abs() < 1e-6, "{}", c.value);
    }

    #[test]
    fn decay_bound_arithmetic() {
        assert!((decay_bound(1, 3) - 5184.0 / 8f64.powf(4.5)).abs() < 1e-12);
        let ratio = decay_bound(1, 4) / decay_bound(1, 3);
        assert!((ratio - 3.0 / 8f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn per_bound_series() {
        assert!(per_upper_bound(0).is_infinite());
        let direct: f64 = (0..200).map(|n| 2f64.powi(n) * 8f64.powi(-(n - 1))).sum();
        assert!((per_upper_bound(1) - direct).abs() < 1e-12);
    }

    #[test]
    fn trig_poly_eval() {
        let p = TrigPoly { coeffs: vec![(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))] };
        assert!((p.eval(0.1).re - 2.0 * (2.0 * PI * 0.1).cos()).abs() < 1e-15);
    }

    #[test]
    fn cutoff_refusal() {
        let h = reference_filters(Reference::Haar);
        let psi = classical_psi_spectrum(&h, Reference::Haar);
        match time_domain_samples(&psi, &[0.25], 10.0, 1e-3, 0.5) {
            Err(Error::Cutoff { required, .. }) => assert!(required > 10.0),
            other => panic!("{other:?}"),
        }
    }
}
