//! Exact rational interval sets and the lattice families that describe the
//! supports of the scaling-vector entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use std::cmp::Ordering;

use crate::Error;

pub type Q = BigRational;

/// Largest generation index accepted by [`set_a`], [`set_b`] and [`set_c`].
pub const MAX_GENERATION: u32 = 20;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn pow8(k: u32) -> Q {
    Q::from_integer(BigInt::from(8u32).pow(k))
}

/// Exact value of a finite float.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn q_str(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let mut it = s.trim().splitn(2, '/');
    let n: BigInt = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let d: BigInt = match it.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Self {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, true, true)
    }

    /// `[lo, hi)`
    pub fn half_open(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, true, false)
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        above
            && match x.cmp(&self.hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Greater => false,
            }
    }

    pub fn length(&self) -> Q {
        if self.is_empty() {
            Q::zero()
        } else {
            &self.hi - &self.lo
        }
    }

    pub fn translate(&self, t: &Q) -> Self {
        Self::new(&self.lo + t, &self.hi + t, self.lo_closed, self.hi_closed)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_negative() {
            Self::new(&self.hi * s, &self.lo * s, self.hi_closed, self.lo_closed)
        } else {
            Self::new(&self.lo * s, &self.hi * s, self.lo_closed, self.hi_closed)
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&qi(-1))
    }

    fn intersect(&self, o: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&o.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (o.lo.clone(), o.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && o.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&o.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (o.hi.clone(), o.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && o.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }
}

/// Finite union of intervals with rational endpoints, kept sorted, disjoint
/// and merged.
#[derive(Clone, Debug, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
    // f64 images of the endpoints, used to skip exact arithmetic far from them
    approx: Vec<(f64, f64)>,
}

impl PartialEq for IntervalUnion {
    fn eq(&self, o: &Self) -> bool {
        self.intervals == o.intervals
    }
}

impl Eq for IntervalUnion {}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(it: I) -> Self {
        let mut v: Vec<Interval> = it.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            if let Some(last) = out.last_mut() {
                let joins = match iv.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => iv.lo_closed || last.hi_closed,
                    Ordering::Greater => false,
                };
                if joins {
                    match iv.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = iv.hi;
                            last.hi_closed = iv.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= iv.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        let approx = out.iter().map(|i| (q_to_f64(&i.lo), q_to_f64(&i.hi))).collect();
        IntervalUnion { intervals: out, approx }
    }

    pub fn single(iv: Interval) -> Self {
        Self::from_intervals([iv])
    }

    /// `±[a,b]` (closed) or `±[a,b)` under the convention `[a,b) ∪ [-b,-a)`.
    pub fn symmetric(lo: Q, hi: Q, closed: bool) -> Self {
        let pos = Interval::new(lo.clone(), hi.clone(), true, closed);
        let neg = Interval::new(-hi, -lo, true, closed);
        Self::from_intervals([pos, neg])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn union(&self, o: &IntervalUnion) -> IntervalUnion {
        Self::from_intervals(self.intervals.iter().chain(o.intervals.iter()).cloned())
    }

    pub fn intersection(&self, o: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < o.intervals.len() {
            let a = &self.intervals[i];
            let b = &o.intervals[j];
            let c = a.intersect(b);
            if !c.is_empty() {
                out.push(c);
            }
            if a.hi < b.hi || (a.hi == b.hi && !a.hi_closed) {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn translate(&self, t: &Q) -> IntervalUnion {
        Self::from_intervals(self.intervals.iter().map(|i| i.translate(t)))
    }

    pub fn scale(&self, s: &Q) -> IntervalUnion {
        Self::from_intervals(self.intervals.iter().map(|i| i.scale(s)))
    }

    pub fn neg(&self) -> IntervalUnion {
        self.scale(&qi(-1))
    }

    pub fn measure(&self) -> Q {
        self.intervals.iter().fold(Q::zero(), |acc, i| acc + i.length())
    }

    pub fn inf(&self) -> Option<&Q> {
        self.intervals.first().map(|i| &i.lo)
    }

    pub fn sup(&self) -> Option<&Q> {
        self.intervals.last().map(|i| &i.hi)
    }

    /// All endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<Q> {
        self.intervals.iter().flat_map(|i| [i.lo.clone(), i.hi.clone()]).collect()
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        let k = self.intervals.partition_point(|i| &i.hi < x);
        self.intervals[k..]
            .iter()
            .take(2)
            .any(|i| i.contains_q(x))
    }

    /// Exact membership of a float. Far from every endpoint the decision is
    /// made in floating point; otherwise the float is converted exactly.
    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        let k = self.approx.partition_point(|&(_, hi)| hi + slack(hi) < x);
        for &(lo, hi) in self.approx.iter().skip(k).take(2) {
            if (x - lo).abs() <= slack(lo) || (x - hi).abs() <= slack(hi) {
                return self.contains_q(&q_from_f64(x));
            }
            if x > lo && x < hi {
                return true;
            }
        }
        false
    }

    /// Distance from `x` to the nearest endpoint (in floating point).
    pub fn distance_to_boundary(&self, x: f64) -> f64 {
        self.approx
            .iter()
            .flat_map(|&(a, b)| [(x - a).abs(), (x - b).abs()])
            .fold(f64::INFINITY, f64::min)
    }

    /// Components clipped to `[-r, r]`, as floats.
    pub fn components_within(&self, r: f64) -> Vec<(f64, f64)> {
        self.approx
            .iter()
            .filter(|&&(a, b)| b >= -r && a <= r)
            .map(|&(a, b)| (a.max(-r), b.min(r)))
            .filter(|(a, b)| b > a)
            .collect()
    }

    pub fn approx(&self) -> &[(f64, f64)] {
        &self.approx
    }
}

fn slack(e: f64) -> f64 {
    1e-12 * e.abs().max(1.0)
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.intervals.len()))?;
        for i in &self.intervals {
            seq.serialize_element(&[q_str(&i.lo), q_str(&i.hi)])?;
        }
        seq.end()
    }
}

/// `step·Z + base`.
#[derive(Clone, Debug)]
pub struct LatticeFamily {
    pub base: IntervalUnion,
    pub step: Q,
    step_f: f64,
    lo_f: f64,
    hi_f: f64,
}

impl LatticeFamily {
    pub fn new(base: IntervalUnion, step: Q) -> Self {
        assert!(step.is_positive());
        let lo_f = base.inf().map(q_to_f64).unwrap_or(0.0);
        let hi_f = base.sup().map(q_to_f64).unwrap_or(0.0);
        let step_f = q_to_f64(&step);
        LatticeFamily { base, step, step_f, lo_f, hi_f }
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        let (Some(lo), Some(hi)) = (self.base.inf(), self.base.sup()) else {
            return false;
        };
        let zmin = ((x - hi) / &self.step).ceil().to_integer();
        let zmax = ((x - lo) / &self.step).floor().to_integer();
        let mut z = zmin;
        while z <= zmax {
            let y = x - Q::from_integer(z.clone()) * &self.step;
            if self.base.contains_q(&y) {
                return true;
            }
            z += 1;
        }
        false
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.base.is_empty() || !x.is_finite() {
            return false;
        }
        let zmin = ((x - self.hi_f) / self.step_f).ceil() - 1.0;
        let zmax = ((x - self.lo_f) / self.step_f).floor() + 1.0;
        let mut z = zmin;
        while z <= zmax {
            match exact_sub(x, z, self.step_f) {
                Some(y) if self.base.far_from_endpoints(y) => {
                    if self.base.contains(y) {
                        return true;
                    }
                }
                _ => {
                    let zq = Q::from_integer(BigInt::from(z as i64));
                    if self.base.contains_q(&(q_from_f64(x) - zq * &self.step)) {
                        return true;
                    }
                }
            }
            z += 1.0;
        }
        false
    }
}

impl IntervalUnion {
    fn far_from_endpoints(&self, x: f64) -> bool {
        let k = self.approx.partition_point(|&(_, hi)| hi < x - 1.0);
        self.approx[k..]
            .iter()
            .take_while(|&&(lo, _)| lo <= x + 1.0)
            .all(|&(lo, hi)| (x - lo).abs() > slack(lo) && (x - hi).abs() > slack(hi))
    }
}

// x - z*s when both the product and the difference are exact in f64
fn exact_sub(x: f64, z: f64, s: f64) -> Option<f64> {
    let p = z * s;
    if z.mul_add(s, -p) != 0.0 {
        return None;
    }
    let y = x - p;
    let bb = y - x;
    let err = (x - (y - bb)) + (-p - bb);
    (err == 0.0).then_some(y)
}

/// A union of lattice families.
#[derive(Clone, Debug)]
pub struct SupportFamily {
    pub families: Vec<LatticeFamily>,
}

impl SupportFamily {
    pub fn contains(&self, x: f64) -> bool {
        self.families.iter().any(|f| f.contains(x))
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        self.families.iter().any(|f| f.contains_q(x))
    }
}

fn check_k(k: u32) -> Result<(), Error> {
    if k > MAX_GENERATION {
        return Err(Error::Domain(format!(
            "generation {k} exceeds the cap {MAX_GENERATION}"
        )));
    }
    Ok(())
}

// all signed sums Σ_{j=0..k} a_j 8^j, a_j = ±1
fn signed_sums(k: u32) -> Vec<BigInt> {
    let mut sums = vec![BigInt::zero()];
    let mut p = BigInt::one();
    for _ in 0..=k {
        sums = sums
            .iter()
            .flat_map(|s| [s + &p, s - &p])
            .collect();
        p *= 8;
    }
    sums
}

fn generation(k: u32, factor: i64, inner: &IntervalUnion) -> Result<IntervalUnion, Error> {
    check_k(k)?;
    let f = BigInt::from(factor);
    let parts = signed_sums(k)
        .into_iter()
        .flat_map(|s| inner.translate(&Q::from_integer(s * &f)).intervals.clone());
    Ok(IntervalUnion::from_intervals(parts))
}

/// `A_k = ⋃ Σ 2 a_j 8^j ± [1/7, 2/7]`
pub fn set_a(k: u32) -> Result<IntervalUnion, Error> {
    generation(k, 2, &IntervalUnion::symmetric(q(1, 7), q(2, 7), true))
}

/// `B_k = ⋃ Σ 4 a_j 8^j ± [3/7, 4/7]`
pub fn set_b(k: u32) -> Result<IntervalUnion, Error> {
    generation(k, 4, &IntervalUnion::symmetric(q(3, 7), q(4, 7), true))
}

/// `C_k = ⋃ Σ a_j 8^j + [-1/7, 1/7]`
pub fn set_c(k: u32) -> Result<IntervalUnion, Error> {
    generation(k, 1, &IntervalUnion::single(Interval::closed(q(-1, 7), q(1, 7))))
}

/// `[-2/7, 2/7] ∪ ±[3/7, 4/7]`
pub fn base_window() -> IntervalUnion {
    IntervalUnion::single(Interval::closed(q(-2, 7), q(2, 7)))
        .union(&IntervalUnion::symmetric(q(3, 7), q(4, 7), true))
}

fn union_of(sets: impl IntoIterator<Item = Result<IntervalUnion, Error>>) -> Result<IntervalUnion, Error> {
    let mut all = Vec::new();
    for s in sets {
        all.extend(s?.intervals);
    }
    Ok(IntervalUnion::from_intervals(all))
}

fn check_n(n: u32) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_k(n)
}

/// Support of the upper-left entry of the 3n-step partial product.
pub fn support_a(n: u32) -> Result<SupportFamily, Error> {
    check_n(n)?;
    let mut base = base_window();
    base = base.union(&union_of((0..n.saturating_sub(1)).map(set_a))?);
    base = base.union(&union_of((0..n).map(set_b))?);
    let main = LatticeFamily::new(base, pow8(n));
    let extra = LatticeFamily::new(set_a(n - 1)?, pow8(n - 1) * qi(4));
    Ok(SupportFamily { families: vec![main, extra] })
}

/// Support of the lower-left entry.
pub fn support_c(n: u32) -> Result<SupportFamily, Error> {
    check_n(n)?;
    let base = union_of((0..n).map(set_c))?;
    Ok(SupportFamily { families: vec![LatticeFamily::new(base, pow8(n))] })
}

/// Support of the lower-right entry.
pub fn support_d(n: u32) -> Result<SupportFamily, Error> {
    check_n(n)?;
    Ok(SupportFamily { families: vec![LatticeFamily::new(set_c(n - 1)?, pow8(n))] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Phi1,
    Phi2,
}

/// Support of the limit function `φ̂₁` or `φ̂₂` restricted to `[-radius, radius]`.
pub fn limit_support(which: Which, radius: &Q) -> Result<IntervalUnion, Error> {
    if radius > &pow8(7) {
        return Err(Error::Domain("window radius above 8^7".into()));
    }
    // generation k lives in |x| > 8^k/2
    let mut gens = 0u32;
    while pow8(gens) * q(1, 2) <= *radius {
        gens += 1;
    }
    let set = match which {
        Which::Phi1 => base_window()
            .union(&union_of((0..gens).map(set_a))?)
            .union(&union_of((0..gens).map(set_b))?),
        Which::Phi2 => union_of((0..gens).map(set_c))?,
    };
    let window = IntervalUnion::single(Interval::closed(-radius.clone(), radius.clone()));
    Ok(set.intersection(&window))
}

/// Check that every component of `A_k`, `B_k`, `C_k` lies in `8^k/2 < |x| < 8^(k+1)`.
pub fn generation_separated(k: u32) -> Result<bool, Error> {
    let lo = pow8(k) * q(1, 2);
    let hi = pow8(k + 1);
    for set in [set_a(k)?, set_b(k)?, set_c(k)?] {
        for i in set.intervals() {
            let (a, b) = if i.lo.is_negative() { (-i.hi.clone(), -i.lo.clone()) } else { (i.lo.clone(), i.hi.clone()) };
            if a.is_negative() || a <= lo || b >= hi {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn floor_q(x: &Q) -> BigInt {
    let (d, _) = x.numer().div_mod_floor(x.denom());
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c0_matches_closed_form() {
        let c0 = set_c(0).unwrap();
        let want = IntervalUnion::from_intervals([
            Interval::closed(q(-8, 7), q(-6, 7)),
            Interval::closed(q(6, 7), q(8, 7)),
        ]);
        assert_eq!(c0, want);
    }

    #[test]
    fn a0_four_pieces() {
        let a0 = set_a(0).unwrap();
        let want = IntervalUnion::symmetric(q(12, 7), q(13, 7), true)
            .union(&IntervalUnion::symmetric(q(15, 7), q(16, 7), true));
        assert_eq!(a0, want);
    }

    #[test]
    fn b0_translates() {
        let b0 = set_b(0).unwrap();
        assert_eq!(b0.len(), 4);
        assert!(b0.contains_q(&q(4, 1)) == false);
        assert!(b0.contains_q(&q(25, 7)));
        assert!(b0.contains_q(&q(-31, 7)));
    }

    #[test]
    fn generation_cap() {
        assert!(set_a(21).is_err());
    }

    #[test]
    fn support_d1_is_8z_plus_c0() {
        let d = support_d(1).unwrap();
        assert!(d.contains(1.0));
        assert!(d.contains(9.0));
        assert!(d.contains(-7.0));
        assert!(!d.contains(0.0));
        assert!(!d.contains(4.0));
    }

    #[test]
    fn gap_excluded_from_a() {
        for n in 1..=6 {
            assert!(!support_a(n).unwrap().contains_q(&q(3, 10)), "n={n}");
        }
        assert!(support_a(1).unwrap().contains(0.0));
    }

    #[test]
    fn separation_holds() {
        for k in 0..6 {
            assert!(generation_separated(k).unwrap());
        }
    }

    #[test]
    fn half_open_merge() {
        let u = IntervalUnion::from_intervals([
            Interval::half_open(q(0, 1), q(1, 2)),
            Interval::half_open(q(1, 2), q(1, 1)),
        ]);
        assert_eq!(u.len(), 1);
        let v = IntervalUnion::from_intervals([
            Interval::open(q(0, 1), q(1, 2)),
            Interval::open(q(1, 2), q(1, 1)),
        ]);
        assert_eq!(v.len(), 2);
        assert!(!v.contains(0.5));
    }

    #[test]
    fn float_membership_at_dyadic_endpoint() {
        let u = IntervalUnion::single(Interval::half_open(q(1, 4), q(2, 7)));
        assert!(u.contains(0.25));
        assert!(!u.contains(0.25f64.next_down()));
        let two_sevenths = 2.0 / 7.0;
        assert_eq!(u.contains(two_sevenths), q_from_f64(two_sevenths) < q(2, 7));
    }

    #[test]
    fn parse_roundtrip() {
        let v = parse_q("-16/7").unwrap();
        assert_eq!(q_str(&v), "-16/7");
        assert_eq!(parse_q("3").unwrap(), qi(3));
        assert!(parse_q("1/0").is_err());
    }
}
