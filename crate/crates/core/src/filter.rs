//! 1-periodic filters with a declared support inside one period.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::bump::Bump;
use crate::support::{floor_q, IntervalUnion, Q};
use crate::util::{reduce, SQRT2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Infinite,
    Finite(u32),
    Piecewise,
}

/// What a filter evaluates to on its support (the argument is reduced to
/// `[-1/2, 1/2)` first).
#[derive(Clone)]
pub enum Formula {
    /// `√2 · coeff`; exact arithmetic is available.
    ScaledIndicator(i64),
    /// `p(y + shift)`
    Bump { p: Arc<Bump>, shift: f64, sign: f64 },
    /// `sign · e^{2πiy} · p(y + shift)` (the bump is real, so no conjugate is needed)
    ModulatedBump { p: Arc<Bump>, shift: f64, sign: f64 },
    /// A closed-form trigonometric expression.
    Closed(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::ScaledIndicator(c) => write!(f, "ScaledIndicator({c})"),
            Formula::Bump { shift, sign, .. } => write!(f, "Bump(shift={shift}, sign={sign})"),
            Formula::ModulatedBump { shift, sign, .. } => write!(f, "ModulatedBump(shift={shift}, sign={sign})"),
            Formula::Closed(_) => write!(f, "Closed"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodicFilter {
    pub name: String,
    /// Human-readable definition on the support.
    pub description: String,
    /// Support within `[-1/2, 1/2)`; `None` means the whole period.
    pub support: Option<IntervalUnion>,
    pub smoothness: Smoothness,
    pub is_real: bool,
    pub is_even: bool,
    pub formula: Formula,
}

impl PeriodicFilter {
    pub fn zero(name: &str) -> Self {
        PeriodicFilter {
            name: name.into(),
            description: "0".into(),
            support: Some(IntervalUnion::empty()),
            smoothness: Smoothness::Infinite,
            is_real: true,
            is_even: true,
            formula: Formula::ScaledIndicator(0),
        }
    }

    /// `√2 · χ_support`.
    pub fn sqrt2_indicator(name: &str, support: IntervalUnion, is_even: bool) -> Self {
        PeriodicFilter {
            name: name.into(),
            description: "sqrt(2)".into(),
            support: Some(support),
            smoothness: Smoothness::Piecewise,
            is_real: true,
            is_even,
            formula: Formula::ScaledIndicator(1),
        }
    }

    pub fn closed(
        name: &str,
        description: &str,
        is_real: bool,
        is_even: bool,
        f: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        PeriodicFilter {
            name: name.into(),
            description: description.into(),
            support: None,
            smoothness: Smoothness::Infinite,
            is_real,
            is_even,
            formula: Formula::Closed(Arc::new(f)),
        }
    }

    #[inline]
    pub fn in_support(&self, y: f64) -> bool {
        self.support.as_ref().is_none_or(|s| s.contains(y))
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let y = reduce(x);
        if !self.in_support(y) {
            return Complex64::new(0.0, 0.0);
        }
        match &self.formula {
            Formula::ScaledIndicator(c) => Complex64::new(SQRT2 * *c as f64, 0.0),
            Formula::Bump { p, shift, sign } => Complex64::new(sign * p.eval(y + shift), 0.0),
            Formula::ModulatedBump { p, shift, sign } => {
                Complex64::from_polar(sign * p.eval(y + shift), 2.0 * PI * y)
            }
            Formula::Closed(f) => f(x),
        }
    }

    /// Value as an integer multiple of `√2`, for piecewise-constant filters.
    pub fn sqrt2_coefficient(&self, x: &Q) -> Option<i64> {
        let Formula::ScaledIndicator(c) = self.formula else {
            return None;
        };
        let y = reduce_q(x);
        let inside = self.support.as_ref().is_none_or(|s| s.contains_q(&y));
        Some(if inside { c } else { 0 })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.formula, Formula::ScaledIndicator(_))
    }
}

/// Representative of `x` modulo 1 in `[-1/2, 1/2)`.
pub fn reduce_q(x: &Q) -> Q {
    let half = Q::new(1.into(), 2.into());
    x - Q::from_integer(floor_q(&(x + &half)))
}

#[derive(Serialize)]
pub struct FilterDoc<'a> {
    pub name: &'a str,
    pub definition: &'a str,
    pub support: Option<&'a IntervalUnion>,
    pub smoothness: Smoothness,
    pub is_real: bool,
    pub is_even: bool,
}

impl PeriodicFilter {
    pub fn doc(&self) -> FilterDoc<'_> {
        FilterDoc {
            name: &self.name,
            definition: &self.description,
            support: self.support.as_ref(),
            smoothness: self.smoothness,
            is_real: self.is_real,
            is_even: self.is_even,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::{q, Interval};

    #[test]
    fn indicator_periodic() {
        let f = PeriodicFilter::sqrt2_indicator(
            "g2",
            IntervalUnion::single(Interval::half_open(q(-1, 7), q(1, 7))),
            true,
        );
        assert_eq!(f.eval(0.0).re, SQRT2);
        assert_eq!(f.eval(3.0).re, SQRT2);
        assert_eq!(f.eval(0.2).re, 0.0);
        assert_eq!(f.sqrt2_coefficient(&q(29, 14)), Some(1));
        assert_eq!(f.sqrt2_coefficient(&q(15, 7)), Some(0));
        assert_eq!(f.sqrt2_coefficient(&q(8, 7)), Some(0));
        assert_eq!(f.sqrt2_coefficient(&q(-1, 7)), Some(1));
    }

    #[test]
    fn reduce_q_range() {
        assert_eq!(reduce_q(&q(1, 2)), q(-1, 2));
        assert_eq!(reduce_q(&q(-5, 2)), q(-1, 2));
        assert_eq!(reduce_q(&q(9, 7)), q(2, 7));
    }
}
