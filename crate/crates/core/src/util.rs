//! Small numeric helpers shared by the modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;
pub const FRAC_1_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Representative of `x` modulo 1 in `[-1/2, 1/2)`. Exact for finite `x`.
pub fn reduce(x: f64) -> f64 {
    let y = x - x.round();
    if y >= 0.5 {
        y - 1.0
    } else {
        y
    }
}

/// Exact sign of `q·y − p`: a fused multiply-add rounds once, so its sign
/// cannot flip.
pub fn cmp_frac(y: f64, p: f64, q: f64) -> Ordering {
    let d = q.mul_add(y, -p);
    d.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points on `[lo, hi)`, one per cell, jittered within the middle half
/// of the cell and pushed off every multiple of `1/avoid_den` by at least
/// `margin`.
pub fn jittered_grid(lo: f64, hi: f64, n: usize, seed: u64, avoid_den: f64, margin: f64) -> Vec<f64> {
    let mut r = rng(seed);
    let h = (hi - lo) / n as f64;
    (0..n)
        .map(|i| {
            let x = lo + h * (i as f64 + 0.25 + 0.5 * r.gen::<f64>());
            avoid_multiples(x, avoid_den, margin)
        })
        .collect()
}

/// Pushes `x` at least `margin` away from the nearest multiple of `1/den`.
pub fn avoid_multiples(x: f64, den: f64, margin: f64) -> f64 {
    if den <= 0.0 {
        return x;
    }
    let k = (x * den).round();
    let d = x - k / den;
    if d.abs() >= margin {
        x
    } else if d >= 0.0 {
        k / den + 2.0 * margin
    } else {
        k / den - 2.0 * margin
    }
}

/// Uniform grid with both endpoints, `n ≥ 2`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect()
}

/// Keeps the `k` largest `(x, residual)` pairs, ties broken by `x`, so the
/// result does not depend on evaluation order.
pub fn worst_k(mut pts: Vec<(f64, f64)>, k: usize) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal))
    });
    pts.truncate(k);
    pts
}

pub fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_is_in_range() {
        for &x in &[0.5, -0.5, 2.5, -2.5, 0.49999999999999994, 7.25, -1e9 + 0.3] {
            let y = reduce(x);
            assert!((-0.5..0.5).contains(&y), "{x} -> {y}");
        }
        assert_eq!(reduce(0.5), -0.5);
        assert_eq!(reduce(1.25), 0.25);
    }

    #[test]
    fn frac_sign_exact() {
        let y = 1.0 / 7.0;
        // y is the float nearest 1/7; the sign says which side it is on
        assert_ne!(cmp_frac(y, 1.0, 7.0), Ordering::Equal);
        assert_eq!(cmp_frac(0.25, 1.0, 4.0), Ordering::Equal);
        assert_eq!(cmp_frac(0.25f64.next_up(), 1.0, 4.0), Ordering::Greater);
    }

    #[test]
    fn jitter_deterministic_and_off_lattice() {
        let a = jittered_grid(-0.5, 0.5, 512, 7, 112.0, 1e-9);
        let b = jittered_grid(-0.5, 0.5, 512, 7, 112.0, 1e-9);
        assert_eq!(a, b);
        for x in a {
            let d = (x * 112.0 - (x * 112.0).round()).abs() / 112.0;
            assert!(d >= 1e-9);
        }
    }
}
