use std::sync::Arc;

use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::filter::PeriodicFilter;
use wavelab::gmra::{example_bank, journe_bank, GeneralizedFilterBank};
use wavelab::analysis::jittered_points;
use wavelab::util::reduce;

fn banks() -> Vec<GeneralizedFilterBank> {
    let p = build_p(1, make_smooth_step(Grade::Infinite).unwrap()).unwrap();
    vec![journe_bank(), example_bank(Arc::new(p)).unwrap()]
}

// indicator filters jump at multiples of 1/56
fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    jittered_points(lo, hi, n, 3, 56.0, 1e-9)
}

fn filters(b: &GeneralizedFilterBank) -> Vec<&PeriodicFilter> {
    b.h.iter().flatten().chain(b.g.iter()).collect()
}

#[test]
fn filters_are_one_periodic() {
    for b in banks() {
        for f in filters(&b) {
            for x in grid(-0.5, 0.5, 997) {
                for k in [-3.0, -1.0, 1.0, 2.0] {
                    let d = (f.eval(x + k) - f.eval(x)).norm();
                    assert!(d < 1e-12, "{}:{} at {x} shifted by {k}: {d}", b.name, f.name);
                }
            }
        }
    }
}

#[test]
fn even_filters_have_even_modulus() {
    for b in banks() {
        for f in filters(&b).into_iter().filter(|f| f.is_even) {
            for x in grid(0.0, 0.5, 499) {
                let d = (f.eval(-x).norm() - f.eval(x).norm()).abs();
                assert!(d < 1e-12, "{}:{} at {x}: {d}", b.name, f.name);
                if f.is_real {
                    assert!(f.eval(x).im.abs() < 1e-15);
                    assert!((f.eval(-x) - f.eval(x)).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn filters_vanish_off_their_supports() {
    for b in banks() {
        for f in filters(&b) {
            for x in grid(-0.5, 0.5, 1001) {
                if !f.in_support(reduce(x)) {
                    assert_eq!(f.eval(x).norm(), 0.0, "{}:{} at {x}", b.name, f.name);
                }
            }
        }
    }
}

#[test]
fn unvalidated_bump_is_rejected() {
    let p = wavelab::bump::Bump::from_step(1, make_smooth_step(Grade::Infinite).unwrap());
    assert!(example_bank(Arc::new(p)).is_err());
}
