use proptest::prelude::*;
use wavelab::support::{q, Interval, IntervalUnion, Q};

fn interval() -> impl Strategy<Value = Interval> {
    (-40i64..40, 0i64..20, any::<bool>(), any::<bool>())
        .prop_map(|(a, len, lc, hc)| Interval::new(q(a, 7), q(a + len, 7), lc, hc))
}

fn union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec(interval(), 0..5).prop_map(IntervalUnion::from_intervals)
}

fn probe() -> impl Strategy<Value = Q> {
    (-100i64..100).prop_map(|n| q(n, 14))
}

proptest! {
    #[test]
    fn union_is_idempotent(a in union()) {
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert_eq!(a.intersection(&a), a);
    }

    #[test]
    fn union_commutes(a in union(), b in union()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersection(&b), b.intersection(&a));
    }

    #[test]
    fn union_associates(a in union(), b in union(), c in union()) {
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersection(&b).intersection(&c), a.intersection(&b.intersection(&c)));
    }

    #[test]
    fn membership_matches_set_operations(a in union(), b in union(), x in probe()) {
        let (ia, ib) = (a.contains_q(&x), b.contains_q(&x));
        prop_assert_eq!(a.union(&b).contains_q(&x), ia || ib);
        prop_assert_eq!(a.intersection(&b).contains_q(&x), ia && ib);
    }

    #[test]
    fn measure_is_modular(a in union(), b in union()) {
        prop_assert_eq!(a.union(&b).measure() + a.intersection(&b).measure(), a.measure() + b.measure());
    }

    #[test]
    fn scaling_maps_members(a in union(), x in probe()) {
        let two = q(2, 1);
        prop_assert_eq!(a.scale(&two).contains_q(&(&x * &two)), a.contains_q(&x));
        prop_assert_eq!(a.neg().contains_q(&-x.clone()), a.contains_q(&x));
    }
}
