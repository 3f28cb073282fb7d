//! Exact rational checks of the Journé filter bank and its wavelet set.

use wavelab::gmra::{check_gen_filter_eqs_exact, check_journe_wavelet_set, journe_bank, journe_wavelet_set, rational_midpoints};
use wavelab::support::{q, q_str};

fn main() {
    let bank = journe_bank();
    let xs = rational_midpoints(&q(-1, 1), &q(1, 1), 10_000);
    for r in check_gen_filter_eqs_exact(&bank, &xs).expect("piecewise constant") {
        println!("{}", r.summary_line());
    }
    let ws = rational_midpoints(&q(-3, 1), &q(3, 1), 10_000);
    println!("{}", check_journe_wavelet_set(&bank, &ws).expect("piecewise constant").summary_line());
    for iv in journe_wavelet_set().intervals() {
        println!("  [{}, {})", q_str(&iv.lo), q_str(&iv.hi));
    }
    for x in [q(1, 100), q(3, 10), q(-1, 2), q(5, 7)] {
        println!("m({}) = {}", q_str(&x), bank.m.eval_q(&x));
    }
}
