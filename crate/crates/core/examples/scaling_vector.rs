//! Evaluates the scaling vector and wavelet of the smooth bank.

use std::sync::Arc;
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;

fn main() -> wavelab::Result<()> {
    let p = build_p(1, make_smooth_step(Grade::Infinite)?)?;
    let bank = example_bank(Arc::new(p))?;
    println!("{:>8} {:>14} {:>14} {:>14}", "x", "|phi1_hat|", "|phi2_hat|", "|psi_hat|");
    for x in [0.0, 0.05, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0] {
        let [a, b] = bank.phi_hat(x);
        println!("{x:>8} {:>14.6e} {:>14.6e} {:>14.6e}", a.norm(), b.norm(), bank.psi_hat(x).norm());
    }
    Ok(())
}
