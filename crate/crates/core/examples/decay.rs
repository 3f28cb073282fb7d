//! Weighted decay of the scaling vector across generations.

use std::sync::Arc;
use wavelab::analysis::decay_profile;
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;
use wavelab::support::Which;

fn main() -> wavelab::Result<()> {
    for r in 0..=2 {
        let bank = example_bank(Arc::new(build_p(r, make_smooth_step(Grade::Infinite)?)?))?;
        println!("r = {r}");
        for n in 1..=6 {
            let a = decay_profile(&bank, Which::Phi1, r, n, 64, 7)?;
            let b = decay_profile(&bank, Which::Phi2, r, n, 64, 7)?;
            println!("  n = {n}: phi1 {:.3e}  phi2 {:.3e}  bound {:.3e}", a.measured, b.measured, a.bound);
        }
    }
    Ok(())
}
