//! Partial matrix products against their predicted lattice supports.

use std::sync::Arc;
use wavelab::analysis::{check_partial_supports, jittered_points};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;

fn main() -> wavelab::Result<()> {
    let bank = example_bank(Arc::new(build_p(1, make_smooth_step(Grade::Infinite)?)?))?;
    for n in 1..=3u32 {
        let r = 8f64.powi(n as i32);
        let xs = jittered_points(-r, r, 20_000, n as u64, 28.0, 1e-9);
        for rep in check_partial_supports(&bank, n, &xs, 1e-12, 1e-15)? {
            println!("{}", rep.summary_line());
        }
    }
    Ok(())
}
