//! Intertwining and base-case identities behind the frame property.

use std::sync::Arc;
use wavelab::analysis::{check_intertwining, check_sg_base, jittered_points, TrigPoly};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;
use wavelab::util::rng;

fn main() -> wavelab::Result<()> {
    let bank = Arc::new(example_bank(Arc::new(build_p(1, make_smooth_step(Grade::Infinite)?)?))?);
    let xs = jittered_points(-4.0, 4.0, 1000, 11, 56.0, 1e-9);
    let mut g = rng(12);
    for _ in 0..3 {
        let (f1, f2) = (TrigPoly::random(8, &mut g), TrigPoly::random(8, &mut g));
        println!("{}", check_intertwining(&bank, &f1, &f2, &xs, 1e-10).summary_line());
    }
    for k in [-3, 0, 1] {
        println!("{}", check_sg_base(&bank, k, &xs, 1e-12, false).summary_line());
        println!("{} (unnormalized)", check_sg_base(&bank, k, &xs, 1e-12, true).summary_line());
    }
    Ok(())
}
