//! Builds the QMF bump for r = 0, 1, 2 and prints its validation.

use wavelab::bump::{build_p, make_smooth_step, Grade};

fn main() -> wavelab::Result<()> {
    for r in 0..=2 {
        let p = build_p(r, make_smooth_step(Grade::Infinite)?)?;
        let v = p.validation.as_ref().expect("build_p validates");
        println!("r = {r}: flattening {}, qmf {:.1e}, flat zones {}, |p^({})| {:.3e}", v.flattening, v.qmf_residual, v.flat_zone_max, r + 2, v.derivative_max);
        for x in [0.0, 0.1, 0.2, 0.3, 0.45] {
            println!("  p({x}) = {:.12}", p.eval(x));
        }
    }
    Ok(())
}
