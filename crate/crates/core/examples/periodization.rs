//! Periodizations and the dimension function of the smooth bank.

use std::sync::Arc;
use wavelab::analysis::{dimension_function_auto, periodization_auto, phi_spectrum, psi_spectrum};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;
use wavelab::support::Which;

fn main() -> wavelab::Result<()> {
    let bank = Arc::new(example_bank(Arc::new(build_p(1, make_smooth_step(Grade::Infinite)?)?))?);
    let psi = psi_spectrum(&bank);
    let phi = [phi_spectrum(&bank, Which::Phi1), phi_spectrum(&bank, Which::Phi2)];
    println!("{:>7} {:>3} {:>10} {:>10} {:>10} {:>10}", "x", "m", "D", "Per phi1", "Per phi2", "Per psi");
    for x in [0.01, 0.05, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.49] {
        let d = dimension_function_auto(&psi, x, 1e-6)?.value;
        let p1 = periodization_auto(&phi[0], x, 1e-9)?.value;
        let p2 = periodization_auto(&phi[1], x, 1e-9)?.value;
        let pp = periodization_auto(&psi, x, 1e-9)?.value;
        println!("{x:>7} {:>3} {d:>10.4} {p1:>10.4} {p2:>10.4} {pp:>10.4}", bank.m.eval(x));
    }
    Ok(())
}
