//! Calderón and odd-shift sums for the four Parseval frame wavelets.

use std::sync::Arc;
use wavelab::analysis::{check_calderon, check_shift, classical_psi_spectrum, jittered_points, psi_spectrum};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::classical::{reference_filters, Reference};
use wavelab::gmra::{example_bank, journe_bank};

fn main() -> wavelab::Result<()> {
    let smooth = Arc::new(example_bank(Arc::new(build_p(1, make_smooth_step(Grade::Infinite)?)?))?);
    let spectra = [
        classical_psi_spectrum(&reference_filters(Reference::Haar), Reference::Haar),
        classical_psi_spectrum(&reference_filters(Reference::Shannon), Reference::Shannon),
        psi_spectrum(&Arc::new(journe_bank())),
        psi_spectrum(&smooth),
    ];
    let xs = jittered_points(-4.0, 4.0, 256, 7, 448.0, 1e-3);
    for psi in &spectra {
        println!("{}", check_calderon(psi, &xs, 1e-6, 1e-9).summary_line());
        println!("{}", check_shift(psi, &xs[..128], &[-5, -3, -1, 1, 3, 5], 1e-6, 1e-9).summary_line());
    }
    Ok(())
}
