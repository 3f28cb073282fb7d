//! Samples the smooth wavelet in time and compares energies.

use std::sync::Arc;
use wavelab::analysis::{psi_spectrum, required_cutoff, time_domain_samples, time_energy};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::gmra::example_bank;
use wavelab::util::linspace;

fn main() -> wavelab::Result<()> {
    let bank = Arc::new(example_bank(Arc::new(build_p(1, make_smooth_step(Grade::Infinite)?)?))?);
    let psi = psi_spectrum(&bank);
    let (cut, tail) = required_cutoff(&psi.model, 1e-8)?;
    let ts = linspace(-64.0, 64.0, 2049);
    let td = time_domain_samples(&psi, &ts, cut, 1e-8, 1.0 / 28.0)?;
    println!("cutoff {cut}, energy tail {tail:.1e}, panels {}", td.panels);
    println!("max |Im psi(t)| {:.1e}", td.im_residual);
    println!("energy: time {:.8}, frequency {:.8}", time_energy(&td.samples), td.frequency_energy);
    for (t, v) in ts.iter().zip(&td.samples.re).skip(1024).step_by(8).take(8) {
        println!("  psi({t:.3}) = {v:+.6e}");
    }
    Ok(())
}
