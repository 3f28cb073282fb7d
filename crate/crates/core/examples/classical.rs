//! Haar, Shannon and Cohen cascades against their closed forms.

use wavelab::classical::{cascade_scaling, cohen_phi_closed, haar_psi_closed, reference_filters, wavelet_hat_classical, Reference};
use wavelab::util::linspace;

fn main() -> wavelab::Result<()> {
    let haar = reference_filters(Reference::Haar);
    let cohen = reference_filters(Reference::Cohen);
    let shannon = reference_filters(Reference::Shannon);
    let mut worst = [0.0f64; 2];
    for x in linspace(-8.0, 8.0, 1024) {
        worst[0] = worst[0].max((wavelet_hat_classical(&haar, x)? - haar_psi_closed(x)).norm());
        worst[1] = worst[1].max((cascade_scaling(&cohen, x)? - cohen_phi_closed(x)).norm());
    }
    println!("haar psi_hat vs closed form: {:.2e}", worst[0]);
    println!("cohen phi_hat vs closed form: {:.2e}", worst[1]);
    for x in [0.1, 0.49, 0.51, 0.9] {
        println!("shannon |phi_hat({x})| = {}", cascade_scaling(&shannon, x)?.norm());
    }
    Ok(())
}
