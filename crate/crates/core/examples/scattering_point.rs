//! Scattering matrix and absorption at resonance for the three amplitude cuts.
//!
//! cargo run --example scattering_point

use nlcscatter::scattering::absolute_amplitude;
use nlcscatter::{build_coupling, scattering_matrix, ModelParams};

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams::biased_cavity();
    let c = build_coupling(&p)?;
    for s_tilde in [0.6, 1.5, 9.0] {
        let r = scattering_matrix(&p, &c, p.omega0, absolute_amplitude(&p, s_tilde)?)?;
        println!("s~ = {s_tilde}");
        for i in 1..=2 {
            println!(
                "  |S{i}1| = {:7.3} dB   |S{i}2| = {:7.3} dB",
                r.entry_db(i, 1),
                r.entry_db(i, 2)
            );
        }
        println!(
            "  alpha = ({:+.3}, {:+.3}), superradiant = {:?}, stable = ({}, {})",
            r.alpha[0], r.alpha[1], r.superradiant, r.responses[0].stable, r.responses[1].stable
        );
        let lin = r.s_linear;
        println!("  background |S12| = {:.3}, |S21| = {:.3}", lin[(0, 1)].norm(), lin[(1, 0)].norm());
    }
    Ok(())
}
