//! Amplitude and phase of the synchronized mode across the band, forced
//! through port 2 at `s~ = 1.5`.
//!
//! cargo run --example forced_response

use std::f64::consts::TAU;

use nlcscatter::forced_response::forced_response;
use nlcscatter::scattering::absolute_amplitude;
use nlcscatter::{build_coupling, ForcingPoint, ModelParams, Port};

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams::biased_cavity();
    let c = build_coupling(&p)?;
    let s = absolute_amplitude(&p, 1.5)?;
    let a0 = (p.nu / p.kappa).sqrt();
    println!("{:>8} {:>10} {:>10} {:>6} {:>7}", "f [Hz]", "rho/|a0|", "phi", "roots", "stable");
    for k in 0..=16 {
        let f_hz = 1780.0 + 5.0 * k as f64;
        let r = forced_response(&p, &c, &ForcingPoint::new(TAU * f_hz, s, Port::Two)?)?;
        println!(
            "{:>8.1} {:>10.5} {:>10.5} {:>6} {:>7}",
            f_hz,
            r.rho / a0,
            r.phi,
            r.n_real_roots,
            r.stable
        );
    }
    Ok(())
}
