//! Unforced self-oscillation: growth from a small seed onto `|a0| = √(ν/κ)`
//! with the spectral peak at `ω0`.
//!
//! cargo run --release --example free_run

use std::f64::consts::TAU;

use num_complex::Complex64;
use nlcscatter::timedomain::{simulate_free, SimConfig};
use nlcscatter::ModelParams;

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams::biased_cavity();
    let a0 = (p.nu / p.kappa).sqrt();
    let cfg = SimConfig::free_run(&p).with_init(Complex64::new(1e-3 * a0, 0.0));
    let run = simulate_free(&p, &cfg)?;
    let stride = run.amplitude.len() / 10;
    for k in (0..run.amplitude.len()).step_by(stride) {
        println!("t = {:8.4} s   |a|/|a0| = {:.9}", run.times[k], run.amplitude[k].norm() / a0);
    }
    let (peak, bin) = run.spectral_peak();
    println!(
        "final |a|/|a0| = {:.12}, peak {:.3} Hz (bin {:.3} Hz, f0 = {} Hz)",
        run.final_amplitude() / a0,
        peak / TAU,
        bin / TAU,
        p.omega0 / TAU
    );
    Ok(())
}
