//! Lossless symmetric limit: with the mode switched off, the background
//! reflection is the Lorentzian `γ²/(Δ² + γ²)` of a side-coupled resonator.
//!
//! cargo run --example linear_limit

use nlcscatter::model::background_matrix;
use nlcscatter::scattering::lossless_reflection_power;
use nlcscatter::{build_coupling, ModelParams};

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams {
        sigma: 1.0,
        epsilon: 0.0,
        ..ModelParams::biased_cavity()
    };
    let c = build_coupling(&p)?;
    println!("{:>12} {:>14} {:>14} {:>10}", "detuning/g", "|S11|^2", "Lorentzian", "|S'S - I|");
    for k in -5..=5 {
        let detuning = k as f64 * p.gamma;
        let b = background_matrix(&c, &p, p.omega0 + detuning);
        let unitarity = (b.adjoint() * b - nalgebra::Matrix2::identity()).norm();
        println!(
            "{:>12} {:>14.10} {:>14.10} {:>10.1e}",
            k,
            b[(0, 0)].norm_sqr(),
            lossless_reflection_power(p.gamma, detuning),
            unitarity
        );
    }
    Ok(())
}
