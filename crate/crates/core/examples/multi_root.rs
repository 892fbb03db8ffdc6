//! Weak forcing near resonance: the amplitude cubic has three positive roots.
//! Prints every root with its slow-flow stability and the root each branch
//! policy selects.
//!
//! cargo run --example multi_root

use nlcscatter::forced_response::{classify_stability, forced_response_with, solve_amplitude, solve_phase};
use nlcscatter::{build_coupling, BranchPolicy, ForcingPoint, ModelParams, Port};

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams {
        omega0: 100.0,
        nu: 1.0,
        kappa: 1.0,
        gamma: 2.0,
        sigma: 0.6,
        epsilon: 0.3,
    };
    let c = build_coupling(&p)?;
    // |D_2| s = 0.3 puts the three-root window at |detuning| below about 0.33
    let s = 0.3 / c.d_port(2).abs();

    println!("{:>8}  {:<40} {:>12} {:>12}", "detuning", "roots (s = stable, u = unstable)", "continuation", "largest");
    let mut previous = None;
    for k in 0..=12 {
        let detuning = 0.05 * k as f64;
        let f = ForcingPoint::new(p.omega0 + detuning, s, Port::Two)?;
        let roots = solve_amplitude(&p, &c, &f)?;
        let labelled: Vec<String> = roots
            .iter()
            .map(|&rho| {
                let phi = solve_phase(&p, &c, &f, rho)?;
                let tag = match classify_stability(&p, &f, rho, phi) {
                    Ok(true) => "s",
                    Ok(false) => "u",
                    Err(_) => "marginal",
                };
                Ok(format!("{rho:.4}{tag}"))
            })
            .collect::<nlcscatter::Result<_>>()?;
        let followed = forced_response_with(&p, &c, &f, BranchPolicy::Continuation, previous)?;
        let largest = forced_response_with(&p, &c, &f, BranchPolicy::LargestStable, None)?;
        previous = Some(followed.rho);
        println!(
            "{:>8.2}  {:<40} {:>12.5} {:>12.5}",
            detuning,
            labelled.join(" "),
            followed.rho,
            largest.rho
        );
    }
    Ok(())
}
