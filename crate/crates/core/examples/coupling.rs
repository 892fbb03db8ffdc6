//! Coupling construction for the biased side cavity, plus the identity residuals.
//!
//! cargo run --example coupling

use nalgebra::Matrix2;
use nlcscatter::model::{coupling_from_matrices, validate_conditions};
use nlcscatter::{build_coupling, ModelParams};

fn main() -> nlcscatter::Result<()> {
    let p = ModelParams::biased_cavity();
    let c = build_coupling(&p)?;
    println!("sigma = {}, epsilon = {}, gamma = {:.4} rad/s", p.sigma, p.epsilon, p.gamma);
    println!("g = {:.12}", c.g);
    println!("h = {:.12}", c.h);
    println!("D = ({:+.6}, {:+.6})", c.d[0], c.d[1]);
    println!("gamma_i / gamma = {:.12}", c.gamma_i / p.gamma);
    println!("mu = ({:.6}, {:.6}), |mu2|/|mu1| = {:.4}", c.mu[0], c.mu[1], c.quality_ratio());

    let report = validate_conditions(&c, &p)?;
    println!("largest identity residual = {:.2e}", report.max_residual());

    // the same vector from an explicit target and background
    let target = p.target();
    let background = Matrix2::new(0.0, 1.0, 1.0, 0.0);
    let general = coupling_from_matrices(&target, &background, p.sigma, p.gamma)?;
    println!("general construction D = ({:+.6}, {:+.6})", general.d[0], general.d[1]);
    Ok(())
}
