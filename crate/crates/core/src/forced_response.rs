//! Synchronized response of the self-oscillating mode to single-port forcing.
//!
//! With `s_in = s·|j⟩·e^{iωt}` and the ansatz `a = ρ·e^{i(ωt + φ)}`, the modal
//! equation reduces to the complex balance
//!
//! ```text
//! iΔ·ρe^{iφ} = (ν − κρ²)·ρe^{iφ} + D_j·s,          Δ = ω − ω₀
//! ```
//!
//! whose modulus gives a cubic in `X = ρ²`,
//! `κ²X³ − 2νκX² + (ν² + Δ²)X − D_j²s² = 0`, and whose argument fixes `φ`.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::model::{Coupling, ModelParams};

/// Polynomial residual bound, relative to the largest coefficient.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;
/// Slack allowed on `|Δρ/(|D_j|s)| ≤ 1` before a root is deemed inconsistent.
pub const ARCSIN_TOL: f64 = 1e-9;
/// Band around zero, relative to the slow-flow rate scale, treated as marginal.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Forcing port, numbered 1 and 2 as in the scattering matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Port {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Port {
    pub const BOTH: [Port; 2] = [Port::One, Port::Two];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Port::One => 0,
            Port::Two => 1,
        }
    }

    /// One-based port number.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Port::One),
            2 => Ok(Port::Two),
            _ => Err(Error::InvalidParams(format!("port must be 1 or 2, got {n}"))),
        }
    }
}

/// Harmonic forcing `s·|port⟩·e^{iωt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingPoint {
    pub omega: f64,
    pub s: f64,
    pub port: Port,
}

impl ForcingPoint {
    pub fn new(omega: f64, s: f64, port: Port) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega must be > 0, got {omega}")));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParams(format!(
                "forcing amplitude must be > 0, got {s}"
            )));
        }
        Ok(Self { omega, s, port })
    }
}

/// How to pick a solution when the amplitude cubic has several positive roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    /// Follow the stable root nearest the previous point of a sweep; falls
    /// back to [`BranchPolicy::LargestStable`] without a previous point.
    #[default]
    Continuation,
    /// Always take the largest stable root.
    LargestStable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcedResponse {
    pub rho: f64,
    /// Phase in `[0, 2π)`.
    pub phi: f64,
    pub detuning: f64,
    pub n_real_roots: usize,
    pub stable: bool,
    /// All positive amplitude roots, ascending.
    pub roots: Vec<f64>,
}

/// Coefficients `[κ², −2νκ, ν² + Δ², −D_j²s²]` of the cubic in `ρ²`.
pub fn amplitude_cubic(p: &ModelParams, d_j: f64, s: f64, detuning: f64) -> [f64; 4] {
    let k = p.kappa;
    [
        k * k,
        -2.0 * p.nu * k,
        p.nu * p.nu + detuning * detuning,
        -(d_j * s) * (d_j * s),
    ]
}

/// `|cubic(ρ²)| / max|coefficient|`
pub fn amplitude_residual(coeffs: &[f64; 4], rho: f64) -> f64 {
    let x = rho * rho;
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    (((coeffs[0] * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3]).abs() / max
}

/// All positive amplitude roots `ρ`, ascending.
pub fn solve_amplitude(p: &ModelParams, c: &Coupling, f: &ForcingPoint) -> Result<Vec<f64>> {
    let d_j = c.d_port(f.port.number());
    let coeffs = amplitude_cubic(p, d_j, f.s, p.detuning(f.omega));
    let rhos: Vec<f64> = cubic::real_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(f64::sqrt)
        .collect();
    if rhos.is_empty() {
        // the constant term is strictly negative, so p(0) < 0 < p(∞)
        return Err(Error::NoPositiveRoot);
    }
    debug_assert!(rhos
        .iter()
        .all(|&r| amplitude_residual(&coeffs, r) < ROOT_RESIDUAL_TOL));
    Ok(rhos)
}

/// Phase of the forced response for amplitude `rho`.
///
/// On the principal `arcsin` branch `φ = −arg D_j − arcsin(Δρ/(|D_j|s))` when
/// `κρ² ≥ ν`; for `κρ² < ν` the supplementary angle is taken so that the
/// complex balance, not just its imaginary part, holds.
pub fn solve_phase(p: &ModelParams, c: &Coupling, f: &ForcingPoint, rho: f64) -> Result<f64> {
    let d_j = c.d_port(f.port.number());
    let detuning = p.detuning(f.omega);
    let arg = detuning * rho / (d_j.abs() * f.s);
    if !arg.is_finite() || arg.abs() > 1.0 + ARCSIN_TOL {
        return Err(Error::ArcsinDomain(arg));
    }
    let arg_d = if d_j < 0.0 { PI } else { 0.0 };
    // atan2 agrees with arcsin(arg) when κρ² − ν ≥ 0 and with π − arcsin(arg) otherwise
    let theta = detuning.atan2(p.kappa * rho * rho - p.nu);
    Ok(wrap_phase(-arg_d - theta))
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        // `+ 0.0` turns a negative zero into a positive one
        w + 0.0
    }
}

/// Jacobian of the rotating-frame slow flow
/// `b' = (ν − iΔ − κ|b|²)·b + D_j·s` in `(Re b, Im b)` at `b = ρe^{iφ}`.
pub fn slow_flow_jacobian(p: &ModelParams, detuning: f64, rho: f64, phi: f64) -> Matrix2<f64> {
    let (x, y) = (rho * phi.cos(), rho * phi.sin());
    let u = p.nu - p.kappa * rho * rho;
    let k2 = 2.0 * p.kappa;
    Matrix2::new(
        u - k2 * x * x,
        detuning - k2 * x * y,
        -detuning - k2 * x * y,
        u - k2 * y * y,
    )
}

/// Eigenvalues of a real 2×2 matrix from its trace and determinant.
pub fn eigenvalues_2x2(m: &Matrix2<f64>) -> [Complex64; 2] {
    let half_trace = 0.5 * m.trace();
    let det = m.determinant();
    let disc = half_trace * half_trace - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [
            Complex64::new(half_trace + r, 0.0),
            Complex64::new(half_trace - r, 0.0),
        ]
    } else {
        let r = (-disc).sqrt();
        [Complex64::new(half_trace, r), Complex64::new(half_trace, -r)]
    }
}

/// Linear stability of the fixed point `(ρ, φ)` of the slow flow.
pub fn classify_stability(p: &ModelParams, f: &ForcingPoint, rho: f64, phi: f64) -> Result<bool> {
    let jac = slow_flow_jacobian(p, p.detuning(f.omega), rho, phi);
    let max_re = eigenvalues_2x2(&jac)
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = p.nu.abs().max(p.kappa * rho * rho);
    if max_re.abs() <= MARGINAL_TOL * scale {
        return Err(Error::MarginalStability(max_re));
    }
    Ok(max_re < 0.0)
}

/// `|iΔρe^{iφ} − (ν − κρ²)ρe^{iφ} − D_j·s| / (|D_j|·s)`
pub fn steady_state_residual(
    p: &ModelParams,
    c: &Coupling,
    f: &ForcingPoint,
    rho: f64,
    phi: f64,
) -> f64 {
    let d_j = c.d_port(f.port.number());
    let b = Complex64::from_polar(rho, phi);
    let lhs = Complex64::new(0.0, p.detuning(f.omega)) * b;
    let rhs = (p.nu - p.kappa * rho * rho) * b + d_j * f.s;
    (lhs - rhs).norm() / (d_j.abs() * f.s)
}

/// Forced response under the default branch policy with no sweep history.
pub fn forced_response(p: &ModelParams, c: &Coupling, f: &ForcingPoint) -> Result<ForcedResponse> {
    forced_response_with(p, c, f, BranchPolicy::default(), None)
}

struct Candidate {
    rho: f64,
    phi: f64,
    stability: Result<bool>,
}

impl Candidate {
    fn is_stable(&self) -> bool {
        matches!(self.stability, Ok(true))
    }
}

/// Forced response, selecting among multiple roots with `policy`.
/// `previous` is the amplitude selected at the preceding sweep point.
pub fn forced_response_with(
    p: &ModelParams,
    c: &Coupling,
    f: &ForcingPoint,
    policy: BranchPolicy,
    previous: Option<f64>,
) -> Result<ForcedResponse> {
    let roots = solve_amplitude(p, c, f)?;
    let mut candidates = Vec::with_capacity(roots.len());
    for &rho in &roots {
        let phi = solve_phase(p, c, f, rho)?;
        let stability = classify_stability(p, f, rho, phi);
        candidates.push(Candidate {
            rho,
            phi,
            stability,
        });
    }

    let chosen = if candidates.len() == 1 {
        0
    } else {
        select_branch(&candidates, policy, previous)
    };
    let pick = candidates.swap_remove(chosen);
    let stable = pick.stability?;
    Ok(ForcedResponse {
        rho: pick.rho,
        phi: pick.phi,
        detuning: p.detuning(f.omega),
        n_real_roots: roots.len(),
        stable,
        roots,
    })
}

fn select_branch(candidates: &[Candidate], policy: BranchPolicy, previous: Option<f64>) -> usize {
    let stable: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].is_stable())
        .collect();
    let pool: Vec<usize> = if stable.is_empty() {
        (0..candidates.len()).collect()
    } else {
        stable
    };
    match (policy, previous) {
        (BranchPolicy::Continuation, Some(prev)) => *pool
            .iter()
            .min_by(|&&a, &&b| {
                let da = (candidates[a].rho - prev).abs();
                let db = (candidates[b].rho - prev).abs();
                da.total_cmp(&db)
            })
            .expect("non-empty pool"),
        // candidates are sorted ascending, so the last pool entry is the largest
        _ => *pool.last().expect("non-empty pool"),
    }
}
