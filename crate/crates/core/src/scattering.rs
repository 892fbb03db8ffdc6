//! Amplitude-dependent 2×2 scattering matrix and absorption coefficients.
//!
//! Columns are built from separate single-port forcing runs. The nonlinear
//! part does not superpose, so the matrix must not be applied to a
//! simultaneous two-port input and read as the true response.

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forced_response::{forced_response_with, BranchPolicy, ForcedResponse, ForcingPoint, Port};
use crate::model::{background_matrix, Coupling, ModelParams};
use crate::{CMat2, CVec2};

/// Steady amplitude `|a₀| = √(ν/κ)` of the unforced limit cycle.
pub fn limit_cycle_amplitude(p: &ModelParams) -> Result<f64> {
    p.require_self_oscillation()?;
    Ok((p.nu / p.kappa).sqrt())
}

/// `s = s̃·√γ·|a₀|`
pub fn absolute_amplitude(p: &ModelParams, s_tilde: f64) -> Result<f64> {
    Ok(s_tilde * p.gamma.sqrt() * limit_cycle_amplitude(p)?)
}

/// `s̃ = s / (√γ·|a₀|)`
pub fn normalized_amplitude(p: &ModelParams, s: f64) -> Result<f64> {
    Ok(s / (p.gamma.sqrt() * limit_cycle_amplitude(p)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// Several positive amplitude roots for forcing from `port`; the column
    /// depends on which branch was selected.
    MultipleRoots { port: usize, n_roots: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringResult {
    pub omega: f64,
    pub s: f64,
    /// Normalized forcing amplitude; `None` without a limit cycle (ν ≤ 0).
    pub s_tilde: Option<f64>,
    pub s_linear: CMat2,
    pub s_nonlinear: CMat2,
    pub s_total: CMat2,
    pub alpha: [f64; 2],
    pub superradiant: [bool; 2],
    pub responses: [ForcedResponse; 2],
    pub warnings: Vec<Warning>,
}

impl ScatteringResult {
    /// Entry `S_ij` with one-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.s_total[(i - 1, j - 1)]
    }

    pub fn entry_db(&self, i: usize, j: usize) -> f64 {
        to_db(self.entry(i, j).norm())
    }

    /// Both forced responses sit on linearly stable fixed points.
    pub fn sync_capable(&self) -> bool {
        self.responses.iter().all(|r| r.stable)
    }
}

/// `20·log₁₀|x|`
pub fn to_db(magnitude: f64) -> f64 {
    20.0 * magnitude.log10()
}

/// `α_j = 1 − |S_1j|² − |S_2j|²`
pub fn absorption(s: &CMat2, port: Port) -> f64 {
    let j = port.index();
    1.0 - s[(0, j)].norm_sqr() - s[(1, j)].norm_sqr()
}

/// Scattering matrix under the default branch policy.
pub fn scattering_matrix(
    p: &ModelParams,
    c: &Coupling,
    omega: f64,
    s: f64,
) -> Result<ScatteringResult> {
    scattering_matrix_with(p, c, omega, s, BranchPolicy::default(), [None, None])
}

/// Scattering matrix with an explicit branch policy; `previous` holds the
/// amplitudes selected for each port at the preceding sweep point.
pub fn scattering_matrix_with(
    p: &ModelParams,
    c: &Coupling,
    omega: f64,
    s: f64,
    policy: BranchPolicy,
    previous: [Option<f64>; 2],
) -> Result<ScatteringResult> {
    let s_linear = background_matrix(c, p, omega);
    let one = ForcingPoint::new(omega, s, Port::One)?;
    let two = ForcingPoint::new(omega, s, Port::Two)?;
    let responses = [
        forced_response_with(p, c, &one, policy, previous[0])?,
        forced_response_with(p, c, &two, policy, previous[1])?,
    ];

    let mut s_nonlinear = CMat2::zeros();
    for (j, r) in responses.iter().enumerate() {
        let mode = Complex64::from_polar(r.rho, r.phi) / s;
        for i in 0..2 {
            s_nonlinear[(i, j)] = mode * c.d[i];
        }
    }
    let s_total = s_linear + s_nonlinear;
    let alpha = [
        absorption(&s_total, Port::One),
        absorption(&s_total, Port::Two),
    ];
    let warnings = responses
        .iter()
        .enumerate()
        .filter(|(_, r)| r.n_real_roots > 1)
        .map(|(j, r)| Warning::MultipleRoots {
            port: j + 1,
            n_roots: r.n_real_roots,
        })
        .collect();

    Ok(ScatteringResult {
        omega,
        s,
        s_tilde: normalized_amplitude(p, s).ok(),
        s_linear,
        s_nonlinear,
        s_total,
        alpha,
        superradiant: [alpha[0] < 0.0, alpha[1] < 0.0],
        responses,
        warnings,
    })
}

/// Rank-one estimate `|s_out⟩⟨s_in| / ⟨s_in|s_in⟩` from one input/output pair.
pub fn scattering_from_signals(s_in: &CVec2, s_out: &CVec2) -> Result<CMat2> {
    let norm = s_in.norm_squared();
    if norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    Ok(s_out * s_in.adjoint() / Complex64::from(norm))
}

/// Steady outgoing wave of the linear resonator `da/dt = (iω₀ − γ)a + Dᵀs_in`,
/// `s_out = C·s_in + D·a`, driven at `omega`.
pub fn linear_tcmt_response(c: &Coupling, p: &ModelParams, omega: f64, s_in: &CVec2) -> CVec2 {
    let d = Vector2::new(c.d[0], c.d[1]).map(Complex64::from);
    let drive = d.dot(s_in);
    let a = drive / Complex64::new(p.gamma, p.detuning(omega));
    let swapped = CVec2::new(s_in[1], s_in[0]);
    swapped + d * a
}

/// Energy reflection `γ² / (γ² + Δ²)` of a lossless symmetric single-mode
/// resonator side-coupled to a waveguide.
pub fn lossless_reflection_power(gamma: f64, detuning: f64) -> f64 {
    gamma * gamma / (gamma * gamma + detuning * detuning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_coupling;

    #[test]
    fn limit_cycle_values() {
        let p = ModelParams {
            omega0: 1.0,
            nu: 1.0,
            kappa: 1.0,
            gamma: 1.0,
            sigma: 1.0,
            epsilon: 0.0,
        };
        assert_eq!(limit_cycle_amplitude(&p).unwrap(), 1.0);
        let a0 = limit_cycle_amplitude(&ModelParams::biased_cavity()).unwrap();
        assert!((a0 - (0.004f64 * 2.0 * std::f64::consts::PI * 1820.0).sqrt()).abs() < 1e-12);
        assert!((a0 - 6.763).abs() < 1e-3);
        let dead = ModelParams { nu: -1.0, ..p };
        assert!(matches!(limit_cycle_amplitude(&dead), Err(Error::NoLimitCycle(_))));
    }

    #[test]
    fn rank_one_from_unit_inputs() {
        let (r, t) = (Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.9));
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = scattering_from_signals(&CVec2::new(one, zero), &CVec2::new(r, t)).unwrap();
        assert_eq!(m, CMat2::new(r, zero, t, zero));
        let m = scattering_from_signals(&CVec2::new(zero, one), &CVec2::new(t, r)).unwrap();
        assert_eq!(m, CMat2::new(zero, t, zero, r));
        assert!(matches!(
            scattering_from_signals(&CVec2::zeros(), &CVec2::new(r, t)),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn absorption_values() {
        let mut s = CMat2::zeros();
        s[(0, 0)] = Complex64::new(2.0, 0.0);
        assert_eq!(absorption(&s, Port::One), -3.0);
        assert_eq!(absorption(&s, Port::Two), 1.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMat2::new(
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, h),
            Complex64::new(h, 0.0),
        );
        assert!(absorption(&u, Port::One).abs() < 1e-15);
        assert!(absorption(&u, Port::Two).abs() < 1e-15);
    }

    #[test]
    fn tcmt_response_matches_background_columns() {
        let p = ModelParams::biased_cavity();
        let c = build_coupling(&p).unwrap();
        let omega = p.omega0 + 37.0;
        let b = background_matrix(&c, &p, omega);
        for j in 0..2 {
            let mut e = CVec2::zeros();
            e[j] = Complex64::new(1.0, 0.0);
            let out = linear_tcmt_response(&c, &p, omega, &e);
            assert!((out - b.column(j)).norm() < 1e-14);
        }
    }

    #[test]
    fn resonant_low_amplitude_is_superradiant() {
        let p = ModelParams::biased_cavity();
        let c = build_coupling(&p).unwrap();
        let s = absolute_amplitude(&p, 0.6).unwrap();
        let r = scattering_matrix(&p, &c, p.omega0, s).unwrap();
        assert!(r.superradiant[0] && r.superradiant[1], "{:?}", r.alpha);
        assert!((r.s_tilde.unwrap() - 0.6).abs() < 1e-12);
        assert!(r.warnings.is_empty());
        assert_eq!(r.s_total, r.s_linear + r.s_nonlinear);
    }

    #[test]
    fn linear_part_reflection_ratio() {
        let p = ModelParams::biased_cavity();
        let c = build_coupling(&p).unwrap();
        for k in -20..=20 {
            let b = background_matrix(&c, &p, p.omega0 + 25.0 * k as f64);
            let ratio = b[(0, 0)].norm() / b[(1, 1)].norm();
            assert!((ratio - c.g * c.g).abs() < 1e-12);
        }
    }
}
