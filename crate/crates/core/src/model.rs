//! Model parameters and the port-coupling construction.
//!
//! The cavity is described by the modal equation
//!
//! ```text
//! da/dt = (i·ω₀ + ν − κ|a|²)·a + Dᵀ·s_in
//! s_out = (C + D·F⁻¹·Dᵀ)·s_in + D·a,        F = i(ω − ω₀) + γ
//! ```
//!
//! with a reflective target matrix `S* = diag(1 + ε/σ, 1 − ε/σ)` and a purely
//! transmissive constant background `C = [[0, 1], [1, 0]]`. The coupling
//! vector `D` is chosen so that `D·γ⁻¹·Dᵀ` carries the dominant eigenpair of
//! `σS* − C`, which in closed form gives
//!
//! ```text
//! D = √(γ·h)·(−g, 1)ᵀ,   g = ε + √(ε² + 1),   h = (σ + √(ε² + 1)) / (g² + 1)
//! ```
//!
//! and an internal decay rate fixed by `DᵀD = 2(γ − γᵢ)`.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::CMat2;

/// Relative gap `(|μ₁| − |μ₂|)/|μ₁|` below which the spectrum has no dominant eigenpair.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `|μ₂|/|μ₁|` above which the rank-one approximation is reported as degraded.
pub const QUALITY_WARN_RATIO: f64 = 0.5;

/// Physical constants of the self-oscillating cavity. All rates are in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Angular eigenfrequency ω₀.
    pub omega0: f64,
    /// Linear growth rate ν; self-oscillation requires ν > 0.
    pub nu: f64,
    /// Cubic saturation constant κ.
    pub kappa: f64,
    /// Background decay rate γ.
    pub gamma: f64,
    /// Unitarity factor σ.
    pub sigma: f64,
    /// Asymmetry (bias) ε.
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(
        omega0: f64,
        nu: f64,
        kappa: f64,
        gamma: f64,
        sigma: f64,
        epsilon: f64,
    ) -> Result<Self> {
        let p = Self {
            omega0,
            nu,
            kappa,
            gamma,
            sigma,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// The biased side-cavity example: ω₀/2π = 1820, ν = 0.4 % of ω₀,
    /// γ = 2ν, σ = 0.6, ε = 0.3, κ = 1.
    pub fn biased_cavity() -> Self {
        let omega0 = 2.0 * std::f64::consts::PI * 1820.0;
        let nu = 0.004 * omega0;
        Self {
            omega0,
            nu,
            kappa: 1.0,
            gamma: 2.0 * nu,
            sigma: 0.6,
            epsilon: 0.3,
        }
    }

    /// Checks the parameter invariants.
    ///
    /// `σ = 0` is accepted here so that [`build_coupling`] can report it as a
    /// degenerate spectrum; negative `σ` is rejected outright.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega0", self.omega0),
            ("nu", self.nu),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("sigma", self.sigma),
            ("epsilon", self.epsilon),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {value}")));
            }
        }
        for (name, value) in [
            ("omega0", self.omega0),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
        ] {
            if value <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {value}")));
            }
        }
        if self.sigma < 0.0 {
            return Err(Error::InvalidParams(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// Fails with [`Error::NoLimitCycle`] unless ν > 0.
    pub fn require_self_oscillation(&self) -> Result<()> {
        if self.nu > 0.0 {
            Ok(())
        } else {
            Err(Error::NoLimitCycle(self.nu))
        }
    }

    pub fn detuning(&self, omega: f64) -> f64 {
        omega - self.omega0
    }

    /// `√(ε² + 1)`
    pub fn bias_root(&self) -> f64 {
        self.epsilon.hypot(1.0)
    }

    /// The scaled target `σS*`, evaluated without dividing by σ.
    pub fn scaled_target(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.sigma + self.epsilon,
            0.0,
            0.0,
            self.sigma - self.epsilon,
        )
    }

    /// The target matrix `S*`. Undefined for σ = 0.
    pub fn target(&self) -> Matrix2<f64> {
        self.scaled_target() / self.sigma
    }
}

/// The constant transmissive background `C`.
pub fn constant_background() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, 1.0, 0.0)
}

/// `g(ε) = ε + √(ε² + 1)`, evaluated without cancellation for ε < 0.
pub fn bias_gain(epsilon: f64) -> f64 {
    let root = epsilon.hypot(1.0);
    if epsilon >= 0.0 {
        epsilon + root
    } else {
        1.0 / (root - epsilon)
    }
}

/// `h(σ, ε) = (σ + √(ε² + 1)) / (g(ε)² + 1)`
pub fn coupling_weight(sigma: f64, epsilon: f64) -> f64 {
    let g = bias_gain(epsilon);
    (sigma + epsilon.hypot(1.0)) / (g * g + 1.0)
}

/// Coupling quantities derived from [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub g: f64,
    pub h: f64,
    /// Real coupling vector `D = √(γh)·(−g, 1)ᵀ`.
    pub d: [f64; 2],
    pub gamma_i: f64,
    /// Eigenvalues of `σS* − C`, ordered so that `|μ₁| ≥ |μ₂|`.
    pub mu: [f64; 2],
    /// Orthonormal eigenvectors matching `mu`.
    pub v: [[f64; 2]; 2],
}

impl Coupling {
    pub fn d_vector(&self) -> Vector2<f64> {
        Vector2::new(self.d[0], self.d[1])
    }

    /// Coupling coefficient of `port` (1 or 2).
    pub fn d_port(&self, port: usize) -> f64 {
        self.d[port - 1]
    }

    /// Reversible (radiative) part of the background decay, `γ − γᵢ`.
    pub fn gamma_r(&self, p: &ModelParams) -> f64 {
        p.gamma - self.gamma_i
    }

    /// `|μ₂|/|μ₁|`; zero means the rank-one approximation is exact.
    pub fn quality_ratio(&self) -> f64 {
        self.mu[1].abs() / self.mu[0].abs()
    }

    pub fn eigenvector(&self, k: usize) -> Vector2<f64> {
        Vector2::new(self.v[k][0], self.v[k][1])
    }
}

fn check_dominance(mu1: f64, mu2: f64) -> Result<()> {
    let (a1, a2) = (mu1.abs(), mu2.abs());
    if a1 - a2 <= DEGENERACY_TOL * a1.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSpectrum {
            mu1_abs: a1,
            mu2_abs: a2,
        });
    }
    Ok(())
}

/// Builds the coupling vector and the derived rates from the closed-form
/// eigenpairs of `σS* − C`.
pub fn build_coupling(p: &ModelParams) -> Result<Coupling> {
    p.validate()?;
    let root = p.bias_root();
    let mu1 = p.sigma + root;
    let mu2 = p.sigma - root;
    check_dominance(mu1, mu2)?;

    let g = bias_gain(p.epsilon);
    let h = mu1 / (g * g + 1.0);
    let amp = (p.gamma * h).sqrt();
    let d = [-g * amp, amp];

    let gamma_i = p.gamma * (1.0 - mu1 / 2.0);
    if gamma_i >= p.gamma {
        return Err(Error::IrreversibleBackground {
            gamma_i,
            gamma: p.gamma,
        });
    }

    let norm = (g * g + 1.0).sqrt();
    let v1 = [-g / norm, 1.0 / norm];
    let v2 = [1.0 / norm, g / norm];

    let c = Coupling {
        g,
        h,
        d,
        gamma_i,
        mu: [mu1, mu2],
        v: [v1, v2],
    };
    if c.quality_ratio() > QUALITY_WARN_RATIO {
        log::warn!(
            "rank-one coupling approximation is poor: |mu2|/|mu1| = {:.3}",
            c.quality_ratio()
        );
    }
    Ok(c)
}

/// Coupling data for a user-supplied real symmetric target and background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCoupling {
    pub d: [f64; 2],
    pub gamma_i: f64,
    pub mu: [f64; 2],
    pub v: [[f64; 2]; 2],
}

/// Eigenpairs of a real symmetric 2×2 matrix, sorted by decreasing magnitude.
fn symmetric_eigen(m: &Matrix2<f64>) -> ([f64; 2], [[f64; 2]; 2]) {
    let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b);
    let mut lambda = [mean + radius, mean - radius];
    if lambda[1].abs() > lambda[0].abs() {
        lambda.swap(0, 1);
    }

    let vec_for = |l: f64| -> [f64; 2] {
        // two algebraically equivalent null vectors of (M − l·I); keep the better-conditioned one
        let u = [b, l - a];
        let w = [l - d, b];
        let (nu, nw) = (u[0].hypot(u[1]), w[0].hypot(w[1]));
        let (x, n) = if nu >= nw { (u, nu) } else { (w, nw) };
        if n == 0.0 {
            return [1.0, 0.0];
        }
        [x[0] / n, x[1] / n]
    };
    let v1 = vec_for(lambda[0]);
    // orthogonal complement keeps the pair orthonormal even for a double eigenvalue
    let v2 = [-v1[1], v1[0]];
    (lambda, [v1, v2])
}

/// Builds `D = v₁·√(γμ₁)` for an arbitrary real symmetric target `S*` and
/// background `C`. The sign of `v₁` is fixed so its last nonzero component is
/// positive, which reproduces [`build_coupling`] for the reflective target.
pub fn coupling_from_matrices(
    target: &Matrix2<f64>,
    background: &Matrix2<f64>,
    sigma: f64,
    gamma: f64,
) -> Result<SpectralCoupling> {
    if !(sigma > 0.0 && gamma > 0.0) {
        return Err(Error::InvalidParams(format!(
            "sigma and gamma must be > 0, got {sigma}, {gamma}"
        )));
    }
    let m = target * sigma - background;
    if (m[(0, 1)] - m[(1, 0)]).abs() > 1e-12 * m.norm().max(1.0) {
        return Err(Error::InvalidParams("sigma*S* - C must be symmetric".into()));
    }
    let (mu, mut v) = symmetric_eigen(&m);
    check_dominance(mu[0], mu[1])?;
    if mu[0] <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "dominant eigenvalue {} must be positive for a real coupling vector",
            mu[0]
        )));
    }
    for vk in v.iter_mut() {
        let last = if vk[1] != 0.0 { vk[1] } else { vk[0] };
        if last < 0.0 {
            vk[0] = -vk[0];
            vk[1] = -vk[1];
        }
    }
    let amp = (gamma * mu[0]).sqrt();
    let d = [v[0][0] * amp, v[0][1] * amp];
    let dd = d[0] * d[0] + d[1] * d[1];
    let gamma_i = gamma - 0.5 * dd;
    Ok(SpectralCoupling { d, gamma_i, mu, v })
}

/// Frequency-dependent background scattering matrix `C + D·F⁻¹·Dᵀ`.
pub fn background_matrix(c: &Coupling, p: &ModelParams, omega: f64) -> CMat2 {
    let f = Complex64::new(p.gamma, p.detuning(omega));
    let inv_f = f.inv();
    let cb = constant_background();
    CMat2::from_fn(|i, j| Complex64::from(cb[(i, j)]) + inv_f * (c.d[i] * c.d[j]))
}

/// Residuals of the identities the coupling construction must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `‖D·γ⁻¹·Dᵀ − μ₁v₁v₁ᵀ‖` (dominant-subspectrum condition).
    pub dominant_subspectrum_residual: f64,
    /// `‖σS* − C − Σ μₖvₖvₖᵀ‖`
    pub spectral_expansion_residual: f64,
    /// `|DᵀD − 2(γ − γᵢ)|`
    pub decay_rate_residual: f64,
    /// `|DᵀD − γ(σ + √(ε²+1))|`
    pub coupling_norm_residual: f64,
    /// `|g·(√(ε²+1) − ε) − 1|`
    pub eigenvector_identity_residual: f64,
    /// `‖B†B − I‖` for the perfectly matched (σ = 1, ε = 0) background at resonance.
    pub matched_unitarity_defect: f64,
    /// `‖C + D·γ⁻¹·Dᵀ − S*‖` for the perfectly matched background.
    pub matched_target_residual: f64,
    /// `|μ₂|/|μ₁|`
    pub quality_ratio: f64,
    pub quality_warning: bool,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.dominant_subspectrum_residual,
            self.spectral_expansion_residual,
            self.decay_rate_residual,
            self.coupling_norm_residual,
            self.eigenvector_identity_residual,
            self.matched_unitarity_defect,
            self.matched_target_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Residuals measured relative to the natural scale of each identity.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

fn outer(v: &Vector2<f64>) -> Matrix2<f64> {
    v * v.transpose()
}

/// Evaluates the dominant-subspectrum and matching conditions.
///
/// Residuals are normalised by `γ` or `|μ₁|` where the identity is
/// dimensional, so the report can be thresholded at machine-precision level.
pub fn validate_conditions(c: &Coupling, p: &ModelParams) -> Result<ValidationReport> {
    check_dominance(c.mu[0], c.mu[1])?;
    let d = c.d_vector();
    let mu1 = c.mu[0];
    let v1 = c.eigenvector(0);
    let v2 = c.eigenvector(1);

    let dominant = (outer(&d) / p.gamma - outer(&v1) * mu1).norm() / mu1.abs();
    let m = p.scaled_target() - constant_background();
    let expansion =
        (m - outer(&v1) * c.mu[0] - outer(&v2) * c.mu[1]).norm() / mu1.abs();
    let dd = d.dot(&d);
    let decay = (dd - 2.0 * (p.gamma - c.gamma_i)).abs() / p.gamma;
    let norm = (dd - p.gamma * (p.sigma + p.bias_root())).abs() / p.gamma;
    let eig = (c.g * (p.bias_root() - p.epsilon) - 1.0).abs();

    let matched_params = ModelParams {
        sigma: 1.0,
        epsilon: 0.0,
        ..*p
    };
    let matched = build_coupling(&matched_params)?;
    let b = background_matrix(&matched, &matched_params, p.omega0);
    let unitarity = (b.adjoint() * b - CMat2::identity()).norm();
    let target = matched_params.target().map(Complex64::from);
    let target_res = (b - target).norm();

    let quality_ratio = c.quality_ratio();
    Ok(ValidationReport {
        dominant_subspectrum_residual: dominant,
        spectral_expansion_residual: expansion,
        decay_rate_residual: decay,
        coupling_norm_residual: norm,
        eigenvector_identity_residual: eig,
        matched_unitarity_defect: unitarity,
        matched_target_residual: target_res,
        quality_ratio,
        quality_warning: quality_ratio > QUALITY_WARN_RATIO,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(sigma: f64, epsilon: f64, gamma: f64) -> ModelParams {
        ModelParams {
            omega0: 100.0,
            nu: 1.0,
            kappa: 1.0,
            gamma,
            sigma,
            epsilon,
        }
    }

    #[test]
    fn perfect_matching_coupling() {
        let p = params(1.0, 0.0, 1.0);
        let c = build_coupling(&p).unwrap();
        assert_eq!(c.g, 1.0);
        assert!((c.h - 1.0).abs() < 1e-15);
        assert!((c.d[0] + 1.0).abs() < 1e-15 && (c.d[1] - 1.0).abs() < 1e-15);
        assert!(c.gamma_i.abs() < 1e-15);
    }

    #[test]
    fn biased_coupling_values() {
        // g = 0.3 + √1.09, h = (0.6 + √1.09)/(g² + 1), γᵢ/γ = 1 − (0.6 + √1.09)/2
        let p = params(0.6, 0.3, 1.0);
        let c = build_coupling(&p).unwrap();
        assert!((c.g - 1.344_030_650_891_055).abs() < 1e-12);
        assert!((c.h - 0.585_810_959_775_624).abs() < 1e-12);
        assert!((c.gamma_i - 0.177_984_674_554_472).abs() < 1e-12);
        assert!((c.mu[0] - (0.6 + 1.09f64.sqrt())).abs() < 1e-15);
        assert!((c.mu[1] - (0.6 - 1.09f64.sqrt())).abs() < 1e-15);

        let m = p.scaled_target() - constant_background();
        let rebuilt = outer(&c.eigenvector(0)) * c.mu[0] + outer(&c.eigenvector(1)) * c.mu[1];
        assert!((m - rebuilt).norm() < 1e-12);
    }

    #[test]
    fn matched_background_is_identity_at_resonance() {
        let p = params(1.0, 0.0, 2.5);
        let c = build_coupling(&p).unwrap();
        let b = background_matrix(&c, &p, p.omega0);
        assert!((b - CMat2::identity()).norm() < 1e-15);
    }

    #[test]
    fn matched_background_unitary_off_resonance() {
        let p = params(1.0, 0.0, 2.5);
        let c = build_coupling(&p).unwrap();
        for k in -50..=50 {
            let b = background_matrix(&c, &p, p.omega0 + 0.3 * k as f64);
            assert!((b.adjoint() * b - CMat2::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn biased_background_at_resonance() {
        let p = params(0.6, 0.3, 3.0);
        let c = build_coupling(&p).unwrap();
        let b = background_matrix(&c, &p, p.omega0);
        let (g, h) = (c.g, c.h);
        let expect = Matrix2::new(g * g * h, 1.0 - g * h, 1.0 - g * h, h).map(Complex64::from);
        assert!((b - expect).norm() < 1e-14);
        let direct = (constant_background() + outer(&c.d_vector()) / p.gamma).map(Complex64::from);
        assert!((b - direct).norm() < 1e-14);
    }

    #[test]
    fn quality_ratio_values() {
        let c = build_coupling(&params(1.0, 0.0, 1.0)).unwrap();
        let r = validate_conditions(&c, &params(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.quality_ratio, 0.0);
        assert!(r.passes(1e-12));

        let p = params(0.6, 0.3, 1.0);
        let c = build_coupling(&p).unwrap();
        let r = validate_conditions(&c, &p).unwrap();
        let expect = (0.6 - 1.09f64.sqrt()).abs() / (0.6 + 1.09f64.sqrt());
        assert!((r.quality_ratio - expect).abs() < 1e-15);
        assert!((r.quality_ratio - 0.2701).abs() < 1e-4);
        assert!(!r.quality_warning);
    }

    #[test]
    fn zero_sigma_is_degenerate() {
        let err = build_coupling(&params(0.0, 0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum { .. }));
        let err = build_coupling(&params(0.0, 0.7, 1.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum { .. }));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(matches!(
            build_coupling(&params(-0.1, 0.0, 1.0)),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            build_coupling(&params(1.0, 0.0, 0.0)),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            ModelParams::new(1.0, 1.0, f64::NAN, 1.0, 1.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn general_construction_matches_closed_form() {
        let p = params(0.6, 0.3, 2.0);
        let closed = build_coupling(&p).unwrap();
        let general =
            coupling_from_matrices(&p.target(), &constant_background(), p.sigma, p.gamma).unwrap();
        for k in 0..2 {
            assert!((closed.d[k] - general.d[k]).abs() < 1e-13);
            assert!((closed.mu[k] - general.mu[k]).abs() < 1e-13);
        }
        assert!((closed.gamma_i - general.gamma_i).abs() < 1e-13);
    }

    #[test]
    fn biased_cavity_preset() {
        let p = ModelParams::biased_cavity();
        p.validate().unwrap();
        assert!((p.omega0 / (2.0 * std::f64::consts::PI) - 1820.0).abs() < 1e-9);
        assert_eq!(p.gamma, 2.0 * p.nu);
    }

    proptest! {
        #[test]
        fn gain_identity(eps in -50.0f64..50.0) {
            let g = bias_gain(eps);
            prop_assert!(g > 0.0);
            prop_assert!((g * (eps.hypot(1.0) - eps) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn construction_identities(sigma in 1e-3f64..2.0, eps in -1.0f64..1.0, gamma in 1e-3f64..10.0) {
            let p = params(sigma, eps, gamma);
            let c = build_coupling(&p).unwrap();
            let r = validate_conditions(&c, &p).unwrap();
            prop_assert!(r.passes(1e-12), "{:?}", r);
            prop_assert!(c.h > 0.0);
            prop_assert!(c.gamma_i < p.gamma);
        }
    }
}
