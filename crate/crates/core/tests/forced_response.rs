//! Properties of the forced response and of the scattering matrix built from it.

use num_complex::Complex64;
use proptest::prelude::*;

use nlcscatter::forced_response::{
    amplitude_cubic, amplitude_residual, classify_stability, forced_response_with, solve_amplitude,
    solve_phase, steady_state_residual,
};
use nlcscatter::model::{background_matrix, bias_gain};
use nlcscatter::scattering::{absolute_amplitude, absorption};
use nlcscatter::timedomain::{simulate_forced, SimConfig};
use nlcscatter::{
    build_coupling, forced_response::forced_response, scattering_matrix, BranchPolicy, CVec2,
    ForcingPoint, ModelParams, Port,
};

fn unit_params(sigma: f64, epsilon: f64) -> ModelParams {
    ModelParams {
        omega0: 50.0,
        nu: 1.0,
        kappa: 1.0,
        gamma: 2.0,
        sigma,
        epsilon,
    }
}

fn any_params() -> impl Strategy<Value = ModelParams> {
    (
        0.1f64..5.0,
        0.1f64..5.0,
        0.1f64..5.0,
        0.05f64..2.0,
        -1.0f64..1.0,
    )
        .prop_map(|(nu, kappa, gamma, sigma, epsilon)| ModelParams {
            omega0: 100.0,
            nu,
            kappa,
            gamma,
            sigma,
            epsilon,
        })
}

proptest! {
    #[test]
    fn every_root_solves_the_cubic_and_the_complex_balance(
        p in any_params(),
        detuning in -20.0f64..20.0,
        s in 1e-3f64..1e3,
        port in prop_oneof![Just(Port::One), Just(Port::Two)],
    ) {
        let c = build_coupling(&p).unwrap();
        let f = ForcingPoint::new(p.omega0 + detuning, s, port).unwrap();
        let coeffs = amplitude_cubic(&p, c.d_port(port.number()), s, detuning);
        for rho in solve_amplitude(&p, &c, &f).unwrap() {
            prop_assert!(amplitude_residual(&coeffs, rho) < 1e-10);
            let phi = solve_phase(&p, &c, &f, rho).unwrap();
            prop_assert!((0.0..std::f64::consts::TAU).contains(&phi));
            prop_assert!(steady_state_residual(&p, &c, &f, rho, phi) < 1e-9);
        }
    }

    #[test]
    fn amplitude_grows_with_forcing_in_the_single_root_regime(
        p in any_params(),
        detuning in -20.0f64..20.0,
        s in 1e-3f64..1e2,
        factor in 1.001f64..10.0,
    ) {
        let c = build_coupling(&p).unwrap();
        let omega = p.omega0 + detuning;
        let lo = solve_amplitude(&p, &c, &ForcingPoint::new(omega, s, Port::Two).unwrap()).unwrap();
        let hi = solve_amplitude(&p, &c, &ForcingPoint::new(omega, s * factor, Port::Two).unwrap()).unwrap();
        prop_assume!(lo.len() == 1 && hi.len() == 1);
        prop_assert!(hi[0] > lo[0]);
    }

    /// The port enters only through `|D_j|·s`, and `|D₁| = g·|D₂|`.
    #[test]
    fn ports_differ_only_through_coupling_magnitude(
        p in any_params(),
        detuning in -20.0f64..20.0,
        s in 1e-3f64..1e2,
    ) {
        let c = build_coupling(&p).unwrap();
        let omega = p.omega0 + detuning;
        let g = bias_gain(p.epsilon);
        prop_assert!((c.d_port(1).abs() - g * c.d_port(2).abs()).abs() < 1e-12 * c.d_port(1).abs());
        let one = solve_amplitude(&p, &c, &ForcingPoint::new(omega, s, Port::One).unwrap()).unwrap();
        let two = solve_amplitude(&p, &c, &ForcingPoint::new(omega, g * s, Port::Two).unwrap()).unwrap();
        prop_assert_eq!(one.len(), two.len());
        for (a, b) in one.iter().zip(&two) {
            prop_assert!((a - b).abs() < 1e-9 * b.max(1e-300));
        }

        let mut swapped = c;
        swapped.d.swap(0, 1);
        let back = solve_amplitude(&p, &swapped, &ForcingPoint::new(omega, s, Port::Two).unwrap()).unwrap();
        for (a, b) in one.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn absorption_is_one_minus_scattered_column_energy(
        detuning in -100.0f64..100.0,
        s_tilde in 0.05f64..50.0,
    ) {
        let p = ModelParams::biased_cavity();
        let c = build_coupling(&p).unwrap();
        let r = scattering_matrix(&p, &c, p.omega0 + detuning, absolute_amplitude(&p, s_tilde).unwrap()).unwrap();
        for port in Port::BOTH {
            let mut e = CVec2::zeros();
            e[port.index()] = Complex64::from(1.0);
            let out = r.s_total * e;
            prop_assert_eq!(r.alpha[port.index()], 1.0 - out[0].norm_sqr() - out[1].norm_sqr());
        }
    }

    #[test]
    fn linear_reflection_ratio_is_gain_squared(
        sigma in 0.05f64..2.0,
        epsilon in 0.0f64..1.0,
        detuning in -100.0f64..100.0,
    ) {
        let p = ModelParams { sigma, epsilon, ..ModelParams::biased_cavity() };
        let c = build_coupling(&p).unwrap();
        let b = background_matrix(&c, &p, p.omega0 + detuning);
        let g = bias_gain(epsilon);
        prop_assert!((b[(0, 0)].norm() / b[(1, 1)].norm() - g * g).abs() < 1e-12 * g * g);
    }

    #[test]
    fn matched_background_is_lossless(detuning in -1e3f64..1e3) {
        let p = ModelParams { sigma: 1.0, epsilon: 0.0, ..ModelParams::biased_cavity() };
        let c = build_coupling(&p).unwrap();
        let b = background_matrix(&c, &p, p.omega0 + detuning);
        for port in Port::BOTH {
            prop_assert!(absorption(&b, port).abs() < 1e-12);
        }
    }
}

#[test]
fn resonant_reflection_favours_the_biased_port() {
    let p = ModelParams::biased_cavity();
    let c = build_coupling(&p).unwrap();
    for k in 0..=40 {
        let s_tilde = 10f64.powf(-1.0 + 0.1 * k as f64);
        let r = scattering_matrix(&p, &c, p.omega0, absolute_amplitude(&p, s_tilde).unwrap()).unwrap();
        if r.responses.iter().all(|x| x.n_real_roots == 1) {
            assert!(r.entry(1, 1).norm() > r.entry(2, 2).norm(), "s~ = {s_tilde}");
        }
    }
}

#[test]
fn unbiased_ports_respond_identically() {
    let p = unit_params(0.6, 0.0);
    let c = build_coupling(&p).unwrap();
    for detuning in [-3.0, 0.0, 0.7, 5.0] {
        let r = scattering_matrix(&p, &c, p.omega0 + detuning, 0.8).unwrap();
        assert!((r.responses[0].rho - r.responses[1].rho).abs() < 1e-12);
    }
}

/// `ν = κ = 1`, `Δ = 0`, `|D₂|·s = 0.01`: `ρ²(ρ² − 1)² = 10⁻⁴`.
#[test]
fn three_roots_with_unstable_middle_branch() {
    let p = unit_params(0.6, 0.3);
    let c = build_coupling(&p).unwrap();
    let f = ForcingPoint::new(p.omega0, 0.01 / c.d_port(2).abs(), Port::Two).unwrap();
    let roots = solve_amplitude(&p, &c, &f).unwrap();
    assert_eq!(roots.len(), 3);
    let stable: Vec<bool> = roots
        .iter()
        .map(|&rho| classify_stability(&p, &f, rho, solve_phase(&p, &c, &f, rho).unwrap()).unwrap())
        .collect();
    assert_eq!(stable, [false, false, true]);
    assert!((roots[0] - 0.01).abs() < 1e-5);

    let largest = forced_response_with(&p, &c, &f, BranchPolicy::LargestStable, None).unwrap();
    assert_eq!(largest.rho, roots[2]);
    assert!(largest.stable);
    assert_eq!(largest.n_real_roots, 3);
    let followed = forced_response_with(&p, &c, &f, BranchPolicy::Continuation, Some(0.0)).unwrap();
    assert_eq!(followed.rho, roots[2], "only the upper root is stable");
}

#[test]
fn strong_forcing_follows_cube_root_law() {
    let p = unit_params(0.6, 0.3);
    let c = build_coupling(&p).unwrap();
    let mut last = f64::INFINITY;
    for s in [1e2, 1e3, 1e4, 1e5] {
        let f = ForcingPoint::new(p.omega0 + 2.0, s, Port::One).unwrap();
        let r = forced_response(&p, &c, &f).unwrap();
        let asymptote = (c.d_port(1).abs() * s / p.kappa).cbrt();
        let err = (r.rho / asymptote - 1.0).abs();
        assert!(err < last, "s = {s}: {err} !< {last}");
        last = err;
    }
    assert!(last < 1e-3);
}

#[test]
fn simulated_outgoing_wave_matches_reconstruction() {
    let p = unit_params(0.6, 0.3);
    let c = build_coupling(&p).unwrap();
    let f = ForcingPoint::new(p.omega0 + 0.5, 2.0, Port::One).unwrap();
    let sim = simulate_forced(&p, &c, &f, &SimConfig::for_forcing(&p, f.omega)).unwrap();
    assert!(sim.sync);
    let b = background_matrix(&c, &p, f.omega);
    let reconstructed = CVec2::new(
        b[(0, 0)] * f.s + c.d[0] * sim.amplitude,
        b[(1, 0)] * f.s + c.d[1] * sim.amplitude,
    );
    assert!((sim.s_out - reconstructed).norm() < 1e-3 * reconstructed.norm());
}
