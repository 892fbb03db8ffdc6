//! Direct integration of the modal equation, used as an independent check of
//! the analytic forced response.
//!
//! Forced runs integrate the slowly varying envelope `b = a·e^{−iωt}`,
//!
//! ```text
//! db/dt = (ν − iΔ − κ|b|²)·b + D_j·s
//! ```
//!
//! with classical fourth-order Runge–Kutta, then reconstruct the lab-frame
//! amplitude and outgoing waves over an integer number of forcing periods.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forced_response::{forced_response, wrap_phase, ForcedResponse, ForcingPoint};
use crate::model::{background_matrix, Coupling, ModelParams};
use crate::scattering::{limit_cycle_amplitude, scattering_from_signals};
use crate::{CMat2, CVec2};

/// Samples per forcing period in the default step.
pub const STEPS_PER_PERIOD: f64 = 256.0;
/// Coarsest allowed step, in samples per period.
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;
/// Off-line power fraction below which the response counts as synchronized.
pub const SYNC_THRESHOLD: f64 = 1e-4;
/// Relative tolerance on the free-running limit-cycle amplitude.
pub const FREE_RUN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub dt: f64,
    pub t_transient: f64,
    pub t_measure: f64,
    /// Initial modal amplitude `a(0)`.
    pub init: Complex64,
}

impl SimConfig {
    /// Defaults for forcing at `omega`: 256 steps per period, a transient of
    /// `20/ν`, and a window of at least 50 periods and `10/ν`.
    pub fn for_forcing(p: &ModelParams, omega: f64) -> Self {
        let period = TAU / omega;
        let rate = if p.nu > 0.0 { p.nu } else { p.gamma };
        let n_periods = (10.0 / rate / period).ceil().max(50.0);
        let init = limit_cycle_amplitude(p).unwrap_or(1.0);
        Self {
            dt: period / STEPS_PER_PERIOD,
            t_transient: 20.0 / rate,
            t_measure: n_periods * period,
            init: Complex64::new(init, 0.0),
        }
    }

    /// Defaults for an unforced run, with the window measured in periods of ω₀.
    pub fn free_run(p: &ModelParams) -> Self {
        Self::for_forcing(p, p.omega0)
    }

    pub fn with_init(mut self, init: Complex64) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self, p: &ModelParams, omega: f64) -> Result<()> {
        let max = TAU / (MIN_STEPS_PER_PERIOD * omega.max(p.omega0));
        if !(self.dt > 0.0 && self.dt < max) {
            return Err(Error::StepTooLarge { dt: self.dt, max });
        }
        if !(self.t_transient >= 0.0 && self.t_transient.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "t_transient must be >= 0, got {}",
                self.t_transient
            )));
        }
        check_window(self.t_measure, TAU / omega, self.dt)
    }

    fn steps(&self) -> (usize, usize) {
        (
            (self.t_transient / self.dt).round() as usize,
            (self.t_measure / self.dt).round() as usize,
        )
    }
}

fn check_window(window: f64, period: f64, dt: f64) -> Result<()> {
    let cycles = (window / period).round();
    if cycles < 1.0 || (window - cycles * period).abs() > dt {
        return Err(Error::WindowMismatch { window, period });
    }
    Ok(())
}

/// One classical Runge–Kutta step of `dz/dt = f(t, z)`.
pub fn rk4_step<F>(f: &F, t: f64, z: Complex64, dt: f64) -> Complex64
where
    F: Fn(f64, Complex64) -> Complex64,
{
    let h = 0.5 * dt;
    let k1 = f(t, z);
    let k2 = f(t + h, z + k1 * h);
    let k3 = f(t + h, z + k2 * h);
    let k4 = f(t + dt, z + k3 * dt);
    z + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0)
}

/// Least-squares projection of a uniformly sampled series onto `e^{iωt}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Demodulated {
    /// Complex amplitude `ρ·e^{iφ}`.
    pub amplitude: Complex64,
    pub rho: f64,
    pub phi: f64,
    /// `1 − projected power / total power`, in `[0, 1]`.
    pub residual_power: f64,
}

/// Projects `series` (sampled at uniformly spaced `times`) onto `e^{iωt}`.
///
/// The window `N·dt` must hold an integer number of periods to within one
/// step. A zero series yields zero amplitude, zero phase and zero residual.
pub fn demodulate(times: &[f64], series: &[Complex64], omega: f64) -> Result<Demodulated> {
    assert_eq!(times.len(), series.len(), "times and series differ in length");
    let n = series.len();
    if n < 2 {
        return Err(Error::WindowMismatch {
            window: 0.0,
            period: TAU / omega,
        });
    }
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    check_window(n as f64 * dt, TAU / omega, dt)?;

    let total: f64 = series.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(Demodulated {
            amplitude: Complex64::new(0.0, 0.0),
            rho: 0.0,
            phi: 0.0,
            residual_power: 0.0,
        });
    }
    let sum: Complex64 = times
        .iter()
        .zip(series)
        .map(|(&t, &z)| z * Complex64::from_polar(1.0, -omega * t))
        .sum();
    let amplitude = sum / n as f64;
    let projected = n as f64 * amplitude.norm_sqr();
    Ok(Demodulated {
        amplitude,
        rho: amplitude.norm(),
        phi: wrap_phase(amplitude.arg()),
        residual_power: (1.0 - projected / total).clamp(0.0, 1.0),
    })
}

/// Unforced trajectory sampled every `dt`.
#[derive(Debug, Clone)]
pub struct FreeRun {
    pub dt: f64,
    pub times: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    /// First sample of the measurement window.
    pub measure_start: usize,
}

impl FreeRun {
    pub fn final_amplitude(&self) -> f64 {
        self.amplitude.last().map_or(0.0, |z| z.norm())
    }

    /// Angular frequency of the largest FFT bin over the measurement window,
    /// together with the bin width.
    pub fn spectral_peak(&self) -> (f64, f64) {
        let mut buf: Vec<Complex64> = self.amplitude[self.measure_start..].to_vec();
        let n = buf.len();
        let fft = FftPlanner::new().plan_fft_forward(n);
        fft.process(&mut buf);
        let (k, _) = buf
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("non-empty window");
        let bin = TAU / (n as f64 * self.dt);
        let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        (signed * bin, bin)
    }
}

/// Integrates the unforced modal equation in the lab frame.
///
/// `a(0) = 0` is an equilibrium and is returned as such; any other start
/// must settle on `|a₀| = √(ν/κ)` by the end of the run.
pub fn simulate_free(p: &ModelParams, cfg: &SimConfig) -> Result<FreeRun> {
    p.validate()?;
    let target = limit_cycle_amplitude(p)?;
    cfg.validate(p, p.omega0)?;
    let (n_trans, n_meas) = cfg.steps();
    let total = n_trans + n_meas;

    let rhs = |_t: f64, a: Complex64| {
        Complex64::new(p.nu - p.kappa * a.norm_sqr(), p.omega0) * a
    };
    let mut times = Vec::with_capacity(total + 1);
    let mut amplitude = Vec::with_capacity(total + 1);
    let mut a = cfg.init;
    times.push(0.0);
    amplitude.push(a);
    for k in 0..total {
        let t = k as f64 * cfg.dt;
        a = rk4_step(&rhs, t, a, cfg.dt);
        times.push((k + 1) as f64 * cfg.dt);
        amplitude.push(a);
    }
    // drop the final sample so the window spans exactly n_meas steps
    times.pop();
    amplitude.pop();
    let run = FreeRun {
        dt: cfg.dt,
        times,
        amplitude,
        measure_start: n_trans,
    };
    if cfg.init.norm() == 0.0 {
        return Ok(run);
    }
    let end = a.norm();
    let rel_err = (end - target).abs() / target;
    if rel_err > FREE_RUN_TOL {
        return Err(Error::NonConvergence {
            amplitude: end,
            target,
            rel_err,
        });
    }
    Ok(run)
}

#[derive(Debug, Clone)]
pub struct SimResult {
    /// Demodulated complex modal amplitude `ρ̂·e^{iφ̂}`.
    pub amplitude: Complex64,
    pub rho_hat: f64,
    pub phi_hat: f64,
    pub sync: bool,
    pub residual_power: f64,
    /// Demodulated outgoing wave amplitudes at the forcing frequency.
    pub s_out: CVec2,
    pub times: Vec<f64>,
    pub a_series: Vec<Complex64>,
    pub s_out_series: Vec<[Complex64; 2]>,
}

/// Integrates the forced modal equation and demodulates the steady segment.
pub fn simulate_forced(
    p: &ModelParams,
    c: &Coupling,
    f: &ForcingPoint,
    cfg: &SimConfig,
) -> Result<SimResult> {
    p.validate()?;
    cfg.validate(p, f.omega)?;
    let (n_trans, n_meas) = cfg.steps();
    let j = f.port.index();
    let detuning = p.detuning(f.omega);
    let drive = Complex64::from(c.d[j] * f.s);
    let rhs = |_t: f64, b: Complex64| Complex64::new(p.nu - p.kappa * b.norm_sqr(), -detuning) * b + drive;

    let mut b = cfg.init;
    for k in 0..n_trans {
        b = rk4_step(&rhs, k as f64 * cfg.dt, b, cfg.dt);
    }

    let background = background_matrix(c, p, f.omega);
    let linear_col = [background[(0, j)] * f.s, background[(1, j)] * f.s];
    let mut times = Vec::with_capacity(n_meas);
    let mut a_series = Vec::with_capacity(n_meas);
    let mut s_out_series = Vec::with_capacity(n_meas);
    for k in 0..n_meas {
        let t = (n_trans + k) as f64 * cfg.dt;
        let carrier = Complex64::from_polar(1.0, f.omega * t);
        let a = b * carrier;
        times.push(t);
        a_series.push(a);
        s_out_series.push([
            linear_col[0] * carrier + a * c.d[0],
            linear_col[1] * carrier + a * c.d[1],
        ]);
        b = rk4_step(&rhs, t, b, cfg.dt);
    }

    let demod = demodulate(&times, &a_series, f.omega)?;
    let out: Vec<Demodulated> = (0..2)
        .map(|i| {
            let component: Vec<Complex64> = s_out_series.iter().map(|s| s[i]).collect();
            demodulate(&times, &component, f.omega)
        })
        .collect::<Result<_>>()?;

    Ok(SimResult {
        amplitude: demod.amplitude,
        rho_hat: demod.rho,
        phi_hat: demod.phi,
        sync: demod.residual_power < SYNC_THRESHOLD,
        residual_power: demod.residual_power,
        s_out: CVec2::new(out[0].amplitude, out[1].amplitude),
        times,
        a_series,
        s_out_series,
    })
}

impl SimResult {
    /// Scattering column for the forced port, `s_out / s`.
    pub fn scattering_column(&self, f: &ForcingPoint) -> Result<CVec2> {
        let mut s_in = CVec2::zeros();
        s_in[f.port.index()] = Complex64::from(f.s);
        let m: CMat2 = scattering_from_signals(&s_in, &self.s_out)?;
        Ok(m.column(f.port.index()).into_owned())
    }
}

/// Writes the measured window as CSV:
/// `t,re_a,im_a,re_s_out_1,im_s_out_1,re_s_out_2,im_s_out_2`.
pub fn write_timeseries_csv<W: Write>(w: &mut W, sim: &SimResult) -> Result<()> {
    writeln!(w, "t,re_a,im_a,re_s_out_1,im_s_out_1,re_s_out_2,im_s_out_2")?;
    for ((t, a), s) in sim.times.iter().zip(&sim.a_series).zip(&sim.s_out_series) {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            t, a.re, a.im, s[0].re, s[0].im, s[1].re, s[1].im
        )?;
    }
    Ok(())
}

/// Time-domain versus analytic comparison at one forcing point.
#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub analytic: ForcedResponse,
    pub analytic_column: CVec2,
    pub simulated_column: CVec2,
    pub rho_hat: f64,
    pub phi_hat: f64,
    pub sync: bool,
    pub residual_power: f64,
    pub rho_rel_err: f64,
    /// Wrapped phase difference in radians.
    pub phi_err: f64,
    pub column_rel_err: f64,
}

impl OracleComparison {
    pub fn agrees(&self, tol: f64) -> bool {
        self.sync && self.rho_rel_err < tol && self.phi_err < tol && self.column_rel_err < tol
    }
}

/// Absolute difference of two angles, wrapped into `[0, π]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn compare_with_analytic(
    p: &ModelParams,
    c: &Coupling,
    f: &ForcingPoint,
    cfg: &SimConfig,
) -> Result<OracleComparison> {
    let analytic = forced_response(p, c, f)?;
    let j = f.port.index();
    let background = background_matrix(c, p, f.omega);
    let mode = Complex64::from_polar(analytic.rho, analytic.phi) / f.s;
    let analytic_column = CVec2::new(
        background[(0, j)] + mode * c.d[0],
        background[(1, j)] + mode * c.d[1],
    );
    let sim = simulate_forced(p, c, f, cfg)?;
    let simulated_column = sim.scattering_column(f)?;
    Ok(OracleComparison {
        rho_rel_err: (sim.rho_hat - analytic.rho).abs() / analytic.rho,
        phi_err: phase_distance(sim.phi_hat, analytic.phi),
        column_rel_err: (simulated_column - analytic_column).norm() / analytic_column.norm(),
        analytic,
        analytic_column,
        simulated_column,
        rho_hat: sim.rho_hat,
        phi_hat: sim.phi_hat,
        sync: sim.sync,
        residual_power: sim.residual_power,
    })
}
