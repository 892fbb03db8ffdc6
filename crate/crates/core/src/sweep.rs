//! Scattering over a rectangular (frequency × normalized amplitude) grid.
//!
//! Each amplitude row is one task: cells in a row are evaluated in
//! increasing frequency so the branch policy can follow the previous cell,
//! and rows are distributed over a fixed-size worker pool. A row's result
//! depends only on its own inputs, so output is identical for any worker
//! count.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{zero_contours, Polyline};
use crate::error::{Error, Result};
use crate::forced_response::{BranchPolicy, Port};
use crate::model::{build_coupling, Coupling, ModelParams};
use crate::scattering::{absolute_amplitude, scattering_matrix_with, ScatteringResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn single(value: f64) -> Self {
        Self::linear(value, value, 1)
    }

    /// Axis samples, strictly increasing, with both endpoints exact.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Config("axis needs at least one point".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("axis bounds must be finite".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if self.stop <= self.start {
            return Err(Error::Config(format!(
                "axis must be strictly increasing: start {} >= stop {}",
                self.start, self.stop
            )));
        }
        let last = (self.count - 1) as f64;
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|k| self.start + (self.stop - self.start) * (k as f64 / last))
                .collect(),
            Spacing::Log => {
                if self.start <= 0.0 {
                    return Err(Error::Config("log axis needs a positive start".into()));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                (0..self.count)
                    .map(|k| (a + (b - a) * (k as f64 / last)).exp())
                    .collect()
            }
        };
        v[0] = self.start;
        v[self.count - 1] = self.stop;
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Forcing frequency `ω/2π` in Hz.
    pub freq_hz: AxisSpec,
    /// Normalized forcing amplitude `s̃`.
    pub s_tilde: AxisSpec,
}

impl Default for GridSpec {
    /// 161 linear frequencies over 1740–1900 Hz × 61 logarithmic amplitudes over 0.1–10.
    fn default() -> Self {
        Self {
            freq_hz: AxisSpec::linear(1740.0, 1900.0, 161),
            s_tilde: AxisSpec::log(0.1, 10.0, 61),
        }
    }
}

/// A cell either holds a result or the message of the error that stopped it.
pub type CellOutcome = std::result::Result<ScatteringResult, String>;

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub freq_axis: Vec<f64>,
    pub amp_axis: Vec<f64>,
    /// Row-major by amplitude: `cells[i_amp * freq_axis.len() + i_freq]`.
    pub cells: Vec<CellOutcome>,
    pub params: ModelParams,
    pub coupling: Coupling,
    pub policy: BranchPolicy,
    pub version: &'static str,
}

impl SweepGrid {
    pub fn cell(&self, i_freq: usize, i_amp: usize) -> &CellOutcome {
        &self.cells[i_amp * self.freq_axis.len() + i_freq]
    }

    /// `(i_freq, i_amp, message)` for every failed cell.
    pub fn failures(&self) -> Vec<(usize, usize, &str)> {
        let nf = self.freq_axis.len();
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.as_ref().err().map(|e| (k % nf, k / nf, e.as_str())))
            .collect()
    }

    /// Row-major `α_port` field; failed cells are NaN.
    pub fn alpha_field(&self, port: Port) -> Vec<f64> {
        self.cells
            .iter()
            .map(|c| c.as_ref().map_or(f64::NAN, |r| r.alpha[port.index()]))
            .collect()
    }

    /// Index of the amplitude sample closest to `s_tilde`.
    pub fn nearest_amp(&self, s_tilde: f64) -> usize {
        nearest(&self.amp_axis, s_tilde)
    }

    pub fn nearest_freq(&self, freq_hz: f64) -> usize {
        nearest(&self.freq_axis, freq_hz)
    }
}

fn nearest(axis: &[f64], x: f64) -> usize {
    (0..axis.len())
        .min_by(|&a, &b| (axis[a] - x).abs().total_cmp(&(axis[b] - x).abs()))
        .expect("non-empty axis")
}

fn sweep_row(
    p: &ModelParams,
    c: &Coupling,
    freqs: &[f64],
    s: f64,
    policy: BranchPolicy,
) -> Vec<CellOutcome> {
    let mut previous = [None, None];
    freqs
        .iter()
        .map(|&f_hz| {
            let r = scattering_matrix_with(p, c, TAU * f_hz, s, policy, previous)
                .map_err(|e| e.to_string())?;
            previous = [Some(r.responses[0].rho), Some(r.responses[1].rho)];
            Ok(r)
        })
        .collect()
}

/// Evaluates the scattering matrix on every grid cell using `workers` threads.
pub fn run_sweep(
    p: &ModelParams,
    grid: &GridSpec,
    policy: BranchPolicy,
    workers: usize,
) -> Result<SweepGrid> {
    p.require_self_oscillation()?;
    let coupling = build_coupling(p)?;
    let freq_axis = grid.freq_hz.values()?;
    let amp_axis = grid.s_tilde.values()?;
    if freq_axis[0] <= 0.0 {
        return Err(Error::Config("frequencies must be positive".into()));
    }
    if amp_axis[0] <= 0.0 {
        return Err(Error::Config("normalized amplitudes must be positive".into()));
    }
    let amplitudes = amp_axis
        .iter()
        .map(|&st| absolute_amplitude(p, st))
        .collect::<Result<Vec<f64>>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Vec<CellOutcome>> = pool.install(|| {
        amplitudes
            .par_iter()
            .map(|&s| sweep_row(p, &coupling, &freq_axis, s, policy))
            .collect()
    });

    Ok(SweepGrid {
        freq_axis,
        amp_axis,
        cells: rows.into_iter().flatten().collect(),
        params: *p,
        coupling,
        policy,
        version: env!("CARGO_PKG_VERSION"),
    })
}

/// `α = 0` contours of an arbitrary field on the grid axes.
pub fn contour_from_field(
    freq_axis: &[f64],
    amp_axis: &[f64],
    field: &[f64],
    port: Port,
) -> Result<Vec<Polyline>> {
    let lines = zero_contours(freq_axis, amp_axis, field);
    if lines.is_empty() {
        return Err(Error::EmptyContour { port: port.number() });
    }
    Ok(lines)
}

/// Polylines in `(ω/2π, s̃)` separating superradiant (`α_j < 0`) from lossy cells.
pub fn superradiance_contour(grid: &SweepGrid, port: Port) -> Result<Vec<Polyline>> {
    contour_from_field(&grid.freq_axis, &grid.amp_axis, &grid.alpha_field(port), port)
}
