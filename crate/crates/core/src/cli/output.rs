//! `sweep.csv` and `sweep_meta.json` writers.

use std::io::Write;

use serde::Serialize;

use super::config::RunConfig;
use crate::error::Result;
use crate::model::{Coupling, ModelParams};
use crate::sweep::SweepGrid;

/// Column order of `sweep.csv`. Stable; append-only.
pub const SWEEP_COLUMNS: [&str; 20] = [
    "freq_hz",
    "s_tilde",
    "re_s11",
    "im_s11",
    "re_s12",
    "im_s12",
    "re_s21",
    "im_s21",
    "re_s22",
    "im_s22",
    "abs_db_s11",
    "abs_db_s12",
    "abs_db_s21",
    "abs_db_s22",
    "alpha1",
    "alpha2",
    "n_roots_1",
    "n_roots_2",
    "sync_capable",
    "errors",
];

pub const DB_CONVENTION: &str = "abs_db = 20*log10(|S_ij|)";

/// Scientific notation with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the long-format table: one `#` comment line, the header row, then
/// one row per cell ordered by amplitude row and then frequency.
pub fn write_sweep_csv<W: Write>(w: W, grid: &SweepGrid) -> Result<()> {
    let mut w = w;
    writeln!(w, "# {DB_CONVENTION}")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_COLUMNS)?;
    let nf = grid.freq_axis.len();
    for (k, cell) in grid.cells.iter().enumerate() {
        let (f_hz, s_tilde) = (grid.freq_axis[k % nf], grid.amp_axis[k / nf]);
        let mut row = vec![num(f_hz), num(s_tilde)];
        match cell {
            Ok(r) => {
                for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    let z = r.entry(i, j);
                    row.push(num(z.re));
                    row.push(num(z.im));
                }
                for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    row.push(num(r.entry_db(i, j)));
                }
                row.push(num(r.alpha[0]));
                row.push(num(r.alpha[1]));
                row.push(r.responses[0].n_real_roots.to_string());
                row.push(r.responses[1].n_real_roots.to_string());
                row.push(u8::from(r.sync_capable()).to_string());
                row.push(String::new());
            }
            Err(msg) => {
                row.extend(std::iter::repeat_n(num(f64::NAN), 14));
                row.extend(["0".to_string(), "0".to_string(), "0".to_string()]);
                row.push(msg.clone());
            }
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct DerivedQuantities {
    pub g: f64,
    pub h: f64,
    pub d: [f64; 2],
    pub gamma_i: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub quality_ratio: f64,
}

impl From<&Coupling> for DerivedQuantities {
    fn from(c: &Coupling) -> Self {
        Self {
            g: c.g,
            h: c.h,
            d: c.d,
            gamma_i: c.gamma_i,
            mu1: c.mu[0],
            mu2: c.mu[1],
            quality_ratio: c.quality_ratio(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SweepMeta<'a> {
    pub code_version: &'a str,
    pub config: &'a RunConfig,
    /// Parameters in rad/s as used by the solver.
    pub params: ModelParams,
    pub derived: DerivedQuantities,
    pub branch_policy: crate::forced_response::BranchPolicy,
    pub freq_axis_hz: &'a [f64],
    pub s_tilde_axis: &'a [f64],
    pub columns: [&'static str; 20],
    pub db_convention: &'static str,
    pub failed_cells: usize,
}

impl<'a> SweepMeta<'a> {
    pub fn new(config: &'a RunConfig, grid: &'a SweepGrid) -> Self {
        Self {
            code_version: grid.version,
            config,
            params: grid.params,
            derived: DerivedQuantities::from(&grid.coupling),
            branch_policy: grid.policy,
            freq_axis_hz: &grid.freq_axis,
            s_tilde_axis: &grid.amp_axis,
            columns: SWEEP_COLUMNS,
            db_convention: DB_CONVENTION,
            failed_cells: grid.failures().len(),
        }
    }
}

pub fn write_sweep_meta<W: Write>(mut w: W, meta: &SweepMeta) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, meta)?;
    writeln!(w)?;
    Ok(())
}
