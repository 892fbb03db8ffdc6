//! Command-line front end: `point`, `sweep`, `oracle` and `validate`.
//!
//! Exit codes: 0 success, 1 error, 2 success with warnings (several
//! amplitude roots somewhere), 3 outside the synchronized regime.

pub mod config;
pub mod output;

use std::f64::consts::TAU;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Result;
use crate::forced_response::{ForcingPoint, Port};
use crate::model::{build_coupling, validate_conditions};
use crate::scattering::{absolute_amplitude, scattering_matrix_with, ScatteringResult};
use crate::sweep::run_sweep;
use crate::timedomain::{compare_with_analytic, simulate_forced, write_timeseries_csv};

pub use config::RunConfig;

/// Agreement required between the time-domain run and the analytic solution.
pub const ORACLE_TOL: f64 = 1e-3;
/// Bound on the normalised identity residuals checked by `validate`.
pub const VALIDATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Error = 1,
    Warning = 2,
    OutOfValidity = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Parser)]
#[command(name = "nlcscatter", version, about = "Nonlinear scattering by a self-oscillating cavity mode")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scattering matrix at one (frequency, amplitude) point.
    Point {
        #[command(flatten)]
        common: Common,
        /// Forcing frequency ω/2π in Hz [default: f0].
        #[arg(long)]
        omega_hz: Option<f64>,
        /// Normalized forcing amplitude s̃.
        #[arg(long, default_value_t = 1.0)]
        s_tilde: f64,
    },
    /// Grid sweep written to sweep.csv and sweep_meta.json.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Output directory [default: config output.dir, else "."].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time-domain integration compared with the analytic response.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_hz: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        s_tilde: f64,
        #[arg(long, default_value_t = 2)]
        port: usize,
        /// Directory for timeseries.csv when enabled in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residuals of the coupling-construction identities.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

/// Runs a parsed command, reporting to `out`. Errors are returned, not printed.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<Status> {
    match &cli.command {
        Command::Point {
            common,
            omega_hz,
            s_tilde,
        } => cmd_point(&RunConfig::load(&common.config)?, *omega_hz, *s_tilde, out),
        Command::Sweep {
            common,
            workers,
            out: dir,
        } => {
            let cfg = RunConfig::load(&common.config)?;
            let dir = dir
                .clone()
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            cmd_sweep(&cfg, *workers, &dir, out)
        }
        Command::Oracle {
            common,
            omega_hz,
            s_tilde,
            port,
            out: dir,
        } => {
            let cfg = RunConfig::load(&common.config)?;
            let dir = dir.clone().or_else(|| cfg.output.dir.clone());
            cmd_oracle(&cfg, *omega_hz, *s_tilde, Port::from_number(*port)?, dir.as_deref(), out)
        }
        Command::Validate { common } => cmd_validate(&RunConfig::load(&common.config)?, out),
    }
}

fn print_result<W: Write>(r: &ScatteringResult, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "omega/2pi = {:.6} Hz   s = {:.6e}   s_tilde = {}",
        r.omega / TAU,
        r.s,
        r.s_tilde.map_or("-".into(), |v| format!("{v:.6}"))
    )?;
    writeln!(out, "{:<5} {:>24} {:>24} {:>12} {:>10}", "entry", "re", "im", "|S| dB", "arg deg")?;
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let z = r.entry(i, j);
        writeln!(
            out,
            "S{i}{j}   {:>24.16e} {:>24.16e} {:>12.4} {:>10.3}",
            z.re,
            z.im,
            r.entry_db(i, j),
            z.arg().to_degrees()
        )?;
    }
    for (k, resp) in r.responses.iter().enumerate() {
        writeln!(
            out,
            "port {}: alpha = {:+.6e}  superradiant = {}  rho = {:.6e}  phi = {:.6}  roots = {}  stable = {}",
            k + 1,
            r.alpha[k],
            r.superradiant[k],
            resp.rho,
            resp.phi,
            resp.n_real_roots,
            resp.stable
        )?;
    }
    for w in &r.warnings {
        writeln!(out, "warning: {w:?}")?;
    }
    Ok(())
}

pub fn cmd_point<W: Write>(
    cfg: &RunConfig,
    omega_hz: Option<f64>,
    s_tilde: f64,
    out: &mut W,
) -> Result<Status> {
    let p = cfg.params()?;
    let c = build_coupling(&p)?;
    let omega = omega_hz.map_or(p.omega0, |f| TAU * f);
    let s = absolute_amplitude(&p, s_tilde)?;
    let r = scattering_matrix_with(&p, &c, omega, s, cfg.branch_policy, [None, None])?;
    print_result(&r, out)?;
    Ok(if r.warnings.is_empty() {
        Status::Ok
    } else {
        Status::Warning
    })
}

pub fn cmd_sweep<W: Write>(cfg: &RunConfig, workers: usize, dir: &Path, out: &mut W) -> Result<Status> {
    let p = cfg.params()?;
    let grid = run_sweep(&p, &cfg.grid, cfg.branch_policy, workers)?;
    fs::create_dir_all(dir)?;
    let csv_path = dir.join("sweep.csv");
    let meta_path = dir.join("sweep_meta.json");
    output::write_sweep_csv(BufWriter::new(File::create(&csv_path)?), &grid)?;
    output::write_sweep_meta(
        BufWriter::new(File::create(&meta_path)?),
        &output::SweepMeta::new(cfg, &grid),
    )?;

    let failures = grid.failures().len();
    let multi = grid
        .cells
        .iter()
        .filter(|c| c.as_ref().is_ok_and(|r| !r.warnings.is_empty()))
        .count();
    writeln!(
        out,
        "{} x {} cells -> {} ({} failed, {} with several amplitude roots)",
        grid.freq_axis.len(),
        grid.amp_axis.len(),
        csv_path.display(),
        failures,
        multi
    )?;
    writeln!(out, "meta -> {}", meta_path.display())?;
    Ok(if failures + multi == 0 {
        Status::Ok
    } else {
        Status::Warning
    })
}

pub fn cmd_oracle<W: Write>(
    cfg: &RunConfig,
    omega_hz: Option<f64>,
    s_tilde: f64,
    port: Port,
    timeseries_dir: Option<&Path>,
    out: &mut W,
) -> Result<Status> {
    let p = cfg.params()?;
    let c = build_coupling(&p)?;
    let omega = omega_hz.map_or(p.omega0, |f| TAU * f);
    let f = ForcingPoint::new(omega, absolute_amplitude(&p, s_tilde)?, port)?;
    let sim_cfg = cfg.sim_config(&p, omega);
    let cmp = compare_with_analytic(&p, &c, &f, &sim_cfg)?;

    writeln!(out, "port {}  omega/2pi = {:.6} Hz  s_tilde = {s_tilde}", port.number(), omega / TAU)?;
    writeln!(out, "{:<12} {:>24} {:>24} {:>12}", "", "analytic", "time-domain", "error")?;
    writeln!(
        out,
        "{:<12} {:>24.16e} {:>24.16e} {:>12.3e}",
        "rho", cmp.analytic.rho, cmp.rho_hat, cmp.rho_rel_err
    )?;
    writeln!(
        out,
        "{:<12} {:>24.16e} {:>24.16e} {:>12.3e}",
        "phi", cmp.analytic.phi, cmp.phi_hat, cmp.phi_err
    )?;
    for i in 0..2 {
        let (a, s) = (cmp.analytic_column[i], cmp.simulated_column[i]);
        writeln!(
            out,
            "S{}{}          {:>11.4e}{:+.4e}i {:>11.4e}{:+.4e}i",
            i + 1,
            port.number(),
            a.re,
            a.im,
            s.re,
            s.im
        )?;
    }
    writeln!(out, "column relative error = {:.3e}", cmp.column_rel_err)?;
    writeln!(
        out,
        "sync = {}  residual_power = {:.3e}  analytic roots = {}  stable = {}",
        cmp.sync, cmp.residual_power, cmp.analytic.n_real_roots, cmp.analytic.stable
    )?;

    if cfg.output.timeseries {
        let dir = timeseries_dir.unwrap_or_else(|| Path::new("."));
        fs::create_dir_all(dir)?;
        let sim = simulate_forced(&p, &c, &f, &sim_cfg)?;
        let path = dir.join("timeseries.csv");
        write_timeseries_csv(&mut BufWriter::new(File::create(&path)?), &sim)?;
        writeln!(out, "timeseries -> {}", path.display())?;
    }

    Ok(if !cmp.sync {
        Status::OutOfValidity
    } else if cmp.agrees(ORACLE_TOL) {
        Status::Ok
    } else {
        Status::Error
    })
}

pub fn cmd_validate<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<Status> {
    let p = cfg.params()?;
    let c = build_coupling(&p)?;
    let r = validate_conditions(&c, &p)?;
    writeln!(out, "g = {:.9}  h = {:.9}  gamma_i/gamma = {:.9}", c.g, c.h, c.gamma_i / p.gamma)?;
    writeln!(out, "D = ({:.9e}, {:.9e})  mu = ({:.9}, {:.9})", c.d[0], c.d[1], c.mu[0], c.mu[1])?;
    let rows = [
        ("dominant subspectrum", r.dominant_subspectrum_residual),
        ("spectral expansion", r.spectral_expansion_residual),
        ("decay rate D'D = 2(gamma - gamma_i)", r.decay_rate_residual),
        ("coupling norm D'D = gamma(sigma + sqrt(eps^2+1))", r.coupling_norm_residual),
        ("eigenvector identity g(sqrt(eps^2+1) - eps) = 1", r.eigenvector_identity_residual),
        ("matched background unitarity", r.matched_unitarity_defect),
        ("matched background equals target", r.matched_target_residual),
    ];
    for (name, value) in rows {
        let verdict = if value < VALIDATE_TOL { "ok" } else { "FAIL" };
        writeln!(out, "{name:<50} {value:>10.3e}  {verdict}")?;
    }
    writeln!(
        out,
        "quality ratio |mu2|/|mu1| = {:.4}{}",
        r.quality_ratio,
        if r.quality_warning { "  (degraded approximation)" } else { "" }
    )?;
    Ok(if r.passes(VALIDATE_TOL) {
        Status::Ok
    } else {
        Status::Error
    })
}
