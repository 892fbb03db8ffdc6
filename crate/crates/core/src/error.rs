use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("InvalidParams: {0}")]
    InvalidParams(String),

    #[error("IrreversibleBackground: internal decay rate {gamma_i} is not below gamma = {gamma}")]
    IrreversibleBackground { gamma_i: f64, gamma: f64 },

    #[error("DegenerateSpectrum: |mu1| = {mu1_abs} and |mu2| = {mu2_abs} leave no dominant eigenpair")]
    DegenerateSpectrum { mu1_abs: f64, mu2_abs: f64 },

    #[error("NoPositiveRoot: amplitude cubic has no positive real root")]
    NoPositiveRoot,

    #[error("ArcsinDomain: phase argument {0} lies outside [-1, 1]")]
    ArcsinDomain(f64),

    #[error("MarginalStability: largest Jacobian real part {0} is numerically zero")]
    MarginalStability(f64),

    #[error("NoLimitCycle: growth rate nu = {0} does not sustain self-oscillation")]
    NoLimitCycle(f64),

    #[error("ZeroInput: incident wave vector has zero norm")]
    ZeroInput,

    #[error("NonConvergence: |a| = {amplitude} did not settle at {target} (relative error {rel_err:.3e})")]
    NonConvergence {
        amplitude: f64,
        target: f64,
        rel_err: f64,
    },

    #[error("StepTooLarge: dt = {dt} exceeds the resolution floor {max}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("WindowMismatch: window {window} s is not an integer number of periods {period} s")]
    WindowMismatch { window: f64, period: f64 },

    #[error("EmptyContour: alpha_{port} has uniform sign over the grid")]
    EmptyContour { port: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
