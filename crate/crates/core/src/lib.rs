//! Nonlinear coupled-mode scattering by a self-oscillating cavity mode.
//!
//! A single Stuart–Landau mode coupled to a two-port waveguide produces an
//! amplitude-dependent scattering matrix that can amplify incident waves
//! (negative absorption). The crate builds the port coupling from a target
//! and background scattering matrix, solves the synchronized forced
//! response, assembles the scattering matrix and absorption coefficients,
//! sweeps them over frequency and forcing amplitude, and checks the analytic
//! solution against direct integration of the modal equation.

pub mod cli;
pub mod contour;
pub mod cubic;
pub mod error;
pub mod forced_response;
pub mod model;
pub mod scattering;
pub mod sweep;
pub mod timedomain;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

pub use error::{Error, Result};
pub use forced_response::{BranchPolicy, ForcedResponse, ForcingPoint, Port};
pub use model::{build_coupling, Coupling, ModelParams};
pub use scattering::{scattering_matrix, ScatteringResult};

/// Complex 2×2 matrix.
pub type CMat2 = Matrix2<Complex64>;
/// Complex 2-vector of port wave amplitudes.
pub type CVec2 = Vector2<Complex64>;
