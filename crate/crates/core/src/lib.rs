//! Pseudo-spectral toolkit for the dispersion generalized Benjamin-Ono
//! equation
//!
//! ```text
//! u_t - D^beta u_x + (u^{k+1})_x = 0,    D^beta = |xi|^beta,  1 <= beta <= 2,
//! ```
//!
//! on a large periodic box: ground states of `D^beta Q + Q = Q^{k+1}` by
//! Petviashvili iteration, conserved quantities and the sharp
//! Gagliardo-Nirenberg constant, two independent time integrators, and the
//! mass/energy threshold that separates data with a uniform a-priori bound in
//! the supercritical regime `k > 2 beta`.

pub mod checks;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod ground_state;
pub mod io;
pub mod params;
pub mod spectral;
pub mod threshold;

pub use error::{Error, Result};
pub use params::{ModelParams, Regime};
pub use spectral::{Complex64, Field, Grid};
