//! Fixtures shared by the kernel benchmarks.

use dgbo_core::{Field, Grid};

/// `exp(-x^2/2)` plus a smaller off-center bump: smooth, even-free data.
pub fn smooth_field(n_points: usize, length: f64) -> Field {
    let grid = Grid::new(n_points, length).expect("benchmark grid");
    Field::from_fn(&grid, |x| {
        (-0.5 * x * x).exp() + 0.3 * (-(x - 3.0).powi(2)).exp()
    })
    .expect("finite samples")
}
