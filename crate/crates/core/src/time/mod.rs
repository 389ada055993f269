//! Time grids on `(0, τ)` and the weighted time norms `‖t ↦ t^α g(t)‖_{L^p}`.
//!
//! The node `t_0 = 0` is stored for reconstruction only; every norm skips it.

mod grid;
mod norm;
mod trajectory;

pub use grid::{TimeGrid, TimeGridSpec};
pub use norm::{dyadic_tail, weighted_time_norm, WeightedTimeNorm};
pub use trajectory::{read_trajectory, trajectory_norm, write_trajectory, Trajectory};
