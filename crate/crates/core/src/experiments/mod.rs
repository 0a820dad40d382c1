//! Transfer experiments: peak search, grid sweeps, scaling fits and the
//! figure tables.

pub mod figures;
pub mod fit;
pub mod peak;
pub mod sweep;
pub mod table;

pub use figures::{figure_data, Figure, FigureParams};
pub use fit::{fit_fidelity_scaling, fit_gap_scaling, least_squares, LinearFit, ScalingFit};
pub use peak::{coarse_step, max_transfer, transfer_time, PmaxResult};
pub use sweep::{analyze_point, sweep, sweep_with, SweepPoint, SweepResult, SweepRow};
pub use table::{format_sig, Cell, Table};
