//! Grid sweeps over `(n, a)`.

use rayon::prelude::*;

use crate::asymptotics::smallest_positive_eigenvalue;
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::experiments::peak::{coarse_step, EndScan, PmaxResult};
use crate::experiments::table::{Cell, Table};
use crate::scalar::Real;
use crate::spectral::{decompose, default_method};
use crate::wire::{initial_excitation_state, WireParams};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub pmax: PmaxResult<T>,
    pub lambda_hat: T,
    /// First-arrival time; `None` when nothing arrives in the window.
    pub tau: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub n: usize,
    pub a: T,
    pub point: Result<SweepPoint<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub grid: Vec<(usize, T)>,
    pub rows: Vec<SweepRow<T>>,
}

/// One decomposition and one coarse scan serve `P_max`, `λ̂` and `τ`.
pub fn analyze_point<T: Real>(params: &WireParams<T>, t_max: T) -> Result<SweepPoint<T>> {
    let decomp = decompose(params, default_method(params))?;
    let lambda_hat = smallest_positive_eigenvalue(&decomp)?;
    let prop = Propagator::new(&decomp, &initial_excitation_state(params))?;
    let scan = EndScan::new(&prop, t_max, coarse_step(params))?;
    let pmax = scan.maximum(params);
    let tau = match scan.first_arrival(pmax.p_max) {
        Ok(t) => Some(t),
        Err(Error::NoTransfer { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(SweepPoint { pmax, lambda_hat, tau })
}

/// Every `(n, a)` of `n_list × a_list` with a common window `[0, t_max]`.
pub fn sweep<T: Real>(n_list: &[usize], a_list: &[T], t_max: T) -> Result<SweepResult<T>> {
    if n_list.is_empty() || a_list.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, found: 0 });
    }
    let grid = n_list.iter().flat_map(|&n| a_list.iter().map(move |&a| (n, a))).collect();
    sweep_with(grid, |_| t_max)
}

/// Sweeps an explicit grid; `window` picks `t_max` per point. Rows come back
/// sorted by `(n, a)` whatever the execution order; failures are kept
/// in-row.
pub fn sweep_with<T: Real>(
    mut grid: Vec<(usize, T)>,
    window: impl Fn(&WireParams<T>) -> T + Sync,
) -> Result<SweepResult<T>> {
    if grid.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, found: 0 });
    }
    grid.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal)));
    let rows = grid
        .par_iter()
        .map(|&(n, a)| {
            let point = WireParams::new(n, a).and_then(|p| analyze_point(&p, window(&p)));
            SweepRow { n, a, point }
        })
        .collect();
    Ok(SweepResult { grid, rows })
}

impl<T: Real> SweepResult<T> {
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(["n", "a", "p_max", "t_at_max", "t_max", "lambda_hat", "tau", "error"]);
        for row in &self.rows {
            let mut cells = vec![Cell::Int(row.n as i64), Cell::Num(row.a.as_f64())];
            match &row.point {
                Ok(pt) => cells.extend([
                    Cell::Num(pt.pmax.p_max.as_f64()),
                    Cell::Num(pt.pmax.t_at_max.as_f64()),
                    Cell::Num(pt.pmax.t_max.as_f64()),
                    Cell::Num(pt.lambda_hat.as_f64()),
                    pt.tau.map_or(Cell::Empty, |t| Cell::Num(t.as_f64())),
                    Cell::Empty,
                ]),
                Err(e) => cells.extend([
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Text(e.code().to_string()),
                ]),
            }
            table.push(cells);
        }
        table
    }
}
