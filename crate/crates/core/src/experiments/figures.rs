//! Data tables behind the five transfer figures.
//!
//! | figure     | columns                      | defaults                                  |
//! |------------|------------------------------|-------------------------------------------|
//! | fig1, fig2 | `t,a,Pend`                   | n = 30, a ∈ (0, 1.5] (150 pts), t ∈ [0, 150], dt = 0.1 |
//! | fig3       | `a,Pmax`                     | n = 30, a ∈ (0, 1.5] (150 pts), t ∈ [0, 20000] |
//! | fig4       | `a,lambda,population`        | n = 30, a ∈ (0, 1.5] (150 pts)            |
//! | fig5       | `n,t,P0,Pend,Pnet`           | n ∈ {198, 199}, a = 0.01, t ∈ [0, 20000], dt = 1 |

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::asymptotics::eigen_populations;
use crate::dynamics::{series_from, time_grid, Propagator};
use crate::error::{Error, Result};
use crate::experiments::peak::max_transfer;
use crate::experiments::table::{Cell, Table};
use crate::spectral::{decompose, default_method};
use crate::wire::{initial_excitation_state, WireParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig1" | "1" => Ok(Figure::Fig1),
            "fig2" | "2" => Ok(Figure::Fig2),
            "fig3" | "3" => Ok(Figure::Fig3),
            "fig4" | "4" => Ok(Figure::Fig4),
            "fig5" | "5" => Ok(Figure::Fig5),
            _ => Err(Error::UnknownFigure(s.to_string())),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        };
        f.write_str(s)
    }
}

/// Overrides for a figure; `None` falls back to the figure default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureParams {
    pub n_list: Option<Vec<usize>>,
    pub a: Option<f64>,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub a_steps: Option<usize>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
}

/// Fully resolved settings for one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedFigure {
    pub figure: Figure,
    pub n_list: Vec<usize>,
    pub a_values: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
}

const DEFAULT_A_MAX: f64 = 1.5;
const DEFAULT_A_STEPS: usize = 150;

/// `steps` points ending at `a_max`; starts at `a_max/steps` when `a_min`
/// is not given, so the grid covers `(0, a_max]`.
pub fn a_grid(a_min: Option<f64>, a_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    match a_min {
        Some(lo) if steps > 1 => (0..steps).map(|k| lo + (a_max - lo) * k as f64 / (steps - 1) as f64).collect(),
        Some(lo) => vec![lo],
        None => (1..=steps).map(|k| a_max * k as f64 / steps as f64).collect(),
    }
}

impl FigureParams {
    pub fn resolve(&self, figure: Figure) -> ResolvedFigure {
        let grid = || {
            a_grid(self.a_min, self.a_max.unwrap_or(DEFAULT_A_MAX), self.a_steps.unwrap_or(DEFAULT_A_STEPS))
        };
        let n30 = || self.n_list.clone().unwrap_or_else(|| vec![30]);
        let (n_list, a_values, t_max, dt) = match figure {
            Figure::Fig1 | Figure::Fig2 => (n30(), grid(), self.t_max.unwrap_or(150.0), self.dt.unwrap_or(0.1)),
            Figure::Fig3 => (n30(), grid(), self.t_max.unwrap_or(20000.0), self.dt.unwrap_or(0.0)),
            Figure::Fig4 => (n30(), grid(), 0.0, 0.0),
            Figure::Fig5 => (
                self.n_list.clone().unwrap_or_else(|| vec![198, 199]),
                vec![self.a.unwrap_or(0.01)],
                self.t_max.unwrap_or(20000.0),
                self.dt.unwrap_or(1.0),
            ),
        };
        let a_values = match (figure, self.a) {
            (Figure::Fig5, _) | (_, None) => a_values,
            (_, Some(a)) => vec![a],
        };
        ResolvedFigure { figure, n_list, a_values, t_max, dt }
    }
}

fn propagator(n: usize, a: f64) -> Result<(WireParams<f64>, Propagator<f64>)> {
    let p = WireParams::new(n, a)?;
    let d = decompose(&p, default_method(&p))?;
    let prop = Propagator::new(&d, &initial_excitation_state(&p))?;
    Ok((p, prop))
}

/// The table behind `figure`.
pub fn figure_data(figure: Figure, params: &FigureParams) -> Result<Table> {
    let r = params.resolve(figure);
    let mut table = match figure {
        Figure::Fig1 | Figure::Fig2 => end_occupation_surface(&r)?,
        Figure::Fig3 => pmax_curve(&r)?,
        Figure::Fig4 => populations(&r)?,
        Figure::Fig5 => rabi_series(&r)?,
    };
    table.comments.insert(
        0,
        format!(
            "figure={} n_list={:?} a_points={} a_first={} a_last={} t_max={} dt={}",
            figure,
            r.n_list,
            r.a_values.len(),
            r.a_values.first().copied().unwrap_or(f64::NAN),
            r.a_values.last().copied().unwrap_or(f64::NAN),
            r.t_max,
            r.dt
        ),
    );
    Ok(table)
}

fn end_occupation_surface(r: &ResolvedFigure) -> Result<Table> {
    let times = time_grid(r.t_max, r.dt)?;
    let n = r.n_list[0];
    let blocks = r
        .a_values
        .par_iter()
        .map(|&a| {
            let (p, prop) = propagator(n, a)?;
            Ok(times.iter().map(|&t| [t, a, prop.probability(p.end(), t)]).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["t", "a", "Pend"]);
    for row in blocks.into_iter().flatten() {
        table.push_nums(row);
    }
    Ok(table)
}

fn pmax_curve(r: &ResolvedFigure) -> Result<Table> {
    let n = r.n_list[0];
    let rows = r
        .a_values
        .par_iter()
        .map(|&a| Ok([a, max_transfer(&WireParams::new(n, a)?, r.t_max)?.p_max]))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["a", "Pmax"]);
    rows.into_iter().for_each(|row| table.push_nums(row));
    Ok(table)
}

fn populations(r: &ResolvedFigure) -> Result<Table> {
    let n = r.n_list[0];
    let blocks = r
        .a_values
        .par_iter()
        .map(|&a| {
            let p = WireParams::new(n, a)?;
            let d = decompose(&p, default_method(&p))?;
            let mut pops = eigen_populations(&d, &initial_excitation_state(&p))?.entries;
            pops.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            Ok(pops.into_iter().map(|(l, w)| [a, l, w]).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(["a", "lambda", "population"]);
    for row in blocks.into_iter().flatten() {
        table.push_nums(row);
    }
    Ok(table)
}

fn rabi_series(r: &ResolvedFigure) -> Result<Table> {
    let times = time_grid(r.t_max, r.dt)?;
    let a = r.a_values[0];
    let mut table = Table::new(["n", "t", "P0", "Pend", "Pnet"]);
    for &n in &r.n_list {
        let (_, prop) = propagator(n, a)?;
        let s = series_from(&prop, &times);
        for i in 0..s.len() {
            table.push(vec![
                Cell::Int(n as i64),
                Cell::Num(s.times[i]),
                Cell::Num(s.p0[i]),
                Cell::Num(s.p_end[i]),
                Cell::Num(s.p_net[i]),
            ]);
        }
    }
    Ok(table)
}
