//! Least-squares power-law fits in log-log coordinates.

use crate::asymptotics::{smallest_positive_eigenvalue, WireParity};
use crate::error::{Error, Result};
use crate::experiments::sweep::SweepResult;
use crate::scalar::Real;
use crate::spectral::{decompose, Method};
use crate::wire::WireParams;

pub const MIN_FIT_POINTS: usize = 4;
/// Points with `a √n` above this are outside the small-coupling regime.
pub const SMALL_COUPLING_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, found: n.min(ys.len()) });
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(LinearFit { slope, intercept, r_squared })
}

/// A fitted exponent: `log y = slope·log x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit<T> {
    pub parity: WireParity,
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub points_used: usize,
}

impl<T: Real> ScalingFit<T> {
    /// `exp(intercept)`, the coefficient of the power law.
    pub fn prefactor(&self) -> T {
        self.intercept.exp()
    }
}

fn common_parity(ns: impl Iterator<Item = usize>) -> Result<WireParity> {
    let mut parity = None;
    for n in ns {
        let p = WireParity::of(n);
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => return Err(Error::NotApplicable("fit mixes even and odd wires")),
            _ => {}
        }
    }
    parity.ok_or(Error::InsufficientPoints { needed: MIN_FIT_POINTS, found: 0 })
}

fn to_fit<T: Real>(parity: WireParity, xs: &[f64], ys: &[f64]) -> Result<ScalingFit<T>> {
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints { needed: MIN_FIT_POINTS, found: xs.len() });
    }
    let f = least_squares(xs, ys)?;
    Ok(ScalingFit {
        parity,
        slope: T::lit(f.slope),
        intercept: T::lit(f.intercept),
        r_squared: T::lit(f.r_squared),
        points_used: xs.len(),
    })
}

/// Fits `log(1 − P_max)` against `log(a² n)` over the successful sweep rows
/// with `a √n ≤ 0.3`.
pub fn fit_fidelity_scaling<T: Real>(sweep: &SweepResult<T>) -> Result<ScalingFit<T>> {
    let usable: Vec<(usize, f64, f64)> = sweep
        .rows
        .iter()
        .filter_map(|row| row.point.as_ref().ok().map(|pt| (row.n, row.a.as_f64(), pt.pmax.p_max.as_f64())))
        .filter(|&(n, a, _)| a > 0.0 && a * (n as f64).sqrt() <= SMALL_COUPLING_LIMIT)
        .collect();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints { needed: MIN_FIT_POINTS, found: usable.len() });
    }
    let parity = common_parity(usable.iter().map(|u| u.0))?;
    let kept: Vec<_> = usable.iter().filter(|u| 1.0 - u.2 > 1e-12).collect();
    if kept.is_empty() {
        return Err(Error::DegenerateFit("every point transfers perfectly"));
    }
    let xs: Vec<f64> = kept.iter().map(|&&(n, a, _)| (a * a * n as f64).ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|&&(_, _, p)| (1.0 - p).ln()).collect();
    to_fit(parity, &xs, &ys)
}

/// Fits `log λ̂` against `log a` at fixed `n`.
pub fn fit_gap_scaling<T: Real>(n: usize, a_list: &[T], method: Method) -> Result<ScalingFit<T>> {
    let parity = WireParity::of(n);
    let mut xs = Vec::with_capacity(a_list.len());
    let mut ys = Vec::with_capacity(a_list.len());
    for &a in a_list {
        let params = WireParams::new(n, a)?;
        let lambda_hat = smallest_positive_eigenvalue(&decompose(&params, method)?)?;
        xs.push(a.as_f64().ln());
        ys.push(lambda_hat.as_f64().ln());
    }
    to_fit(parity, &xs, &ys)
}
