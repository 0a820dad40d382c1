//! Maximum destination occupation and first-arrival transfer time.

use rayon::prelude::*;

use crate::asymptotics::predict;
use crate::dynamics::{time_grid, Propagator};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{decompose, default_method};
use crate::wire::{initial_excitation_state, WireParams};

/// Coarse samples refined by golden-section search, best first.
const REFINED_CANDIDATES: usize = 8;
const GOLDEN_MAX_ITER: usize = 60;
const GOLDEN_BRACKET: f64 = 1e-4;
/// `transfer_time` gives up below this destination occupation.
const MIN_TRANSFER: f64 = 0.1;

/// `max{P_{n+1}(t) : t ∈ [0, t_max]}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmaxResult<T> {
    pub n: usize,
    pub a: T,
    pub p_max: T,
    pub t_at_max: T,
    pub t_max: T,
    /// Best value seen on the coarse grid, before refinement.
    pub coarse_max: T,
    pub refined: bool,
}

/// `min(0.5, π/(20 λ̂))` with `λ̂` from the small-coupling prediction.
pub fn coarse_step<T: Real>(params: &WireParams<T>) -> T {
    let cap = T::lit(0.5);
    match predict(params) {
        Ok(p) if p.lambda_hat > T::zero() => cap.min(T::PI() / (T::lit(20.0) * p.lambda_hat)),
        _ => cap,
    }
}

/// Golden-section maximization of `f` on `[lo, hi]`.
pub fn golden_max<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let bracket = T::lit(GOLDEN_BRACKET);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_MAX_ITER {
        if hi - lo < bracket {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Destination occupation sampled on a uniform grid over `[0, t_max]`.
#[derive(Debug, Clone)]
pub struct EndScan<'a, T> {
    prop: &'a Propagator<T>,
    end: usize,
    pub t_max: T,
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<'a, T: Real> EndScan<'a, T> {
    pub fn new(prop: &'a Propagator<T>, t_max: T, dt: T) -> Result<Self> {
        let mut times = time_grid(t_max, dt)?;
        if *times.last().unwrap() < t_max {
            times.push(t_max);
        }
        let end = prop.dim() - 1;
        let values = times.par_iter().map(|&t| prop.probability(end, t)).collect();
        Ok(Self { prop, end, t_max, times, values })
    }

    fn p(&self, t: T) -> T {
        self.prop.probability(self.end, t)
    }

    /// Refines around sample `i` inside its neighbouring samples.
    fn refine(&self, i: usize) -> (T, T) {
        let lo = self.times[i.saturating_sub(1)];
        let hi = self.times[(i + 1).min(self.times.len() - 1)];
        let (t, p) = golden_max(lo, hi, |t| self.p(t));
        if p > self.values[i] {
            (t, p)
        } else {
            (self.times[i], self.values[i])
        }
    }

    fn is_local_max(&self, i: usize) -> bool {
        let v = &self.values;
        (i == 0 || v[i] >= v[i - 1]) && (i + 1 == v.len() || v[i] >= v[i + 1])
    }

    /// Global maximum: the best few coarse local maxima are each refined.
    pub fn maximum(&self, params: &WireParams<T>) -> PmaxResult<T> {
        let mut candidates: Vec<usize> = (0..self.values.len()).filter(|&i| self.is_local_max(i)).collect();
        candidates.sort_by(|&i, &j| self.values[j].partial_cmp(&self.values[i]).unwrap().then(i.cmp(&j)));
        candidates.truncate(REFINED_CANDIDATES);
        let best_coarse = candidates[0];
        let coarse_max = self.values[best_coarse];

        let (mut t_best, mut p_best) = (self.times[best_coarse], coarse_max);
        for &i in &candidates {
            let (t, p) = self.refine(i);
            if p > p_best {
                t_best = t;
                p_best = p;
            }
        }
        PmaxResult {
            n: params.n(),
            a: params.a(),
            p_max: p_best.min(T::one()),
            t_at_max: t_best,
            t_max: self.t_max,
            coarse_max,
            refined: true,
        }
    }

    /// Peak of the first lobe where `P_{n+1}` reaches half of `p_max`. The
    /// lobe ends once the occupation falls below a quarter of `p_max`, so
    /// small ripples on the rising edge do not count as arrivals.
    pub fn first_arrival(&self, p_max: T) -> Result<T> {
        if p_max < T::lit(MIN_TRANSFER) {
            return Err(Error::NoTransfer { threshold: MIN_TRANSFER, p_max: p_max.as_f64() });
        }
        let half = p_max / T::lit(2.0);
        let quarter = p_max / T::lit(4.0);
        let start = self.values.iter().position(|&v| v >= half).ok_or(Error::NoTransfer {
            threshold: half.as_f64(),
            p_max: p_max.as_f64(),
        })?;
        let stop = self.values[start..].iter().position(|&v| v < quarter).map_or(self.values.len(), |k| start + k);
        let peak = (start..stop).max_by(|&i, &j| self.values[i].partial_cmp(&self.values[j]).unwrap().then(j.cmp(&i)));
        Ok(self.refine(peak.unwrap()).0)
    }
}

fn propagator<T: Real>(params: &WireParams<T>) -> Result<Propagator<T>> {
    let decomp = decompose(params, default_method(params))?;
    Propagator::new(&decomp, &initial_excitation_state(params))
}

/// Coarse scan at [`coarse_step`] followed by golden-section refinement.
pub fn max_transfer<T: Real>(params: &WireParams<T>, t_max: T) -> Result<PmaxResult<T>> {
    let prop = propagator(params)?;
    let scan = EndScan::new(&prop, t_max, coarse_step(params))?;
    Ok(scan.maximum(params))
}

/// First-arrival transfer time `τ` within `[0, t_max]`.
pub fn transfer_time<T: Real>(params: &WireParams<T>, t_max: T) -> Result<T> {
    let prop = propagator(params)?;
    let scan = EndScan::new(&prop, t_max, coarse_step(params))?;
    let pm = scan.maximum(params);
    scan.first_arrival(pm.p_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (t, p) = golden_max(0.0, 3.0, |t: f64| 1.0 - (t - 1.234).powi(2));
        assert!((t - 1.234).abs() < 1e-4);
        assert!((p - 1.0).abs() < 1e-8);
    }

    #[test]
    fn three_site_closed_form() {
        let p = WireParams::new(1, 1.0f64).unwrap();
        let r = max_transfer(&p, 10.0).unwrap();
        assert!((r.p_max - 1.0).abs() < 1e-8);
        assert!((r.t_at_max - PI / 2f64.sqrt()).abs() < 1e-3);
        let tau = transfer_time(&p, 10.0).unwrap();
        assert!((tau - PI / 2f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn refinement_dominates_coarse() {
        for (n, a) in [(10usize, 0.8), (30, 1.0), (17, 0.3)] {
            let r = max_transfer(&WireParams::new(n, a).unwrap(), 300.0f64).unwrap();
            assert!(r.p_max >= r.coarse_max);
            assert!(r.t_at_max >= 0.0 && r.t_at_max <= 300.0);
        }
    }

    #[test]
    fn window_monotone() {
        let p = WireParams::new(12, 0.7f64).unwrap();
        let mut last = 0.0;
        for t_max in [5.0, 20.0, 50.0, 200.0, 800.0] {
            let r = max_transfer(&p, t_max).unwrap();
            assert!(r.p_max >= last - 1e-9, "{t_max}: {} < {last}", r.p_max);
            last = r.p_max;
        }
    }

    #[test]
    fn short_window_reports_no_transfer() {
        let p = WireParams::new(60, 0.01f64).unwrap();
        assert_eq!(transfer_time(&p, 10.0).unwrap_err().code(), "no-transfer");
    }

    #[test]
    fn coarse_step_caps() {
        assert_eq!(coarse_step(&WireParams::new(198, 0.01f64).unwrap()), 0.5);
        let s = coarse_step(&WireParams::new(30, 1.0f64).unwrap());
        assert!((s - PI / 20.0).abs() < 1e-15);
        assert_eq!(coarse_step(&WireParams::new(30, 0.0f64).unwrap()), 0.5);
    }
}
