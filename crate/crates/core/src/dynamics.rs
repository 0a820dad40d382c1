//! Spectral time propagation and the observables built on it.
//!
//! `Ψ(t) = Σ_k e^{−iλ_k t} ⟨v_k|Ψ(0)⟩ |v_k⟩`. The eigenbasis coefficients are
//! computed once; every later query is a phase rotation plus a synthesis,
//! so arbitrary `t` carries no integration error.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{decompose, default_method, EigenDecomposition};
use crate::wire::{initial_excitation_state, WaveFunction, WireParams};

/// Precomputed eigenbasis expansion of an initial state.
#[derive(Debug, Clone)]
pub struct Propagator<T> {
    lambdas: Vec<T>,
    /// `vectors[k][p] = ⟨p|v_k⟩`
    vectors: Vec<Vec<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(decomp: &EigenDecomposition<T>, psi0: &WaveFunction<T>) -> Result<Self> {
        if decomp.dim() != psi0.dim() {
            return Err(Error::DimensionMismatch { expected: decomp.dim(), found: psi0.dim() });
        }
        let lambdas = decomp.eigenvalues();
        let vectors: Vec<Vec<T>> = decomp.pairs().iter().map(|p| p.vector.clone()).collect();
        let coeffs = vectors
            .iter()
            .map(|v| v.iter().zip(psi0.amps()).map(|(&x, z)| z.scale(x)).sum())
            .collect();
        Ok(Self { lambdas, vectors, coeffs })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.lambdas
    }

    /// `|⟨v_k|Ψ(0)⟩|²` in eigenvalue order.
    pub fn populations(&self) -> Vec<T> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    fn phased(&self, t: T) -> Vec<Complex<T>> {
        self.lambdas.iter().zip(&self.coeffs).map(|(&l, &c)| c * Complex::from_polar(T::one(), -l * t)).collect()
    }

    /// `⟨site|Ψ(t)⟩` in `O(dim)`.
    pub fn amplitude(&self, site: usize, t: T) -> Complex<T> {
        self.lambdas
            .iter()
            .zip(&self.coeffs)
            .zip(&self.vectors)
            .map(|((&l, &c), v)| (c * Complex::from_polar(T::one(), -l * t)).scale(v[site]))
            .sum()
    }

    pub fn probability(&self, site: usize, t: T) -> T {
        self.amplitude(site, t).norm_sqr()
    }

    /// The full state at time `t`, `O(dim²)`.
    pub fn state(&self, t: T) -> WaveFunction<T> {
        let phased = self.phased(t);
        let mut amps = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        for (c, v) in phased.iter().zip(&self.vectors) {
            for (a, &x) in amps.iter_mut().zip(v) {
                *a = *a + c.scale(x);
            }
        }
        WaveFunction::from_amps_unchecked(amps)
    }
}

/// `Ψ(t)` from `Ψ(0) = psi0`. `t = 0` returns `psi0` unchanged.
pub fn evolve<T: Real>(decomp: &EigenDecomposition<T>, psi0: &WaveFunction<T>, t: T) -> Result<WaveFunction<T>> {
    let prop = Propagator::new(decomp, psi0)?;
    if t == T::zero() {
        return Ok(psi0.clone());
    }
    Ok(prop.state(t))
}

/// Site occupations `P_j(t) = |⟨j|Ψ(t)⟩|²` and the wire total
/// `P_net = Σ_{j=1..n} P_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySnapshot<T> {
    pub t: T,
    pub p_site: Vec<T>,
    pub p_net: T,
}

impl<T: Real> ProbabilitySnapshot<T> {
    pub fn source(&self) -> T {
        self.p_site[0]
    }

    pub fn destination(&self) -> T {
        self.p_site[self.p_site.len() - 1]
    }

    pub fn total(&self) -> T {
        self.p_site.iter().copied().sum()
    }
}

pub fn site_probabilities<T: Real>(psi: &WaveFunction<T>, t: T) -> ProbabilitySnapshot<T> {
    let p_site: Vec<T> = psi.amps().iter().map(|z| z.norm_sqr()).collect();
    let d = p_site.len();
    let p_net = if d > 2 { p_site[1..d - 1].iter().copied().sum() } else { T::zero() };
    ProbabilitySnapshot { t, p_site, p_net }
}

/// Source, destination and wire occupations sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub times: Vec<T>,
    pub p0: Vec<T>,
    pub p_end: Vec<T>,
    pub p_net: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the largest destination occupation.
    pub fn argmax_end(&self) -> Option<usize> {
        (0..self.len()).max_by(|&i, &j| self.p_end[i].partial_cmp(&self.p_end[j]).unwrap())
    }
}

/// `0, dt, 2dt, …` up to and including `t_max` (within rounding).
pub fn time_grid<T: Real>(t_max: T, dt: T) -> Result<Vec<T>> {
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(Error::InvalidWindow("t_max must be positive"));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidWindow("dt must be positive"));
    }
    let steps = (t_max / dt * (T::one() + T::tol(1e-12, 8.0))).floor().to_usize().unwrap_or(0);
    Ok((0..=steps).map(|k| T::from_count(k) * dt).collect())
}

/// Full snapshots at the given times; parallel over `times`.
pub fn snapshots<T: Real>(prop: &Propagator<T>, times: &[T]) -> Vec<ProbabilitySnapshot<T>> {
    times.par_iter().map(|&t| site_probabilities(&prop.state(t), t)).collect()
}

/// Samples `P_0`, `P_{n+1}` and `P_net` from one precomputed propagator.
pub fn series_from<T: Real>(prop: &Propagator<T>, times: &[T]) -> TimeSeries<T> {
    let snaps = snapshots(prop, times);
    TimeSeries {
        times: times.to_vec(),
        p0: snaps.iter().map(|s| s.source()).collect(),
        p_end: snaps.iter().map(|s| s.destination()).collect(),
        p_net: snaps.iter().map(|s| s.p_net).collect(),
    }
}

/// Evolution of the source excitation on `[0, t_max]` with step `dt`.
pub fn transfer_series<T: Real>(params: &WireParams<T>, t_max: T, dt: T) -> Result<TimeSeries<T>> {
    let times = time_grid(t_max, dt)?;
    let decomp = decompose(params, default_method(params))?;
    let prop = Propagator::new(&decomp, &initial_excitation_state(params))?;
    Ok(series_from(&prop, &times))
}

/// Qubit-averaged transfer fidelity `1/3 + (1 + F)²/6`.
pub fn average_fidelity<T: Real>(f: T) -> Result<T> {
    let slack = T::tol(1e-12, 8.0);
    if !(f >= -slack && f <= T::one() + slack) {
        return Err(Error::Domain { value: f.as_f64() });
    }
    let f = f.max(T::zero()).min(T::one());
    let one_plus = T::one() + f;
    Ok(T::one() / T::lit(3.0) + one_plus * one_plus / T::lit(6.0))
}

/// Squared overlap `|(ψ_0 + ψ_{n+1})/√2|²` with `(|01⟩ + |10⟩)/√2`.
pub fn bell_overlap<T: Real>(psi: &WaveFunction<T>) -> T {
    let a = psi.amps();
    ((a[0] + a[a.len() - 1]) / T::SQRT_2()).norm_sqr()
}

/// Overlap with the source/destination Bell state, maximized over a local
/// phase on the destination qubit: `(|ψ_0| + |ψ_{n+1}|)² / 2`. Wire
/// amplitude counts as loss.
pub fn bell_fidelity<T: Real>(psi: &WaveFunction<T>) -> T {
    let a = psi.amps();
    let s = a[0].norm() + a[a.len() - 1].norm();
    s * s / T::lit(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{analytic_eigendecomposition, oracle_eigendecomposition, Method};
    use crate::wire::build_hamiltonian;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn setup(n: usize, a: f64) -> (WireParams<f64>, EigenDecomposition<f64>, WaveFunction<f64>) {
        let p = WireParams::new(n, a).unwrap();
        let d = decompose(&p, Method::Analytic).unwrap();
        let psi = initial_excitation_state(&p);
        (p, d, psi)
    }

    #[test]
    fn zero_time_is_identity() {
        let (_, d, psi) = setup(6, 0.4);
        assert_eq!(evolve(&d, &psi, 0.0).unwrap(), psi);
        let prop = Propagator::new(&d, &psi).unwrap();
        let s = prop.state(0.0);
        for (x, y) in s.amps().iter().zip(psi.amps()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn three_site_perfect_transfer() {
        let (_, d, psi) = setup(1, 1.0);
        let t = PI / 2f64.sqrt();
        let out = evolve(&d, &psi, t).unwrap();
        assert!((out.amps()[2].norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn time_reversal() {
        let (_, d, psi) = setup(9, 0.7);
        let fwd = evolve(&d, &psi, 13.7).unwrap();
        let back = evolve(&d, &fwd, -13.7).unwrap();
        for (x, y) in back.amps().iter().zip(psi.amps()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (_, d, _) = setup(3, 0.5);
        let psi = WaveFunction::basis(4, 0);
        assert_eq!(evolve(&d, &psi, 1.0).unwrap_err().code(), "dimension-mismatch");
    }

    #[test]
    fn initial_snapshot() {
        let (_, _, psi) = setup(4, 0.5);
        let s = site_probabilities(&psi, 0.0);
        assert_eq!(s.source(), 1.0);
        assert_eq!(s.p_net, 0.0);
    }

    #[test]
    fn average_fidelity_values() {
        assert_eq!(average_fidelity(1.0).unwrap(), 1.0);
        assert!((average_fidelity(0.0f64).unwrap() - 0.5).abs() < 1e-15);
        assert!((average_fidelity(0.5f64).unwrap() - 0.708_333_333_333_333_3).abs() < 1e-15);
        assert_eq!(average_fidelity(1.1).unwrap_err().code(), "domain-error");
        assert!(average_fidelity(-0.01).is_err());
        assert!(average_fidelity(1.0 + 1e-13).is_ok());
    }

    #[test]
    fn bell_measures() {
        let psi = WaveFunction::<f64>::basis(5, 0);
        assert!((bell_fidelity(&psi) - 0.5).abs() < 1e-15);
        assert!((bell_overlap(&psi) - 0.5).abs() < 1e-15);
        let s = Complex::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex::new(0.0, 0.0);
        let bell = WaveFunction::new(vec![s, z, z, s]).unwrap();
        assert!((bell_fidelity(&bell) - 1.0).abs() < 1e-15);
        assert!((bell_overlap(&bell) - 1.0).abs() < 1e-15);
        // relative phase −i: maximally entangled, literal overlap only 1/2
        let twisted = WaveFunction::new(vec![s, z, z, Complex::new(0.0, -FRAC_1_SQRT_2)]).unwrap();
        assert!((bell_fidelity(&twisted) - 1.0).abs() < 1e-15);
        assert!((bell_overlap(&twisted) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn time_grid_includes_endpoint() {
        let g = time_grid(1.0f64, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-15);
        assert!(time_grid(0.0, 0.1).is_err());
        assert!(time_grid(1.0, -0.1).is_err());
    }

    #[test]
    fn series_conserves_probability() {
        let ts = transfer_series(&WireParams::new(12, 0.5f64).unwrap(), 50.0, 0.25).unwrap();
        for i in 0..ts.len() {
            assert!((ts.p0[i] + ts.p_end[i] + ts.p_net[i] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_and_oracle_dynamics_agree() {
        let p = WireParams::new(20, 0.6).unwrap();
        let psi = initial_excitation_state(&p);
        let pa = Propagator::new(&analytic_eigendecomposition(&p).unwrap(), &psi).unwrap();
        let po = Propagator::new(&oracle_eigendecomposition(&build_hamiltonian(&p)).unwrap(), &psi).unwrap();
        for k in 0..500 {
            let t = k as f64 * 0.7;
            assert!((pa.probability(21, t) - po.probability(21, t)).abs() < 1e-7);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn unitarity_and_composition(n in 1usize..40, a in 0.01f64..1.4, t1 in -200.0f64..200.0, t2 in -200.0f64..200.0) {
            let (_, d, psi) = setup(n, a);
            let prop = Propagator::new(&d, &psi).unwrap();
            let s1 = prop.state(t1);
            prop_assert!((s1.norm() - 1.0).abs() < 1e-12);
            let direct = prop.state(t1 + t2);
            let stepped = evolve(&d, &s1, t2).unwrap();
            for (x, y) in direct.amps().iter().zip(stepped.amps()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
        }

        #[test]
        fn mirror_symmetry(n in 1usize..30, a in 0.05f64..1.4, t in 0.0f64..300.0) {
            let (p, d, psi) = setup(n, a);
            let mirrored = WaveFunction::basis(p.dim(), p.end());
            let fwd = site_probabilities(&evolve(&d, &psi, t).unwrap(), t);
            let rev = site_probabilities(&evolve(&d, &mirrored, t).unwrap(), t);
            for j in 0..p.dim() {
                prop_assert!((fwd.p_site[j] - rev.p_site[p.end() - j]).abs() < 1e-10);
            }
        }
    }
}
