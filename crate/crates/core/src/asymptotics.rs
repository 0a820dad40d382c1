//! Small-coupling predictions and the quantities they are compared against.
//!
//! For `a → 0` the source excitation lives on two eigenvectors (`±λ̂`) when
//! `n` is even and on three (`0, ±λ̂`) when `n` is odd, where `λ̂` is the
//! smallest positive eigenvalue. Leading order:
//!
//! | parity | `λ̂`      | `τ`       |
//! |--------|----------|-----------|
//! | even   | `a²`     | `π/(2λ̂)`  |
//! | odd    | `2a/√n`  | `π/λ̂`     |

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::EigenDecomposition;
use crate::wire::{WaveFunction, WireParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireParity {
    Even,
    Odd,
}

impl WireParity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            WireParity::Even
        } else {
            WireParity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WireParity::Even => "even",
            WireParity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPrediction<T> {
    pub parity: WireParity,
    pub lambda_hat: T,
    pub tau: T,
    /// `n / τ`.
    pub speed: T,
    /// `a √n`.
    pub delta: T,
    /// `a² n`, the scale of the fidelity loss.
    pub fidelity_loss_scale: T,
}

/// Smallest eigenvalue above `1e-12`, so the odd-`n` zero mode is skipped.
pub fn smallest_positive_eigenvalue<T: Real>(decomp: &EigenDecomposition<T>) -> Result<T> {
    let tol = T::tol(1e-12, 64.0);
    decomp
        .pairs()
        .iter()
        .map(|p| p.lambda)
        .filter(|&l| l > tol)
        .fold(None, |acc: Option<T>, l| Some(acc.map_or(l, |m| m.min(l))))
        .ok_or(Error::NoPositiveEigenvalue)
}

/// Leading-order small-`a` prediction. Meaningful for `a ≪ 1/√n`.
pub fn predict<T: Real>(params: &WireParams<T>) -> Result<AsymptoticPrediction<T>> {
    let a = params.a();
    if !(a > T::zero()) {
        return Err(Error::InvalidParams { n: params.n(), a: a.as_f64(), reason: "prediction needs a > 0" });
    }
    let n = T::from_count(params.n());
    let parity = WireParity::of(params.n());
    let (lambda_hat, tau) = match parity {
        WireParity::Even => {
            let l = a * a;
            (l, T::PI() / (T::lit(2.0) * l))
        }
        WireParity::Odd => {
            let l = T::lit(2.0) * a / n.sqrt();
            (l, T::PI() / l)
        }
    };
    Ok(AsymptoticPrediction {
        parity,
        lambda_hat,
        tau,
        speed: n / tau,
        delta: a * n.sqrt(),
        fidelity_loss_scale: a * a * n,
    })
}

/// Eigenvector populations `|⟨v|Ψ(0)⟩|²` with their eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Populations<T> {
    /// `(λ, population)` sorted by descending population.
    pub entries: Vec<(T, T)>,
    /// Sum over all eigenvectors.
    pub total: T,
}

impl<T: Real> Populations<T> {
    pub fn top(&self, k: usize) -> &[(T, T)] {
        &self.entries[..k.min(self.entries.len())]
    }

    pub fn top_sum(&self, k: usize) -> T {
        self.top(k).iter().map(|&(_, p)| p).sum()
    }
}

/// All populations, ordered by weight; the first `k` are the dominant ones.
pub fn eigen_populations<T: Real>(decomp: &EigenDecomposition<T>, psi0: &WaveFunction<T>) -> Result<Populations<T>> {
    if decomp.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch { expected: decomp.dim(), found: psi0.dim() });
    }
    let mut entries: Vec<(T, T)> = decomp
        .pairs()
        .iter()
        .map(|p| {
            let overlap = p.vector.iter().zip(psi0.amps()).map(|(&x, z)| z.scale(x)).sum::<num_complex::Complex<T>>();
            (p.lambda, overlap.norm_sqr())
        })
        .collect();
    let total = entries.iter().map(|&(_, w)| w).sum();
    entries.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.partial_cmp(&y.0).unwrap()));
    Ok(Populations { entries, total })
}

/// The `k` largest `(λ, population)` pairs, descending.
pub fn dominant_populations<T: Real>(
    decomp: &EigenDecomposition<T>,
    psi0: &WaveFunction<T>,
    k: usize,
) -> Result<Vec<(T, T)>> {
    if k > decomp.dim() {
        return Err(Error::DimensionMismatch { expected: decomp.dim(), found: k });
    }
    Ok(eigen_populations(decomp, psi0)?.top(k).to_vec())
}

/// Signs of the destination components of the three dominant odd-`n`
/// eigenvectors `x = v(λ̂)`, `y = v(−λ̂)`, `z = v(0)`, with every vector
/// normalized to `v_0 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignReport {
    pub x_end: i8,
    pub y_end: i8,
    pub z_end: i8,
}

impl SignReport {
    /// `z_{n+1}` has the sign opposite to both `x_{n+1}` and `y_{n+1}`.
    pub fn is_opposite(&self) -> bool {
        self.x_end == self.y_end && self.z_end == -self.x_end
    }
}

fn sign_of<T: Real>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

pub fn three_level_signs<T: Real>(decomp: &EigenDecomposition<T>) -> Result<SignReport> {
    let dim = decomp.dim();
    if dim % 2 == 0 {
        return Err(Error::NotApplicable("three-level structure needs an odd wire"));
    }
    let pairs = decomp.pairs();
    // sorted ascending with a single zero mode in the middle
    let mid = dim / 2;
    let end = |k: usize| {
        let v = &pairs[k].vector;
        let s = if v[0] < T::zero() { -T::one() } else { T::one() };
        sign_of(s * v[dim - 1])
    };
    Ok(SignReport { x_end: end(mid + 1), y_end: end(mid - 1), z_end: end(mid) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{decompose, Method};
    use crate::wire::initial_excitation_state;
    use std::f64::consts::PI;

    fn wp(n: usize, a: f64) -> WireParams<f64> {
        WireParams::new(n, a).unwrap()
    }

    fn decomp(n: usize, a: f64) -> EigenDecomposition<f64> {
        decompose(&wp(n, a), Method::Analytic).unwrap()
    }

    #[test]
    fn predictions_for_long_wires() {
        let odd = predict(&wp(199, 0.01)).unwrap();
        assert_eq!(odd.parity, WireParity::Odd);
        assert!((odd.lambda_hat - 0.02 / 199f64.sqrt()).abs() < 1e-15);
        assert!((odd.lambda_hat - 1.4177e-3).abs() < 1e-7);
        assert!((odd.tau - 2215.8).abs() < 0.1);

        let even = predict(&wp(198, 0.01)).unwrap();
        assert!((even.lambda_hat - 1e-4).abs() < 1e-18);
        assert!((even.tau - PI / 2e-4).abs() < 1e-9);

        let p = predict(&wp(100, 0.05)).unwrap();
        assert!((p.delta - 0.5).abs() < 1e-15);
        assert!((p.fidelity_loss_scale - 0.25).abs() < 1e-15);
    }

    #[test]
    fn speed_is_n_over_tau() {
        for (n, a) in [(199usize, 0.01), (198, 0.01), (51, 0.003)] {
            let p = predict(&wp(n, a)).unwrap();
            assert!((p.speed - n as f64 / p.tau).abs() < 1e-15);
            let expected = match p.parity {
                WireParity::Odd => 2.0 * p.delta / PI,
                WireParity::Even => 2.0 * p.delta * p.delta / PI,
            };
            assert!((p.speed - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_rejects_decoupled_ends() {
        assert!(predict(&wp(10, 0.0)).is_err());
    }

    #[test]
    fn smallest_positive_on_uniform_path() {
        let l = smallest_positive_eigenvalue(&decomp(2, 1.0)).unwrap();
        assert!((l - 2.0 * (2.0 * PI / 5.0).cos()).abs() < 1e-12);
    }

    #[test]
    fn smallest_positive_skips_zero_mode() {
        let l = smallest_positive_eigenvalue(&decomp(1, 1.0)).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_level_populations_even() {
        let p = wp(40, 0.01);
        let d = decompose(&p, Method::Analytic).unwrap();
        let lh = smallest_positive_eigenvalue(&d).unwrap();
        let top = dominant_populations(&d, &initial_excitation_state(&p), 2).unwrap();
        assert!(top.iter().all(|&(_, w)| (w - 0.5).abs() < 0.01));
        assert!(top.iter().all(|&(l, _)| (l.abs() - lh).abs() < 1e-15));
        assert!(top[0].1 + top[1].1 >= 0.99);
    }

    #[test]
    fn three_level_populations_odd() {
        let p = wp(41, 0.01);
        let d = decompose(&p, Method::Analytic).unwrap();
        let top = dominant_populations(&d, &initial_excitation_state(&p), 3).unwrap();
        assert_eq!(top[0].0, 0.0);
        assert!((top[0].1 - 0.5).abs() < 0.01);
        assert!((top[1].1 - 0.25).abs() < 0.01 && (top[2].1 - 0.25).abs() < 0.01);
        assert!(top.iter().map(|&(_, w)| w).sum::<f64>() >= 0.99);
    }

    #[test]
    fn populations_are_complete() {
        for (n, a) in [(5usize, 1.0), (30, 0.6), (77, 0.05)] {
            let p = wp(n, a);
            let d = decompose(&p, Method::Oracle).unwrap();
            let all = dominant_populations(&d, &initial_excitation_state(&p), n + 2).unwrap();
            assert!((all.iter().map(|&(_, w)| w).sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(all.windows(2).all(|w| w[0].1 >= w[1].1));
        }
    }

    #[test]
    fn sign_pattern_odd() {
        for (n, a) in [(9usize, 0.05), (199, 0.01)] {
            let r = three_level_signs(&decomp(n, a)).unwrap();
            assert!(r.is_opposite(), "n={n}: {r:?}");
        }
        let oracle = decompose(&wp(9, 0.05), Method::Oracle).unwrap();
        assert!(three_level_signs(&oracle).unwrap().is_opposite());
    }

    #[test]
    fn sign_pattern_even_not_applicable() {
        assert_eq!(three_level_signs(&decomp(198, 0.01)).unwrap_err().code(), "not-applicable");
    }
}
