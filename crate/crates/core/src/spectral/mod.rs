//! Eigendecomposition of `H(a)`.
//!
//! Two independent routes produce the same [`EigenDecomposition`]:
//! [`analytic`] solves the closed-form characteristic equation for the
//! eigen-angles and writes the eigenvectors down explicitly, and [`oracle`]
//! runs an implicit-shift QL iteration on the tridiagonal matrix. The
//! analytic route only covers `0 < a² < 2`; the oracle works for every `a`.

pub mod analytic;
pub mod oracle;

pub use analytic::{
    analytic_eigendecomposition, characteristic_function, eigenvector_from_root, rhs_constant, solve_gammas,
};
pub use oracle::oracle_eigendecomposition;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::wire::{build_hamiltonian, TridiagonalHamiltonian, WireParams};

/// The branch label `μ = ±1`; also the sign relating `v_{n+1}` to `v_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    #[inline]
    pub fn sign<T: Real>(self) -> T {
        match self {
            Parity::Plus => T::one(),
            Parity::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }

    /// `Plus` for nonnegative `x`.
    #[inline]
    pub fn of<T: Real>(x: T) -> Self {
        if x < T::zero() {
            Parity::Minus
        } else {
            Parity::Plus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Oracle => "oracle",
        }
    }
}

/// A solution `γ ∈ (0, π)` of the characteristic equation on branch `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRoot<T> {
    pub gamma: T,
    pub mu: Parity,
    /// `2 cos γ`.
    pub lambda: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair<T> {
    pub lambda: T,
    /// Unit vector over sites `0..=n+1`, sign fixed so that `vector[0] > 0`.
    pub vector: Vec<T>,
    pub parity: Parity,
    /// Eigen-angle when the pair came from the analytic route.
    pub gamma: Option<T>,
}

impl<T: Real> Eigenpair<T> {
    /// `max_i |(H v − λ v)_i|`.
    pub fn residual(&self, h: &TridiagonalHamiltonian<T>) -> T {
        h.apply(&self.vector)
            .iter()
            .zip(&self.vector)
            .map(|(&hv, &v)| (hv - self.lambda * v).abs())
            .fold(T::zero(), T::max)
    }

    /// Eigen-angle, recovered from `λ` when not stored. `None` outside the band.
    pub fn gamma_or_acos(&self) -> Option<T> {
        self.gamma.or_else(|| {
            let half = self.lambda / T::lit(2.0);
            (half.abs() <= T::one()).then(|| half.acos())
        })
    }
}

/// Flips `v` so that its first entry is positive; falls back to the first
/// entry above `tol` when `v[0]` vanishes.
pub(crate) fn fix_sign<T: Real>(v: &mut [T]) {
    let tol = T::tol(1e-12, 64.0);
    let pivot = if v[0].abs() > tol { Some(v[0]) } else { v.iter().copied().find(|x| x.abs() > tol) };
    if let Some(p) = pivot {
        if p < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// All `n+2` eigenpairs, sorted ascending by eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pairs: Vec<Eigenpair<T>>,
    method: Method,
}

impl<T: Real> EigenDecomposition<T> {
    pub(crate) fn new(mut pairs: Vec<Eigenpair<T>>, method: Method) -> Self {
        pairs.sort_by(|x, y| x.lambda.partial_cmp(&y.lambda).expect("finite eigenvalues"));
        Self { pairs, method }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn pairs(&self) -> &[Eigenpair<T>] {
        &self.pairs
    }

    #[inline]
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// `max_{ij} |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for (i, p) in self.pairs.iter().enumerate() {
            for (j, q) in self.pairs.iter().enumerate().skip(i) {
                let dot: T = p.vector.iter().zip(&q.vector).map(|(&x, &y)| x * y).sum();
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Max-entry error of `V diag(λ) Vᵀ − H`.
    pub fn reconstruction_error(&self, h: &TridiagonalHamiltonian<T>) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in i..d {
                let entry: T = self.pairs.iter().map(|p| p.lambda * p.vector[i] * p.vector[j]).sum();
                worst = worst.max((entry - h.get(i, j)).abs());
            }
        }
        worst
    }

    /// `max_k |λ_k + λ_{dim-1-k}|`.
    pub fn spectral_symmetry_error(&self) -> T {
        let d = self.dim();
        (0..d).map(|k| (self.pairs[k].lambda + self.pairs[d - 1 - k].lambda).abs()).fold(T::zero(), T::max)
    }

    /// `max |v[n+1] − μ v[0]|` over all pairs.
    pub fn parity_error(&self) -> T {
        self.pairs
            .iter()
            .map(|p| (p.vector[p.vector.len() - 1] - p.parity.sign::<T>() * p.vector[0]).abs())
            .fold(T::zero(), T::max)
    }

    pub fn max_residual(&self, h: &TridiagonalHamiltonian<T>) -> T {
        self.pairs.iter().map(|p| p.residual(h)).fold(T::zero(), T::max)
    }
}

/// Agreement between two decompositions of the same matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossValidation {
    pub max_eigenvalue_diff: f64,
    pub max_eigenvector_diff: f64,
}

/// Compares sorted spectra and sign-fixed eigenvectors entrywise.
pub fn cross_validate<T: Real>(a: &EigenDecomposition<T>, b: &EigenDecomposition<T>) -> Result<CrossValidation> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let mut dl = T::zero();
    let mut dv = T::zero();
    for (p, q) in a.pairs().iter().zip(b.pairs()) {
        dl = dl.max((p.lambda - q.lambda).abs());
        for (&x, &y) in p.vector.iter().zip(&q.vector) {
            dv = dv.max((x - y).abs());
        }
    }
    Ok(CrossValidation { max_eigenvalue_diff: dl.as_f64(), max_eigenvector_diff: dv.as_f64() })
}

/// Decomposes `H(a)` with the requested route.
pub fn decompose<T: Real>(params: &WireParams<T>, method: Method) -> Result<EigenDecomposition<T>> {
    match method {
        Method::Analytic => analytic_eigendecomposition(params),
        Method::Oracle => oracle_eigendecomposition(&build_hamiltonian(params)),
    }
}

/// True when the analytic route applies, i.e. `0 < a² < 2`.
pub fn analytic_regime<T: Real>(params: &WireParams<T>) -> bool {
    let a2 = params.a() * params.a();
    params.a() > T::zero() && a2 < T::lit(2.0) && (a2 - T::lit(2.0)).abs() >= T::tol(1e-12, 16.0)
}

/// Analytic inside `0 < a² < 2`, oracle elsewhere.
pub fn default_method<T: Real>(params: &WireParams<T>) -> Method {
    if analytic_regime(params) {
        Method::Analytic
    } else {
        Method::Oracle
    }
}
