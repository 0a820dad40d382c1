//! Problem definition: wire parameters, the single-excitation basis and the
//! Hamiltonian.
//!
//! Basis state `|p⟩`, `p = 0..=n+1`, has only spin `p` flipped. Site 0 is the
//! source qubit, site `n+1` the destination, sites `1..=n` form the wire.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wire length `n` and end coupling `a`. Internal couplings are fixed to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireParams<T> {
    n: usize,
    a: T,
}

impl<T: Real> WireParams<T> {
    pub fn new(n: usize, a: T) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams { n, a: a.as_f64(), reason: "wire length must be at least 1" });
        }
        if !(a >= T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParams { n, a: a.as_f64(), reason: "end coupling must be finite and nonnegative" });
        }
        Ok(Self { n, a })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    /// Number of sites including source and destination, `n + 2`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.n + 2
    }

    /// Index of the destination qubit, `n + 1`.
    #[inline]
    pub fn end(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }
}

/// Symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> TridiagonalHamiltonian<T> {
    /// `offdiag.len()` must equal `diag.len() - 1`.
    pub fn from_parts(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len().saturating_sub(1), found: offdiag.len() });
        }
        Ok(Self { diag, offdiag })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    #[inline]
    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    #[inline]
    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// Matrix entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> T {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.offdiag[i.min(j)],
            _ => T::zero(),
        }
    }

    /// `H · x` for a real vector.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let d = self.dim();
        assert_eq!(x.len(), d, "vector length must match matrix dimension");
        (0..d)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y = y + self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < d {
                    y = y + self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Builds `H(a)`: zero diagonal, off-diagonal `[a, 1, …, 1, a]`.
pub fn build_hamiltonian<T: Real>(params: &WireParams<T>) -> TridiagonalHamiltonian<T> {
    let dim = params.dim();
    let mut offdiag = vec![T::one(); dim - 1];
    offdiag[0] = params.a();
    offdiag[dim - 2] = params.a();
    TridiagonalHamiltonian { diag: vec![T::zero(); dim], offdiag }
}

/// Complex amplitudes `⟨p|Ψ⟩` over the single-excitation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> WaveFunction<T> {
    /// Accepts amplitudes whose squared norm is one within `1e-12`.
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        let norm_sqr = amps.iter().map(|z| z.norm_sqr()).sum::<T>();
        if amps.is_empty() || (norm_sqr - T::one()).abs() > T::tol(1e-12, 64.0) {
            return Err(Error::NotNormalized { norm_sqr: norm_sqr.as_f64() });
        }
        Ok(Self { amps })
    }

    /// Wraps amplitudes without checking normalization.
    pub(crate) fn from_amps_unchecked(amps: Vec<Complex<T>>) -> Self {
        Self { amps }
    }

    /// Excitation localized on site `site`.
    pub fn basis(dim: usize, site: usize) -> Self {
        assert!(site < dim, "site index out of range");
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[site] = Complex::new(T::one(), T::zero());
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }
}

/// `|Ψ(0)⟩ = |1⟩_0 |0⟩_1 ⋯ |0⟩_{n+1}`.
pub fn initial_excitation_state<T: Real>(params: &WireParams<T>) -> WaveFunction<T> {
    WaveFunction::basis(params.dim(), 0)
}
