//! Quantum-state transfer through an unmodulated spin chain.
//!
//! A source and a destination qubit are attached with coupling `a` to the
//! two ends of a wire of `n` spins whose internal couplings all equal one.
//! In the single-excitation sector the Hamiltonian is an `(n+2)×(n+2)`
//! symmetric tridiagonal matrix with zero diagonal. This crate builds that
//! matrix, diagonalizes it through the closed-form characteristic equation
//! and through an independent implicit-QL solver, propagates the initial
//! excitation spectrally, and runs the transfer experiments on top.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod asymptotics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod scalar;
pub mod spectral;
pub mod wire;

pub use asymptotics::{AsymptoticPrediction, Populations, SignReport, WireParity};
pub use dynamics::{Propagator, ProbabilitySnapshot, TimeSeries};
pub use error::{Error, Result};
pub use experiments::{PmaxResult, ScalingFit, SweepResult, SweepRow, Table};
pub use scalar::Real;




pub use spectral::{EigenDecomposition, Eigenpair, Method, Parity, SpectralRoot};
pub use wire::{TridiagonalHamiltonian, WaveFunction, WireParams};

pub type WireParams64 = WireParams<f64>;
pub type Hamiltonian64 = TridiagonalHamiltonian<f64>;
pub type WaveFunction64 = WaveFunction<f64>;
pub type Eigenpair64 = Eigenpair<f64>;
pub type EigenDecomposition64 = EigenDecomposition<f64>;
pub type SpectralRoot64 = SpectralRoot<f64>;
pub type Propagator64 = Propagator<f64>;
pub type TimeSeries64 = TimeSeries<f64>;
pub type PmaxResult64 = PmaxResult<f64>;
pub type SweepResult64 = SweepResult<f64>;
pub type ScalingFit64 = ScalingFit<f64>;
pub type AsymptoticPrediction64 = AsymptoticPrediction<f64>;

pub type WireParams32 = WireParams<f32>;
pub type EigenDecomposition32 = EigenDecomposition<f32>;
