//! Symmetric tridiagonal eigensolver: implicit-shift QL with Wilkinson
//! shifts, accumulating the rotations into the identity to obtain the
//! eigenvectors (the classic `tql2`/`tqli` scheme).
//!
//! Each eigenvalue gets at most [`MAX_SWEEPS_PER_EIGENVALUE`] QL sweeps.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{fix_sign, EigenDecomposition, Eigenpair, Method, Parity};
use crate::wire::TridiagonalHamiltonian;

pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues and row-major eigenvector matrix (column `j` is the vector of
/// `d[j]`), unsorted.
fn tql<T: Real>(h: &TridiagonalHamiltonian<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = h.dim();
    let mut d = h.diag().to_vec();
    let mut e = h.offdiag().to_vec();
    e.push(T::zero());
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::ConvergenceFailure { iterations: MAX_SWEEPS_PER_EIGENVALUE });
            }

            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zk1 = z[k * n + i + 1];
                    let zk = z[k * n + i];
                    z[k * n + i + 1] = s * zk + c * zk1;
                    z[k * n + i] = c * zk - s * zk1;
                }
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok((d, z))
}

/// Numerical decomposition of any symmetric tridiagonal matrix.
///
/// Parity is read off the sign of `v[last]·v[0]`; it is only meaningful
/// for reflection-symmetric matrices such as `H(a)`.
pub fn oracle_eigendecomposition<T: Real>(h: &TridiagonalHamiltonian<T>) -> Result<EigenDecomposition<T>> {
    let n = h.dim();
    let (d, z) = tql(h)?;
    let pairs = (0..n)
        .map(|j| {
            let mut v: Vec<T> = (0..n).map(|k| z[k * n + j]).collect();
            fix_sign(&mut v);
            let parity = Parity::of(v[n - 1] * v[0]);
            Eigenpair { lambda: d[j], vector: v, parity, gamma: None }
        })
        .collect();
    Ok(EigenDecomposition::new(pairs, Method::Oracle))
}
