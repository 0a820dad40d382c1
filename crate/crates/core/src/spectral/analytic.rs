//! Closed-form spectrum of `H(a)` for `0 < a² < 2`.
//!
//! Every eigenvalue is `λ = 2 cos γ` with `γ ∈ (0, π)` a root of
//!
//! ```text
//! f_μ(γ) = μ cot(γ) cot^μ((n+1)γ/2) − a²/(2 − a²),   μ = ±1,
//! ```
//!
//! where `cot^{-1}` means `tan`. Roots are bracketed branch by branch
//! between consecutive poles of `cot^μ((n+1)γ/2)` and refined by bisection.
//!
//! For odd `n` the zero eigenvalue sits at `γ = π/2`, where the branch with
//! `μ = (−1)^{(n+1)/2}` has a removable `0·∞` singularity; `f_μ` tends to
//! `−2/(n+1) − r` there and never vanishes, so that root is added explicitly.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{fix_sign, EigenDecomposition, Eigenpair, Method, Parity, SpectralRoot};
use crate::wire::WireParams;

/// `a² / (2 − a²)`.
pub fn rhs_constant<T: Real>(a: T) -> Result<T> {
    let a2 = a * a;
    let denom = T::lit(2.0) - a2;
    if denom.abs() < T::tol(1e-12, 16.0) {
        return Err(Error::SingularCoupling { a: a.as_f64() });
    }
    Ok(a2 / denom)
}

/// The branch on which `γ = π/2` is a removable singularity (odd `n` only).
fn removable_branch(n: usize) -> Option<Parity> {
    if n % 2 == 0 {
        return None;
    }
    Some(if ((n + 1) / 2) % 2 == 0 { Parity::Plus } else { Parity::Minus })
}

fn removable_window<T: Real>() -> T {
    T::tol(1e-8, 1e3)
}

/// `f_μ(γ)` for the given wire.
///
/// Fails with `pole-evaluation` within `1e-12` of a pole of `cot γ` or of
/// `cot^μ((n+1)γ/2)`. At the removable point `γ = π/2` (odd `n`) the limit
/// `−2/(n+1) − r` is returned.
pub fn characteristic_function<T: Real>(gamma: T, mu: Parity, params: &WireParams<T>) -> Result<T> {
    let r = rhs_constant(params.a())?;
    eval_branch(gamma, mu, params.n(), r)
}

fn eval_branch<T: Real>(gamma: T, mu: Parity, n: usize, r: T) -> Result<T> {
    let pole_tol = T::tol(1e-12, 64.0);
    let half_pi = T::FRAC_PI_2();
    let m = T::from_count(n + 1) / T::lit(2.0);

    if removable_branch(n) == Some(mu) && (gamma - half_pi).abs() < removable_window() {
        return Ok(-T::one() / m - r);
    }

    let (sg, cg) = gamma.sin_cos();
    if !(gamma > T::zero() && gamma < T::PI()) || sg.abs() < pole_tol {
        return Err(Error::PoleEvaluation { gamma: gamma.as_f64() });
    }
    let (sx, cx) = (m * gamma).sin_cos();
    match mu {
        Parity::Plus => {
            if sx.abs() < pole_tol * m {
                return Err(Error::PoleEvaluation { gamma: gamma.as_f64() });
            }
            Ok(cg * cx / (sg * sx) - r)
        }
        Parity::Minus => {
            if cx.abs() < pole_tol * m {
                return Err(Error::PoleEvaluation { gamma: gamma.as_f64() });
            }
            Ok(-(cg * sx) / (sg * cx) - r)
        }
    }
}

/// Poles of `cot^μ((n+1)γ/2)` inside `(0, π)`, excluding the removable one.
fn branch_poles<T: Real>(n: usize, mu: Parity) -> Vec<T> {
    let np1 = n + 1;
    let removable = removable_branch(n) == Some(mu);
    // pole at γ = j π / (n+1) with j even (Plus) or odd (Minus)
    let first = match mu {
        Parity::Plus => 2,
        Parity::Minus => 1,
    };
    (first..np1)
        .step_by(2)
        .filter(|&j| !(removable && 2 * j == np1))
        .map(|j| T::PI() * T::from_count(j) / T::from_count(np1))
        .collect()
}

/// Sample points for one branch: a uniform grid of step `π/(20(n+2))`,
/// probes just inside every pole-free interval, and `π/2` where it is a
/// regular point. Each entry is `(interval index, γ)`.
fn branch_samples<T: Real>(n: usize, mu: Parity) -> Vec<(usize, T)> {
    let pi = T::PI();
    let half_pi = T::FRAC_PI_2();
    let step = pi / T::from_count(20 * (n + 2));
    let probe = T::tol(1e-11, 1e4);
    let removable = removable_branch(n) == Some(mu);

    let mut edges = vec![T::zero()];
    edges.extend(branch_poles::<T>(n, mu));
    edges.push(pi);

    let mut out = Vec::new();
    for (idx, w) in edges.windows(2).enumerate() {
        let (lo, hi) = (w[0] + probe, w[1] - probe);
        let mut pts = vec![lo];
        let mut j = (lo / step).ceil().to_usize().unwrap_or(0);
        loop {
            let g = step * T::from_count(j);
            if g >= hi {
                break;
            }
            if g > lo {
                pts.push(g);
            }
            j += 1;
        }
        pts.push(hi);
        if !removable && lo < half_pi && half_pi < hi {
            pts.push(half_pi);
        }
        if removable {
            pts.retain(|&g| (g - half_pi).abs() >= removable_window::<T>() * T::lit(2.0));
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.dedup();
        out.extend(pts.into_iter().map(|g| (idx, g)));
    }
    out
}

/// Bisects a sign change of `f` inside `[lo, hi]` to full precision.
fn bisect<T: Real>(mut lo: T, mut hi: T, mut f_lo: T, f: impl Fn(T) -> Result<T>) -> Result<T> {
    let mut f_hi = f(hi)?;
    for _ in 0..200 {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if !(mid > lo && mid < hi) {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

fn branch_roots<T: Real>(n: usize, mu: Parity, r: T) -> Result<Vec<T>> {
    let f = |g: T| eval_branch(g, mu, n, r);
    let samples = branch_samples::<T>(n, mu);
    let values = samples.iter().map(|&(_, g)| f(g)).collect::<Result<Vec<T>>>()?;

    let mut roots = Vec::new();
    for i in 0..samples.len() {
        let (interval, g) = samples[i];
        if values[i] == T::zero() {
            roots.push(g);
            continue;
        }
        let Some(&(next_interval, g_next)) = samples.get(i + 1) else { continue };
        if next_interval != interval || values[i + 1] == T::zero() {
            continue;
        }
        if (values[i] < T::zero()) != (values[i + 1] < T::zero()) {
            roots.push(bisect(g, g_next, values[i], f)?);
        }
    }
    Ok(roots)
}

/// All `n + 2` eigen-angles, sorted by `γ`.
///
/// Requires `0 < a² < 2`; outside that regime some eigenvalues leave the
/// band `[−2, 2]` and have no real angle.
pub fn solve_gammas<T: Real>(params: &WireParams<T>) -> Result<Vec<SpectralRoot<T>>> {
    let a = params.a();
    let r = rhs_constant(a)?;
    if !(a > T::zero()) || a * a >= T::lit(2.0) {
        return Err(Error::Regime { a: a.as_f64() });
    }
    let n = params.n();
    let two = T::lit(2.0);

    let mut roots = Vec::with_capacity(n + 2);
    for mu in [Parity::Plus, Parity::Minus] {
        for gamma in branch_roots(n, mu, r)? {
            roots.push(SpectralRoot { gamma, mu, lambda: two * gamma.cos() });
        }
    }
    if let Some(mu) = removable_branch(n) {
        roots.push(SpectralRoot { gamma: T::FRAC_PI_2(), mu, lambda: T::zero() });
    }
    roots.sort_by(|x, y| x.gamma.partial_cmp(&y.gamma).unwrap());

    if roots.len() != n + 2 {
        return Err(Error::RootCountMismatch { expected: n + 2, found: roots.len() });
    }
    let min_gap = roots.windows(2).map(|w| w[1].gamma - w[0].gamma).fold(T::infinity(), T::min);
    if min_gap <= T::tol(1e-10, 64.0) {
        return Err(Error::DuplicateRoot { gap: min_gap.as_f64() });
    }
    Ok(roots)
}

/// Explicit eigenvector for an eigen-angle:
///
/// ```text
/// v_0     = (a/c) sin γ
/// v_k     = (1/c) [sin((k+1)γ) + (1 − a²) sin((k−1)γ)],   k = 1..n
/// v_{n+1} = μ v_0
/// c²      = (n+1)(2(1 − a²)cos²γ + a⁴/2) + 2a² − a⁴
/// ```
pub fn eigenvector_from_root<T: Real>(root: &SpectralRoot<T>, params: &WireParams<T>) -> Result<Eigenpair<T>> {
    let n = params.n();
    let a = params.a();
    let a2 = a * a;
    let a4 = a2 * a2;
    let two = T::lit(2.0);
    let gamma = root.gamma;
    let cos_g = gamma.cos();

    let c2 = T::from_count(n + 1) * (two * (T::one() - a2) * cos_g * cos_g + a4 / two) + two * a2 - a4;
    let c = c2.sqrt();

    let mut v = Vec::with_capacity(n + 2);
    let v0 = a * gamma.sin() / c;
    v.push(v0);
    for k in 1..=n {
        let kf = T::from_count(k);
        v.push(((kf + T::one()) * gamma).sin() / c + (T::one() - a2) * ((kf - T::one()) * gamma).sin() / c);
    }
    v.push(root.mu.sign::<T>() * v0);

    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    let deviation = (norm - T::one()).abs();
    if !(deviation <= T::tol(1e-6, 1e3)) {
        return Err(Error::NormalizationFailure { deviation: deviation.as_f64() });
    }
    v.iter_mut().for_each(|x| *x = *x / norm);
    fix_sign(&mut v);

    Ok(Eigenpair { lambda: root.lambda, vector: v, parity: root.mu, gamma: Some(gamma) })
}

/// Full decomposition from the characteristic roots.
pub fn analytic_eigendecomposition<T: Real>(params: &WireParams<T>) -> Result<EigenDecomposition<T>> {
    let pairs = solve_gammas(params)?
        .iter()
        .map(|root| eigenvector_from_root(root, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenDecomposition::new(pairs, Method::Analytic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire::build_hamiltonian;
    use std::f64::consts::PI;

    fn params(n: usize, a: f64) -> WireParams<f64> {
        WireParams::new(n, a).unwrap()
    }

    #[test]
    fn rhs_values() {
        assert_eq!(rhs_constant(1.0).unwrap(), 1.0);
        assert_eq!(rhs_constant(0.0).unwrap(), 0.0);
        assert_eq!(rhs_constant(2f64.sqrt()).unwrap_err().code(), "singular-coupling");
    }

    #[test]
    fn uniform_path_angles_are_roots() {
        // cot(π/5) cot(3π/10) = 1 and cot(2π/5) cot(3π/5) = -1 (μ = +1 branch at a = 1)
        let p = params(2, 1.0);
        assert!(characteristic_function(PI / 5.0, Parity::Plus, &p).unwrap().abs() < 1e-12);
        let f2 = characteristic_function(2.0 * PI / 5.0, Parity::Minus, &p).unwrap();
        let f2p = characteristic_function(2.0 * PI / 5.0, Parity::Plus, &p).unwrap();
        assert!(f2.abs().min(f2p.abs()) < 1e-12);
    }

    #[test]
    fn half_pi_is_finite_for_odd_wires() {
        for n in [9, 11, 199] {
            let p = params(n, 0.01);
            for mu in [Parity::Plus, Parity::Minus] {
                assert!(characteristic_function(PI / 2.0, mu, &p).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn poles_are_reported() {
        // n = 2: cot(3γ/2) has a pole at γ = 2π/3
        let p = params(2, 0.5);
        let e = characteristic_function(2.0 * PI / 3.0, Parity::Plus, &p).unwrap_err();
        assert_eq!(e.code(), "pole-evaluation");
        assert!(characteristic_function(0.0, Parity::Plus, &p).is_err());
    }

    #[test]
    fn uniform_four_site_path() {
        let roots = solve_gammas(&params(2, 1.0)).unwrap();
        let gammas: Vec<f64> = roots.iter().map(|r| r.gamma).collect();
        for (g, k) in gammas.iter().zip(1..=4) {
            assert!((g - k as f64 * PI / 5.0).abs() < 1e-12, "{gammas:?}");
        }
        let expected = [1.618033988749895, 0.6180339887498949, -0.6180339887498949, -1.618033988749895];
        for (r, e) in roots.iter().zip(expected) {
            assert!((r.lambda - e).abs() < 1e-12);
        }
    }

    #[test]
    fn three_site_chain_has_zero_mode() {
        let roots = solve_gammas(&params(1, 1.0)).unwrap();
        let lambdas: Vec<f64> = roots.iter().map(|r| r.lambda).collect();
        let s2 = 2f64.sqrt();
        assert!((lambdas[0] - s2).abs() < 1e-12);
        assert_eq!(lambdas[1], 0.0);
        assert!((lambdas[2] + s2).abs() < 1e-12);
    }

    #[test]
    fn regime_is_enforced() {
        assert_eq!(solve_gammas(&params(5, 1.5)).unwrap_err().code(), "regime");
        assert_eq!(solve_gammas(&params(5, 0.0)).unwrap_err().code(), "regime");
        assert_eq!(solve_gammas(&params(5, 2f64.sqrt())).unwrap_err().code(), "singular-coupling");
    }

    #[test]
    fn counts_and_residuals_over_many_wires() {
        for n in [1usize, 2, 3, 4, 5, 8, 9, 10, 31, 64, 99, 100, 101, 198, 199, 300] {
            for a in [0.002, 0.01, 0.05, 0.3, 0.6, 0.999, 1.0, 1.2, 1.3, 1.4] {
                let p = params(n, a);
                let roots = solve_gammas(&p).unwrap_or_else(|e| panic!("n={n} a={a}: {e}"));
                assert_eq!(roots.len(), n + 2);
                for r in &roots {
                    assert!((r.lambda - 2.0 * r.gamma.cos()).abs() < 1e-14);
                    if n % 2 == 1 && r.lambda == 0.0 {
                        continue;
                    }
                    let f = characteristic_function(r.gamma, r.mu, &p).unwrap();
                    if a <= 1.3 {
                        assert!(f.abs() < 1e-9, "n={n} a={a} gamma={} f={f}", r.gamma);
                    } else {
                        // steep near the poles: the root must still be bracketed within a few ulps
                        let ulp = 4.0 * f64::EPSILON * r.gamma;
                        let lo = characteristic_function(r.gamma - ulp, r.mu, &p).unwrap();
                        let hi = characteristic_function(r.gamma + ulp, r.mu, &p).unwrap();
                        assert!(lo * hi <= 0.0 || f.abs() < 1e-9, "n={n} a={a} gamma={} f={f}", r.gamma);
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvectors_satisfy_eigen_equation() {
        for (n, a) in [(2, 1.0), (7, 0.3), (30, 0.6), (31, 1.3), (198, 0.01), (199, 0.01)] {
            let p = params(n, a);
            let h = build_hamiltonian(&p);
            let d = analytic_eigendecomposition(&p).unwrap();
            assert!(d.max_residual(&h) < 1e-9, "n={n} a={a}");
            assert!(d.parity_error() < 1e-12);
            assert!(d.pairs().iter().all(|q| q.vector[0] > 0.0));
        }
    }

    #[test]
    fn small_coupling_end_weights_even() {
        let p = params(198, 0.01);
        let d = analytic_eigendecomposition(&p).unwrap();
        let lam = d.eigenvalues();
        let k = lam.iter().position(|&l| l > 0.0).unwrap();
        for idx in [k - 1, k] {
            let v = &d.pairs()[idx].vector;
            assert!((v[0].abs() - 0.5f64.sqrt()).abs() < 0.02);
            assert!((v[199].abs() - 0.5f64.sqrt()).abs() < 0.02);
        }
    }

    #[test]
    fn single_precision_agrees_on_small_wire() {
        let p = WireParams::<f32>::new(2, 1.0).unwrap();
        let roots = solve_gammas(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert!((roots[0].lambda - 1.618034).abs() < 1e-5);
        let d = analytic_eigendecomposition(&p).unwrap();
        assert!(d.orthonormality_error() < 1e-5);
    }
}
