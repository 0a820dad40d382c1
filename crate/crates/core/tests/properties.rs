use proptest::prelude::*;

use spinwire::asymptotics::{predict, smallest_positive_eigenvalue};
use spinwire::dynamics::{bell_fidelity, bell_overlap, evolve, Propagator};
use spinwire::spectral::{cross_validate, decompose, Parity};
use spinwire::wire::{build_hamiltonian, initial_excitation_state};
use spinwire::{EigenDecomposition32, Method, WireParams, WireParams32};

fn routes(n: usize, a: f64) -> (spinwire::EigenDecomposition<f64>, spinwire::EigenDecomposition<f64>) {
    let p = WireParams::new(n, a).unwrap();
    (decompose(&p, Method::Analytic).unwrap(), decompose(&p, Method::Oracle).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree(n in 1usize..80, a in 0.01f64..1.3) {
        let (an, or) = routes(n, a);
        prop_assert_eq!(an.dim(), n + 2);
        let cv = cross_validate(&an, &or).unwrap();
        prop_assert!(cv.max_eigenvalue_diff < 1e-9, "{:?}", cv);
        prop_assert!(cv.max_eigenvector_diff < 1e-7, "{:?}", cv);
        for (x, y) in an.pairs().iter().zip(or.pairs()) {
            prop_assert_eq!(x.parity, y.parity);
        }
    }

    #[test]
    fn branches_alternate(n in 1usize..60, a in 0.05f64..1.2) {
        // mirror symmetry: parities alternate down the sorted spectrum
        let (an, _) = routes(n, a);
        let top = an.pairs().last().unwrap();
        prop_assert_eq!(top.parity, Parity::Plus);
        for w in an.pairs().windows(2) {
            prop_assert_ne!(w[0].parity, w[1].parity);
        }
    }

    #[test]
    fn routes_evolve_alike(n in 1usize..40, a in 0.05f64..1.3, t in 0.0f64..500.0) {
        let p = WireParams::new(n, a).unwrap();
        let psi0 = initial_excitation_state(&p);
        let (an, or) = routes(n, a);
        let x = evolve(&an, &psi0, t).unwrap();
        let y = evolve(&or, &psi0, t).unwrap();
        for (u, v) in x.amps().iter().zip(y.amps()) {
            prop_assert!((u - v).norm() < 1e-7);
        }
    }
}

#[test]
fn gap_matches_prediction_at_small_coupling() {
    for n in [100usize, 101, 198, 199] {
        let p = WireParams::new(n, 0.002f64).unwrap();
        let l = smallest_positive_eigenvalue(&decompose(&p, Method::Analytic).unwrap()).unwrap();
        let pred = predict(&p).unwrap().lambda_hat;
        assert!((l - pred).abs() / pred < 0.02, "n={n}: {l} vs {pred}");
    }
}

#[test]
fn single_precision_route() {
    let p: WireParams32 = WireParams::new(12, 0.5).unwrap();
    let d: EigenDecomposition32 = decompose(&p, Method::Analytic).unwrap();
    let o = decompose(&p, Method::Oracle).unwrap();
    assert!(cross_validate(&d, &o).unwrap().max_eigenvalue_diff < 1e-5);
    assert!(d.reconstruction_error(&build_hamiltonian(&p)) < 1e-5);
}

#[test]
fn bell_phase() {
    // two-level Rabi at half period: amplitudes 1/√2 and ±i/√2
    let p = WireParams::new(40, 0.01f64).unwrap();
    let d = decompose(&p, Method::Analytic).unwrap();
    let prop = Propagator::new(&d, &initial_excitation_state(&p)).unwrap();
    let l = smallest_positive_eigenvalue(&d).unwrap();
    let psi = prop.state(std::f64::consts::PI / (4.0 * l));
    let end = psi.amps()[p.end()];
    assert!(end.re.abs() < 0.05 && end.im.abs() > 0.6);
    assert!(bell_fidelity(&psi) > 0.98);
    assert!((bell_overlap(&psi) - 0.5).abs() < 0.05);
}
