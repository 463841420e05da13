use cohpower::coherence::{c_l1, c_l1_qubit, c_skew, c_skew_qubit};
use cohpower::linalg::{herm_eig, sqrt_psd};
use cohpower::power::*;
use cohpower::states::{bloch_from_density, density_from_bloch};
use cohpower::{BlochVector, Channel, ComplexMatrix, Measure, Observable, SearchConfig, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let s = (1.0 - z * z).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), z)
    })
}

fn bloch() -> impl Strategy<Value = BlochVector> {
    (unit(), 0.0f64..=1.0).prop_map(|(v, r)| BlochVector::new(v * r).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |xs| {
        let m = ComplexMatrix::new(dim, xs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
        m.hermitian_part()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(a in (1usize..=4).prop_flat_map(hermitian)) {
        let eig = herm_eig(&a).unwrap();
        prop_assert!(eig.reconstruct().distance(&a) < 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sqrt_of_bloch_state_squares_back(r in bloch()) {
        let rho = density_from_bloch(&r);
        let s = sqrt_psd(rho.matrix()).unwrap();
        prop_assert!(s.mul(&s).unwrap().distance(rho.matrix()) < 1e-10);
    }

    #[test]
    fn qubit_formulas_match_matrix_routes(r in bloch(), k in unit()) {
        let rho = density_from_bloch(&r);
        let obs = Observable::pauli_axis(&k).unwrap();
        prop_assert!((c_l1(&rho, &obs).unwrap().value - c_l1_qubit(&r, &k).value).abs() < 1e-10);
        prop_assert!((c_skew(&rho, &obs).unwrap().value - c_skew_qubit(&r, &k).value).abs() < 1e-8);
    }

    #[test]
    fn convexity_on_qubits(a in bloch(), b in bloch(), lambda in 0.0f64..=1.0, k in unit()) {
        let obs = Observable::pauli_axis(&k).unwrap();
        let (ra, rb) = (density_from_bloch(&a), density_from_bloch(&b));
        let mixed = ra.mix(lambda, &rb).unwrap();
        for m in [Measure::L1, Measure::Skew] {
            let c = |rho| cohpower::coherence::coherence(rho, &obs, m).unwrap().value;
            prop_assert!(c(&mixed) <= lambda * c(&ra) + (1.0 - lambda) * c(&rb) + 1e-9);
        }
    }

    #[test]
    fn channels_keep_states_valid(r in bloch(), p in 0.0f64..=1.0, n in unit(), theta in 0.0f64..6.3) {
        let rho = density_from_bloch(&r);
        for ch in [
            Channel::depolarizing(p).unwrap(),
            Channel::bit_flip(p).unwrap(),
            Channel::phase_flip(p).unwrap(),
            Channel::unitary_rotation(&n, theta).unwrap(),
        ] {
            let out = ch.apply(&rho).unwrap();
            prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
            let back = bloch_from_density(&out).unwrap();
            prop_assert!((back.vector() - ch.bloch_map().unwrap().apply(&r.vector())).norm() < 1e-10);
        }
    }

    #[test]
    fn unitary_cohering_equals_decohering(n in unit(), theta in 0.0f64..std::f64::consts::PI, k in unit()) {
        let (c, d, gap) = unitary_power_equality(&n, theta, &k, &SearchConfig::circle()).unwrap();
        prop_assert!(gap < 1e-6, "C = {}, D = {}", c, d);
        prop_assert!((c - unitary_sin2_beta(&n, theta, &k).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn bitflip_cohering_closed_form(p in 0.0f64..=1.0, k in unit()) {
        let numeric = cohering_power_qubit(&Channel::bit_flip(p).unwrap(), &k).unwrap().value;
        let closed = bitflip_cohering_closed(p, (k[0] * k[0]).min(1.0)).unwrap();
        prop_assert!((numeric - closed).abs() < 1e-9);
    }

    #[test]
    fn bitflip_decohering_exact_form(p in 0.0f64..=1.0, k in unit()) {
        let numeric = decohering_power_qubit(&Channel::bit_flip(p).unwrap(), &k, &SearchConfig::circle())
            .unwrap()
            .value;
        let kx2 = (k[0] * k[0]).min(1.0);
        prop_assert!((numeric - bitflip_decohering_exact(p, kx2).unwrap()).abs() < 1e-7);
        // the two-branch form picks an endpoint value, so it never exceeds the true power
        prop_assert!(bitflip_decohering_closed(p, kx2).unwrap() <= numeric + 1e-9);
    }

    #[test]
    fn powers_respect_bounds(p in 0.0f64..=1.0, k in unit()) {
        for ch in [Channel::depolarizing(p).unwrap(), Channel::bit_flip(p).unwrap()] {
            let c = cohering_power_qubit(&ch, &k).unwrap().value;
            let d = decohering_power_qubit(&ch, &k, &SearchConfig::circle()).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&c) && (0.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn tensor_product_forms(cs in proptest::collection::vec(0.0f64..3.0, 1..6)) {
        let product = tensor_cohering_product(&cs).unwrap();
        prop_assert!(product >= cs.iter().cloned().fold(0.0, f64::max) - 1e-12);
        let same = tensor_cohering_theorem(cs[0], cs.len() as u32).unwrap();
        let homogeneous = tensor_cohering_product(&vec![cs[0]; cs.len()]).unwrap();
        prop_assert!((same - homogeneous).abs() < 1e-9 * (1.0 + same));
    }

    #[test]
    fn asymptotic_ratio_increases(d in 0.01f64..=1.0, n in 2usize..40) {
        let r = asymptotic_ratio(&vec![d; n]).unwrap();
        prop_assert!(r.ratios.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        prop_assert!(r.ratios.iter().all(|x| *x <= 1.0 + 1e-15));
    }
}
