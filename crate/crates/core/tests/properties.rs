use chsh_core::chsh::{optimal_state, IDENTITY_TOL};
use chsh_core::linalg::{hermitian_eigen, operator_norm, pauli, Complex64, ComplexMatrix, I};
use chsh_core::quantum::projectors;
use chsh_core::rng::{random_hermitian, random_unitary};
use chsh_core::{
    analyze, chsh_square_identity_residual, classical_max, correlation, joint_distribution,
    max_s_over_states, mixture_correlations, observable_from_bloch, s_value, BlochVector,
    ChshScenario, DensityMatrix, LhvMixture, SplitMix64, COMMUTATOR_TERM_SIGN,
};
use proptest::prelude::*;

fn bloch() -> impl Strategy<Value = BlochVector> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(theta, phi)| {
        BlochVector::normalized(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        )
        .unwrap()
    })
}

fn scenario() -> impl Strategy<Value = ChshScenario> {
    (bloch(), bloch(), bloch(), bloch())
        .prop_map(|(a1, a2, b1, b2)| ChshScenario::from_bloch(a1, a2, b1, b2, None).unwrap())
}

fn small_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |v| {
        ComplexMatrix::new(
            n,
            v.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kron_dimension_and_trace(a in small_matrix(2), b in small_matrix(2)) {
        let k = a.kron(&b);
        prop_assert_eq!(k.dim(), 4);
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() <= 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in small_matrix(2), b in small_matrix(2), c in small_matrix(2), d in small_matrix(2)) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-11);
    }

    #[test]
    fn commutator_of_hermitian_is_anti_hermitian(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let x = random_hermitian(&mut rng, 4);
        let y = random_hermitian(&mut rng, 4);
        let c = x.commutator(&y).unwrap();
        prop_assert!((&c.adjoint() + &c).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn adjoint_is_involution(m in small_matrix(4)) {
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn square_identity_holds(sc in scenario()) {
        prop_assert!(chsh_square_identity_residual(&sc, COMMUTATOR_TERM_SIGN) <= IDENTITY_TOL);
    }

    #[test]
    fn compatible_a_side_never_violates(a in bloch(), flip in any::<bool>(), b1 in bloch(), b2 in bloch()) {
        let a2 = if flip { a.negated() } else { a };
        let sc = ChshScenario::from_bloch(a, a2, b1, b2, None).unwrap();
        let r = analyze(&sc).unwrap();
        prop_assert!(r.comm_a_norm <= 1e-12);
        prop_assert!(r.max_s_over_states <= 2.0 + 1e-9);
        prop_assert!(!r.violates);
    }

    #[test]
    fn compatible_b_side_never_violates(a1 in bloch(), a2 in bloch(), b in bloch(), flip in any::<bool>()) {
        let b2 = if flip { b.negated() } else { b };
        let sc = ChshScenario::from_bloch(a1, a2, b, b2, None).unwrap();
        prop_assert!(max_s_over_states(&sc).unwrap() <= 2.0 + 1e-9);
    }

    #[test]
    fn report_invariants(sc in scenario(), seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let sc = sc.with_state(DensityMatrix::random(&mut rng)).unwrap();
        let r = analyze(&sc).unwrap();
        prop_assert!((r.max_s_over_states - 2.0 * r.chsh_operator_norm).abs() <= 1e-10);
        prop_assert!(r.s_value.unwrap().abs() <= r.max_s_over_states + 1e-9);
        prop_assert_eq!(r.violates, r.max_s_over_states > 2.0 + 1e-9);
        // Tsirelson ceiling.
        prop_assert!(r.max_s_over_states <= 2.0 * std::f64::consts::SQRT_2 + 1e-9);
        // Consequence of the square identity.
        let half = r.max_s_over_states / 2.0;
        prop_assert!(half * half <= 1.0 + 0.25 * r.comm_a_norm * r.comm_b_norm + 1e-9);
    }

    #[test]
    fn local_conditions_are_local(a1 in bloch(), a2 in bloch(), b1 in bloch(), b2 in bloch(), c1 in bloch(), c2 in bloch()) {
        // The A-side commutator norm depends on the A-side pair only.
        let first = analyze(&ChshScenario::from_bloch(a1, a2, b1, b2, None).unwrap()).unwrap();
        let second = analyze(&ChshScenario::from_bloch(a1, a2, c1, c2, None).unwrap()).unwrap();
        prop_assert_eq!(first.comm_a_norm, second.comm_a_norm);
    }
}

#[test]
fn operator_norm_dominates_sampled_gain() {
    let mut rng = SplitMix64::new(31);
    for _ in 0..20 {
        let m = random_hermitian(&mut rng, 4);
        let norm = operator_norm(&m).unwrap();
        let mut sampled: f64 = 0.0;
        for _ in 0..1000 {
            let v = rng.unit_complex_vector(4);
            let mv = m.apply(&v).unwrap();
            sampled = sampled.max(mv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
        assert!(sampled <= norm + 1e-6, "{sampled} > {norm}");
        // The top eigenvector attains the norm.
        let e = hermitian_eigen(&m).unwrap();
        let top = e.eigenvector(e.dominant_index());
        let gain = m
            .apply(&top)
            .unwrap()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!((gain - norm).abs() <= 1e-10);
    }
}

#[test]
fn eigen_invariants_1000_random() {
    let mut rng = SplitMix64::new(41);
    for n in [2, 4] {
        for _ in 0..1000 {
            let m = random_hermitian(&mut rng, n);
            let e = hermitian_eigen(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            assert!((&e.reconstruct() - &m).frobenius_norm() <= 1e-10 * scale);
            let gram = &e.eigenvectors.adjoint() * &e.eigenvectors;
            assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-10);
        }
    }
}

#[test]
fn eigen_recovers_planted_spectrum() {
    let mut rng = SplitMix64::new(43);
    for _ in 0..1000 {
        let mut spectrum: Vec<f64> = (0..4).map(|_| rng.uniform(-5.0, 5.0)).collect();
        spectrum.sort_by(|a, b| b.total_cmp(a));
        let u = random_unitary(&mut rng, 4);
        let m = &(&u * &ComplexMatrix::diag(&spectrum)) * &u.adjoint();
        let e = hermitian_eigen(&m).unwrap();
        for (got, want) in e.eigenvalues.iter().zip(&spectrum) {
            assert!((got - want).abs() <= 1e-10);
        }
    }
}

#[test]
fn commutator_norm_uses_hermitian_form() {
    let h = pauli::z().commutator(&pauli::x()).unwrap().scale(I);
    assert!((&h - &pauli::y().scale_real(-2.0)).frobenius_norm() < 1e-15);
}

#[test]
fn no_signaling_exact_marginals() {
    let mut rng = SplitMix64::new(51);
    for _ in 0..1000 {
        let rho = DensityMatrix::random(&mut rng);
        let a = observable_from_bloch(BlochVector::random(&mut rng));
        let b1 = observable_from_bloch(BlochVector::random(&mut rng));
        let b2 = observable_from_bloch(BlochVector::random(&mut rng));
        let p1 = joint_distribution(&rho, &a, &b1).unwrap();
        let p2 = joint_distribution(&rho, &a, &b2).unwrap();
        // Single-party Born rule for A alone.
        let (a_plus, _) = projectors(&a);
        let direct = rho.expectation(&a_plus.kron(&pauli::identity())).unwrap();
        assert!((p1.marginal_a_plus() - direct).abs() <= 1e-10);
        assert!((p2.marginal_a_plus() - direct).abs() <= 1e-10);
        // And symmetrically for B across A's settings.
        let a2 = observable_from_bloch(BlochVector::random(&mut rng));
        let q = joint_distribution(&rho, &a2, &b1).unwrap();
        assert!((q.marginal_b_plus() - p1.marginal_b_plus()).abs() <= 1e-10);
    }
}

#[test]
fn correlation_routes_agree() {
    let mut rng = SplitMix64::new(53);
    for _ in 0..1000 {
        let rho = DensityMatrix::random(&mut rng);
        let a = observable_from_bloch(BlochVector::random(&mut rng));
        let b = observable_from_bloch(BlochVector::random(&mut rng));
        let direct = correlation(&rho, &a, &b).unwrap();
        let via_cells = joint_distribution(&rho, &a, &b).unwrap().correlation();
        assert!((direct - via_cells).abs() <= 1e-10);
        assert!(direct.abs() <= 1.0 + 1e-10);
    }
}

#[test]
fn top_eigenstate_attains_max_s() {
    let mut rng = SplitMix64::new(57);
    for _ in 0..500 {
        let sc = ChshScenario::random(&mut rng);
        let max_s = max_s_over_states(&sc).unwrap();
        let sc = sc.clone().with_state(optimal_state(&sc).unwrap()).unwrap();
        assert!((s_value(&sc).unwrap() - max_s).abs() <= 1e-9);
    }
}

#[test]
fn quantum_exceeds_every_local_model() {
    let sc = ChshScenario::tsirelson(Some(chsh_core::bell_state(chsh_core::BellState::PsiMinus)));
    let s = s_value(&sc).unwrap();
    assert!(s >= 2.0 * std::f64::consts::SQRT_2 - 1e-6);
    assert!(s > classical_max());
    let mut rng = SplitMix64::new(59);
    for _ in 0..1000 {
        let local = mixture_correlations(&LhvMixture::random(&mut rng)).chsh();
        assert!(local.abs() <= classical_max() + 1e-10);
        let mut a = BlochVector::random(&mut rng);
        if rng.next_f64() < 0.5 {
            a = a.negated();
        }
        let compatible = ChshScenario::from_bloch(
            a,
            a,
            BlochVector::random(&mut rng),
            BlochVector::random(&mut rng),
            None,
        )
        .unwrap();
        assert!(max_s_over_states(&compatible).unwrap() <= classical_max() + 1e-9);
    }
}
