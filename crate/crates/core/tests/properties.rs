use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use proptest::prelude::*;

use kchaos::chaoticity::{
    exact_verdict_at_order, idempotency_order, verdict_at_order, verdict_of, IdempotencyResult, VerdictKind,
    BOUNDARY_TOL,
};
use kchaos::constructions::{build_chaotic_order_k, build_quadratic_unitary, PrecisionPolicy, QuadraticSeed};
use kchaos::entropy::{
    qubit_entropy_closed, transition_matrix, unitary_from_angles, PvmBasis, UnitaryD,
};
use kchaos::interval::mod2_distance;
use kchaos::phases::{eigenphases_of, reduce_angle, EigenphasePair, ExactUnitarySpec, RationalPhase, Unitary2};

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn conjugated(pair: &EigenphasePair, angles: &[f64]) -> Unitary2 {
    let v = unitary_from_angles(2, angles);
    let basis = Unitary2::new(Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)])).unwrap();
    Unitary2::from_eigen(pair, &basis)
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

fn rational() -> impl Strategy<Value = RationalPhase> {
    (1i64..=48).prop_flat_map(|p| (0..2 * p, Just(p))).prop_map(|(m, p)| RationalPhase::new(m, p).unwrap())
}

fn spec() -> impl Strategy<Value = ExactUnitarySpec> {
    (rational(), rational(), rational()).prop_map(|(a, b, g)| ExactUnitarySpec::new(a, b, g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigenphases_round_trip(phi in angle(), psi in angle(), angles in prop::collection::vec(angle(), 4)) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let u = conjugated(&pair, &angles);
        let (found, basis) = eigenphases_of(&u).unwrap();
        let direct = circ(found.phi, pair.phi).max(circ(found.psi, pair.psi));
        let swapped = circ(found.phi, pair.psi).max(circ(found.psi, pair.phi));
        prop_assert!(direct.min(swapped) < 1e-9 || circ(phi, psi) < 1e-7);
        prop_assert!(Unitary2::from_eigen(&found, &basis).max_abs_diff(&u) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_and_theta_are_basis_free(phi in angle(), psi in angle(), angles in prop::collection::vec(angle(), 4)) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let u = conjugated(&pair, &angles);
        prop_assert!((u.trace().norm() - pair.trace_magnitude()).abs() < 1e-12);
        prop_assert!((pair.trace_magnitude() - 2.0 * (pair.theta() / 2.0).cos()).abs() < 1e-12);
        prop_assert!((0.0..=PI).contains(&pair.theta()));
    }

    #[test]
    fn power_matches_eigenphases_of_matrix_power(
        phi in angle(), psi in angle(), angles in prop::collection::vec(angle(), 4), k in 1u64..=64,
    ) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let (found, _) = eigenphases_of(&conjugated(&pair, &angles).pow(k)).unwrap();
        let p = pair.power(k).unwrap();
        let direct = circ(found.phi, p.phi).max(circ(found.psi, p.psi));
        let swapped = circ(found.phi, p.psi).max(circ(found.psi, p.phi));
        prop_assert!(direct.min(swapped) < 1e-9 || p.theta() < 1e-7, "k={k}");
    }

    #[test]
    fn power_trace_matches_repeated_multiplication(
        phi in angle(), psi in angle(), angles in prop::collection::vec(angle(), 4), k in 1u64..=1_000_000,
    ) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let u = conjugated(&pair, &angles);
        let p = pair.power(k).unwrap();
        prop_assert!((u.pow(k).trace().norm() - p.trace_magnitude()).abs() < 1e-9, "k={k}");
    }

    #[test]
    fn closed_entropy_properties(phi in angle(), psi in angle(), g in angle()) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let h = qubit_entropy_closed(&pair).value;
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert_eq!(h, qubit_entropy_closed(&pair.swapped()).value);
        prop_assert!((h - qubit_entropy_closed(&pair.with_global_phase(g)).value).abs() < 1e-9);
        if pair.theta() >= PI / 2.0 {
            prop_assert_eq!(h, 1.0);
        } else {
            prop_assert!(h < 1.0);
        }
    }

    #[test]
    fn verdict_follows_trace(phi in angle(), psi in angle()) {
        let pair = EigenphasePair::new(phi, psi).unwrap();
        let v = verdict_of(&pair);
        let t = pair.trace_magnitude();
        match v.kind {
            VerdictKind::Chaotic => prop_assert!(t < SQRT_2),
            VerdictKind::NonChaotic => prop_assert!(t > SQRT_2),
            VerdictKind::Boundary => prop_assert!((t - SQRT_2).abs() <= BOUNDARY_TOL),
        }
        // chaoticity coincides with maximal entropy away from the boundary
        if v.kind != VerdictKind::Boundary {
            prop_assert_eq!(v.kind == VerdictKind::Chaotic, qubit_entropy_closed(&pair).value == 1.0);
        }
    }

    #[test]
    fn su2_condition_matches_trace(psi in angle()) {
        let pair = EigenphasePair::su2_from_psi(psi).unwrap();
        let v = verdict_of(&pair);
        if v.kind != VerdictKind::Boundary {
            prop_assert_eq!(v.kind == VerdictKind::Chaotic, psi.cos().abs() <= FRAC_1_SQRT_2);
        }
        prop_assert!(pair.phase_sum_residual() < 1e-12);
    }

    #[test]
    fn transition_matrices_are_doubly_stochastic(
        d in 2usize..=3,
        u_angles in prop::collection::vec(angle(), 9),
        b_angles in prop::collection::vec(angle(), 9),
    ) {
        let u = UnitaryD::new(unitary_from_angles(d, &u_angles)).unwrap();
        let basis = PvmBasis::new(unitary_from_angles(d, &b_angles)).unwrap();
        let p = transition_matrix(&u, &basis).unwrap();
        prop_assert!(p.deviation() < 1e-10);
    }

    #[test]
    fn exact_and_float_verdicts_agree(s in spec(), k in 1u64..=200) {
        let exact = exact_verdict_at_order(&s, k).unwrap();
        let float = verdict_at_order(&s.pair(), k).unwrap();
        if exact.kind != VerdictKind::Boundary {
            prop_assert_eq!(exact.kind, float.kind);
        }
        prop_assert!((exact.trace_mag - float.trace_mag).abs() < 1e-9);
    }

    #[test]
    fn idempotency_order_is_minimal(s in spec()) {
        let IdempotencyResult::Order { n } = idempotency_order(&s, u64::MAX).unwrap() else {
            return Err(TestCaseError::fail("rational spec is idempotent"));
        };
        let u = s.to_unitary();
        prop_assert!(u.pow(n).max_abs_diff(&Unitary2::identity()) < 1e-9);
        for m in 1..n.min(500) {
            prop_assert!(u.pow(m).max_abs_diff(&Unitary2::identity()) > 1e-9, "U^{m} = I before {n}");
        }
        for k in [n, 2 * n, 3 * n] {
            let v = exact_verdict_at_order(&s, k).unwrap();
            prop_assert_eq!(v.kind, VerdictKind::NonChaotic);
            prop_assert_eq!(v.trace_mag, 2.0);
        }
    }

    #[test]
    fn rational_phases_normalize(m in -10_000i64..10_000, p in 1i64..500) {
        let r = RationalPhase::new(m, p).unwrap();
        prop_assert!(r.numer() >= 0 && r.numer() < 2 * r.denom());
        prop_assert!((r.radians() - reduce_angle(m as f64 * PI / p as f64)).abs() < 1e-9
            || (r.radians() - reduce_angle(m as f64 * PI / p as f64)).abs() > TAU - 1e-9);
        let n = r.order();
        prop_assert!(r.checked_mul(n).unwrap().is_zero());
    }

    #[test]
    fn chaotic_construction_is_chaotic_at_k(k in 1u64..=5000) {
        let c = build_chaotic_order_k(k).unwrap();
        prop_assert!(k % c.p2 != 0);
        prop_assert!(exact_verdict_at_order(&c.spec, k).unwrap().kind.is_chaotic_or_boundary());
        prop_assert_eq!(c.idempotency, IdempotencyResult::Order { n: 2 * c.p2 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// With `a` even every `s_t` is even, so the phases sum to a multiple of 2π.
    #[test]
    fn quadratic_pairs_are_unimodular(half_a in -6i64..=-1, b in -60i64..=-1, t in 1u64..=40) {
        let seed = QuadraticSeed::new(2 * half_a, b).unwrap();
        prop_assume!(!seed.has_square_discriminant());
        let q = build_quadratic_unitary(&seed, t, &PrecisionPolicy::auto(&seed, t)).unwrap();
        prop_assert!(mod2_distance(q.x_residue + q.y_residue, 0.0) < 1e-9);
        prop_assert!(q.self_check_error <= 2f64.powi(-32));
        prop_assert!(q.residue_width <= 2f64.powi(-32));
        prop_assert!(q.pair.phase_sum_residual() < 1e-9);
    }
}

#[test]
fn unitary_from_angles_is_unitary() {
    for d in [2, 3] {
        let params: Vec<f64> = (0..d * d).map(|i| 0.37 * i as f64 + 0.1).collect();
        let v = unitary_from_angles(d, &params);
        let err = (&v.adjoint() * &v - DMatrix::<Complex64>::identity(d, d)).camax();
        assert!(err < 1e-12);
    }
}
