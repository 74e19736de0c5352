use std::f64::consts::PI;

use liouville_defect::bundle::{
    build_cover, cocycle_check, quotient_build_ordered, ChartOrder, TransitionAtlas,
};
use liouville_defect::cli::RunConfig;
use liouville_defect::gauge::{
    defect_residuals, flat_time_derivatives, solve_gauss_parameters, verify_gauge_relation,
};
use liouville_defect::lie::{adjoint, commutator, exp_alg, GroupElement, LieElement};
use liouville_defect::sim::stepper::closure_at;
use liouville_defect::sim::{bulk_potential, BorderFunction, Jet, JetPair};
use proptest::prelude::*;

fn element(range: f64) -> impl Strategy<Value = LieElement> {
    (-range..range, -range..range, -range..range).prop_map(|(a, b, c)| LieElement::new(a, b, c))
}

fn nonzero(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

fn border() -> impl Strategy<Value = BorderFunction> {
    (nonzero(0.2, 3.0), nonzero(0.1, 3.0), nonzero(0.5, 15.0))
        .prop_map(|(mu, lambda, k)| BorderFunction::new(mu, k, lambda).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_and_antisymmetry(a in element(3.0), b in element(3.0), c in element(3.0)) {
        let j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
        prop_assert!(j.max_abs() < 1e-12);
        prop_assert_eq!(commutator(a, b), -commutator(b, a));
    }

    #[test]
    fn adjoint_is_a_homomorphism(x in element(1.0), y in element(1.0), a in element(2.0), b in element(2.0)) {
        let (g, h) = (exp_alg(x), exp_alg(y));
        let lhs = adjoint(&g, commutator(a, b)).unwrap();
        let rhs = commutator(adjoint(&g, a).unwrap(), adjoint(&g, b).unwrap());
        prop_assert!((lhs - rhs).max_abs() < 1e-10);
        let composed = adjoint(&(g * h), a).unwrap();
        let nested = adjoint(&g, adjoint(&h, a).unwrap()).unwrap();
        prop_assert!((composed - nested).max_abs() < 1e-10);
    }

    #[test]
    fn exponential_is_unimodular_with_inverse(x in element(1.5)) {
        let g = exp_alg(x);
        prop_assert!((g.det() - 1.0).abs() < 1e-12);
        prop_assert!((g * exp_alg(-x)).distance_from_identity() < 1e-12);
        prop_assert!(g.inverse().distance(&exp_alg(-x)) < 1e-12);
    }

    #[test]
    fn border_identities(b in border(), pp in -3.0..3.0f64, pm in -3.0..3.0f64) {
        let c = b.k / (2.0 * PI);
        let lhs = 2.0 * b.db_plus(pp) * b.db_minus(pm);
        let rhs = -c * c * b.mu * b.mu * (-pp).exp() * pm.sinh();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        let (p1, p2) = (0.5 * (pp + pm), 0.5 * (pp - pm));
        let (g1, g2) = b.grad(p1, p2);
        let terms = [
            2.0 * PI / b.k * g1 * g1,
            -2.0 * PI / b.k * g2 * g2,
            bulk_potential(p1, b.mu, b.k),
            -bulk_potential(p2, b.mu, b.k),
        ];
        let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
        prop_assert!(terms.iter().sum::<f64>().abs() <= 1e-12 * scale);
    }

    #[test]
    fn closure_satisfies_frozen_backlund(
        b in border(),
        phi in (-2.0..2.0f64, -2.0..2.0f64),
        pi in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let (x1, x2) = closure_at(&b, phi.0, phi.1, pi.0, pi.1);
        let pair = JetPair::new(
            Jet { phi: phi.0, phi_t: pi.0, phi_x: x1, ..Jet::default() },
            Jet { phi: phi.1, phi_t: pi.1, phi_x: x2, ..Jet::default() },
        );
        let r = defect_residuals(&pair, &b);
        let scale = 1.0 + x1.abs().max(x2.abs());
        prop_assert!(r.d1.abs() < 1e-12 * scale && r.d2.abs() < 1e-12 * scale);
    }

    #[test]
    fn gauge_relation_on_flat_configurations(b in border(), p1 in -3.0..3.0f64, p2 in -3.0..3.0f64) {
        let (t1, t2) = flat_time_derivatives(&b, p1, p2);
        let jet = |phi, phi_t| Jet { phi, phi_t, ..Jet::default() };
        let r = verify_gauge_relation(&JetPair::new(jet(p1, t1), jet(p2, t2)), &b).unwrap();
        prop_assert!(r.max_abs() < 1e-10 * (1.0 + t1.abs() + t2.abs()));
    }

    #[test]
    fn chart_membership(r in 0.1..5.0f64, n in 8usize..200) {
        let cover = build_cover(r, n).unwrap();
        for p in &cover.points {
            prop_assert!(p.in_u1 || p.in_u2);
            prop_assert!(((p.t * p.t + p.x * p.x).sqrt() - r).abs() < 1e-12 * r);
            let south = p.t == 0.0 && p.x == -r;
            let north = p.t == 0.0 && p.x == r;
            prop_assert_eq!(p.in_u1, !south);
            prop_assert_eq!(p.in_u2, !north);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gauss_parameters_recovered(mu in nonzero(0.2, 3.0), lambda in nonzero(0.1, 3.0)) {
        let samples = [(0.1, -0.3), (0.7, 0.2), (-0.5, 1.1), (1.3, -0.9), (-1.2, -1.4), (0.4, 0.9)];
        let p = solve_gauss_parameters(mu, lambda, &samples).unwrap();
        prop_assert!((p.lambda1 - 2.0 * lambda).abs() < 1e-8);
        prop_assert!(p.lambda2.abs() < 1e-8 && p.lambda3.abs() < 1e-8);
    }

    #[test]
    fn quotient_is_order_free_and_consistent(
        c in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
        n in 8usize..64,
        fibre in element(1.0),
    ) {
        let cover = build_cover(1.0, n).unwrap();
        let atlas = TransitionAtlas::custom(cover, |t, x| {
            exp_alg(LieElement::new(c.0 * x, c.1 * t, c.2 * t * x))
        })
        .unwrap();
        let report = cocycle_check(&atlas);
        prop_assert!(report.pass);
        for (a, b) in atlas.t12.iter().zip(&atlas.t21) {
            prop_assert!((*a * *b).distance_from_identity() < 1e-12);
        }
        let fibres = [GroupElement::identity(), exp_alg(fibre)];
        let q1 = quotient_build_ordered(&atlas, &fibres, ChartOrder::FirstThenSecond).unwrap();
        let q2 = quotient_build_ordered(&atlas, &fibres, ChartOrder::SecondThenFirst).unwrap();
        prop_assert_eq!(q1.canonical_classes(&atlas, None), q2.canonical_classes(&atlas, None));
        prop_assert!(q1.transition_deviation < 1e-12);
        for (class, &p) in q1.classes.iter().zip(&q1.projection) {
            prop_assert!(class.iter().all(|&e| q1.elements[e].point == p));
        }
    }

    #[test]
    fn config_overrides_round_trip(dx_exp in 4u32..8, lambda in nonzero(0.1, 3.0)) {
        let mut cfg = RunConfig::default();
        let dx = 1.0 / f64::powi(2.0, dx_exp as i32);
        cfg.set_override(&format!("dx={dx}")).unwrap();
        cfg.set_override(&format!("lambda = {lambda}")).unwrap();
        prop_assert_eq!(cfg.dx, dx);
        prop_assert_eq!(cfg.lambda, lambda);
        prop_assert!(cfg.validate().is_ok());
    }
}
