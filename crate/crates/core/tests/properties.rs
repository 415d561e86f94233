use cpn_sigma::polyring::{XI, XI_BAR};
use cpn_sigma::rational::{mat_norm, CMat, Jet};
use cpn_sigma::sigma::el_residual;
use cpn_sigma::su2rep::{rep_matrix, GroupElement, Spin};
use cpn_sigma::{ladder, project, Error, FieldVec, MPoly, RationalScalar};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const SEED: u64 = 0x5EED_C0DE;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(SEED), ..ProptestConfig::default() }
}

fn small_poly(max_deg: u16, holomorphic: bool) -> impl Strategy<Value = MPoly> {
    let term = (0..=max_deg, 0..=max_deg, -3i32..=3, -3i32..=3);
    prop::collection::vec(term, 1..5).prop_map(move |ts| {
        MPoly::from_terms(
            2,
            ts.into_iter().map(|(a, b, re, im)| {
                let b = if holomorphic { 0 } else { b };
                ([a, b, 0, 0], Complex64::new(re as f64, im as f64))
            }),
        )
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn euler() -> impl Strategy<Value = GroupElement> {
    (0.0f64..std::f64::consts::PI, -6.3f64..6.3, -6.3f64..6.3).prop_map(|(t, p, s)| GroupElement::from_euler(t, p, s))
}

fn scale_of(ps: &[&MPoly]) -> f64 {
    ps.iter().map(|p| p.max_abs_coeff()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_axioms(p in small_poly(3, false), q in small_poly(3, false), r in small_poly(3, false)) {
        let tol = 1e-9 * scale_of(&[&p, &q, &r]).powi(3);
        prop_assert!((&p * &q).approx_eq(&(&q * &p), tol));
        prop_assert!((&(&p * &q) * &r).approx_eq(&(&p * &(&q * &r)), tol));
        prop_assert!((&p * &(&q + &r)).approx_eq(&(&(&p * &q) + &(&p * &r)), tol));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn leibniz_rule(p in small_poly(3, false), q in small_poly(3, false)) {
        for var in [XI, XI_BAR] {
            let lhs = (&p * &q).d(var);
            let rhs = &(&p.d(var) * &q) + &(&p * &q.d(var));
            prop_assert!(lhs.approx_eq(&rhs, 1e-9 * scale_of(&[&p, &q]).powi(2)));
        }
    }

    #[test]
    fn wirtinger_derivatives_commute(p in small_poly(4, false)) {
        prop_assert_eq!(p.d(XI).d(XI_BAR), p.d(XI_BAR).d(XI));
    }

    #[test]
    fn exact_division_recovers_factor(p in small_poly(3, false), q in small_poly(2, false)) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        let back = prod.exact_div(&q, 1e-9 * prod.max_abs_coeff().max(1.0)).unwrap();
        prop_assert!(back.approx_eq(&p, 1e-8 * scale_of(&[&p, &q])));
    }

    #[test]
    fn conjugation_matches_evaluation(p in small_poly(3, false), z in point()) {
        let a = p.conj().eval(&[z]);
        let b = p.eval(&[z]).conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        prop_assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn canonical_form_is_idempotent(p in small_poly(3, false), q in small_poly(2, false), z in point()) {
        prop_assume!(!q.is_zero());
        let s = RationalScalar::new(&p * &MPoly::one_plus_r(2), &q * &MPoly::one_plus_r(2));
        let c1 = s.canonical();
        prop_assert_eq!(c1.canonical(), c1.clone());
        let d = q.eval(&[z]);
        prop_assume!(d.norm() > 1e-3);
        let want = p.eval(&[z]) / d;
        prop_assert!((c1.eval(z) - want).norm() <= 1e-9 * (1.0 + want.norm()));
    }

    #[test]
    fn projector_of_random_field(comps in prop::collection::vec(small_poly(3, true), 2..5), z in point()) {
        let f = FieldVec::new(comps);
        prop_assume!(f.eval(z).norm() > 1e-3);
        let p = project(&f).unwrap().eval(z);
        let n = p.nrows();
        prop_assert!(mat_norm(&(&p * &p - &p)) <= 1e-10);
        prop_assert!(mat_norm(&(p.adjoint() - &p)) <= 1e-12);
        prop_assert!((p.trace() - 1.0).norm() <= 1e-12);
        prop_assert_eq!(n, f.dim());
    }

    #[test]
    fn representation_is_homomorphism(g in euler(), h in euler(), twice in 0u32..=5) {
        let j = Spin::from_twice(twice);
        let lhs = rep_matrix(j, &g.mul(&h));
        let rhs = rep_matrix(j, &g) * rep_matrix(j, &h);
        prop_assert!(mat_norm(&(lhs - rhs)) <= 1e-12);
    }

    #[test]
    fn representation_is_unitary(g in euler(), twice in 0u32..=5) {
        let t = rep_matrix(Spin::from_twice(twice), &g);
        let n = t.nrows();
        prop_assert!(mat_norm(&(t.adjoint() * &t - CMat::identity(n, n))) <= 1e-12);
        let inv = rep_matrix(Spin::from_twice(twice), &g.inverse());
        prop_assert!(mat_norm(&(inv - t.adjoint())) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn ladder_members_are_harmonic(
        comps in prop::collection::vec(small_poly(3, true), 2..4),
        z in point(),
    ) {
        let f = FieldVec::new(comps);
        let n = f.dim() - 1;
        match ladder(&f, n) {
            Ok(seq) => {
                for p in &seq.projectors {
                    prop_assert!(el_residual(&Jet::new(p), &[z]) <= 1e-8);
                }
            }
            Err(Error::LadderTerminated { .. } | Error::ConstantField | Error::NotHolomorphic) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
