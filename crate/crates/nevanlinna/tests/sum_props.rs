mod common;

use common::suites::sum_pair as pair;
use common::*;
use nevanlinna::krein::Subspace;
use nevanlinna::linalg::Matrix;
use nevanlinna::ratfun::{negative_squares_lower_bound, upper_lattice, SamplePlan};
use nevanlinna::realization::{canonical_model, realization_from_partial_fractions, ModelBudget};
use nevanlinna::sumcriteria::{build_sum, singular_directions, solve_eq53, theorem8_verdict, SolutionKind};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inertia_identity_and_subadditivity(seed in 0u64..100_000) {
        let r = common::suites::inertia_identity(seed, 1);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn minimality_iff_full_l1(seed in 0u64..100_000) {
        let (q1, q2) = pair(seed);
        let b = ModelBudget::default();
        let rep = build_sum(&canonical_model(&q1, &b).unwrap(), &canonical_model(&q2, &b).unwrap()).unwrap();
        let full = Subspace::full(rep.tilde_space().dim());
        let l1_all = rep.decomposition.l1 == rep.lbar && rep.lbar == full;
        prop_assert_eq!(rep.is_minimal(), l1_all);
    }

    #[test]
    fn special_solutions_are_the_isotropic_preimage(seed in 0u64..100_000) {
        let (q1, q2) = pair(seed);
        let b = ModelBudget::default();
        let rep = build_sum(&canonical_model(&q1, &b).unwrap(), &canonical_model(&q2, &b).unwrap()).unwrap();
        let q = q1.add(&q2).unwrap();
        let p = q.size();
        let z = upper_lattice().find(|z| !q1.is_pole(z) && !q2.is_pole(z)).unwrap();
        let g = rep.gamma_tilde_z(&z).unwrap();
        let l0 = &rep.decomposition.l0;
        let l0m = if l0.is_zero() { Matrix::zeros(g.rows(), 0) } else { l0.basis_matrix().scale(&-nevanlinna::linalg::Scalar::one()) };
        let stacked = Matrix::hstack(g.rows(), &[&g, &l0m]);
        let pre: Vec<_> = stacked.kernel_basis().into_iter().map(|v| v[..p].to_vec()).collect();
        prop_assert_eq!(Subspace::span(p, &pre), Subspace::span(p, &singular_directions(&q)));
        for s in solve_eq53(&q1, &q2) {
            let img = rep.gamma_tilde_z(&s.z1).unwrap().mul_vec(&s.h1);
            prop_assert!(l0.contains(&img));
            prop_assert_eq!(s.kind == SolutionKind::Nontrivial, !nevanlinna::linalg::vec_is_zero(&img));
        }
    }

    #[test]
    fn verdict_routes_agree(seed in 0u64..100_000) {
        let (q1, q2) = pair(seed);
        let v = theorem8_verdict(&q1, &q2).unwrap();
        prop_assert!(v.cross_check.agree, "{:?}", v.cross_check.violations);
        prop_assert_eq!(v.preserved, v.kappa == v.kappa1 + v.kappa2);
        prop_assert!(v.kappa <= v.kappa1 + v.kappa2);
    }

    #[test]
    fn canonical_model_soundness(seed in 0u64..100_000) {
        let mut r = rng(seed);
        let p = r.gen_range(1..=2);
        let q = nevanlinna_function(&mut r, p, 2);
        let m = canonical_model(&q, &ModelBudget::default()).unwrap();
        prop_assert_eq!(m.transfer_function().unwrap(), q.clone());
        prop_assert!(m.is_minimal());
        let oracle = realization_from_partial_fractions(&q).unwrap();
        prop_assert_eq!(oracle.transfer_function().unwrap(), q.clone());
        let oracle_min = oracle.compress().unwrap();
        prop_assert_eq!(oracle_min.kappa(), m.kappa());
        prop_assert_eq!(oracle_min.dim(), m.dim());
        prop_assert!(negative_squares_lower_bound(&q, &SamplePlan::default_for(&q)).unwrap() <= m.kappa());
    }
}
