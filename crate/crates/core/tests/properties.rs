mod common;

use common::*;
use hlat_core::detline::{self, trials, LinMap, WedgeOrder};
use hlat_core::enumerate::{coset_min, exact_cholesky, EnumBudget};
use hlat_core::hbounds::{certificate_bound, surgery_upper};
use hlat_core::lattice::LatticeVector;
use hlat_core::linalg::QMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn budget() -> EnumBudget {
    EnumBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cholesky_reconstructs_gram(l in lattice_strategy(6)) {
        let c = exact_cholesky(l.gram()).unwrap();
        let gram = QMatrix::from_rows(
            l.gram().iter().map(|r| r.iter().map(|x| x.clone().into()).collect()).collect(),
        );
        prop_assert_eq!(c.reconstruct(), gram);
    }

    #[test]
    fn coset_min_matches_oracle((l, w) in lattice_and_vector(4, 3)) {
        check_oracle(&l, &w)?;
    }

    #[test]
    fn coset_min_depends_only_on_class((l, w) in lattice_and_vector(5, 3), u in prop::collection::vec(-2i64..=2, 5)) {
        let u = LatticeVector(u[..l.rank()].to_vec());
        let a = coset_min(&l, &w, &budget()).unwrap();
        let b = coset_min(&l, &w.shifted_by_twice(&u), &budget()).unwrap();
        prop_assert_eq!(a.min_norm, b.min_norm);
        prop_assert_eq!(a.minimizers, b.minimizers);
    }

    #[test]
    fn minimizers_closed_under_negation((l, w) in lattice_and_vector(5, 3)) {
        let r = coset_min(&l, &w, &budget()).unwrap();
        for z in &r.minimizers {
            prop_assert!(r.minimizers.binary_search(&z.neg()).is_ok());
            prop_assert_eq!(l.norm(z).unwrap(), r.min_norm.clone());
        }
        prop_assert_eq!(coset_min(&l, &w.neg(), &budget()).unwrap().minimizers, r.minimizers);
    }

    #[test]
    fn coset_min_is_additive((l1, w1) in lattice_and_vector(3, 3), (l2, w2) in lattice_and_vector(3, 3)) {
        let sum = l1.direct_sum(&l2).unwrap();
        let a = coset_min(&l1, &w1, &budget()).unwrap();
        let b = coset_min(&l2, &w2, &budget()).unwrap();
        let s = coset_min(&sum, &w1.concat(&w2), &budget()).unwrap();
        prop_assert_eq!(s.min_norm, a.min_norm + b.min_norm);
        prop_assert_eq!(s.minimizers.len(), a.minimizers.len() * b.minimizers.len());
    }

    #[test]
    fn eta_representative_sign((l, w, w2, a) in extremal_case(4)) {
        check_representative_sign(&l, &w, &w2, &a)?;
    }

    #[test]
    fn eta_even_under_negation((l, w, _w2, _a) in even_extremal_case(4)) {
        check_evenness(&l, &w)?;
    }

    #[test]
    fn eta_multiplicative((l1, w1, _x, a) in extremal_case(3), (l2, w2, _y, _b) in even_extremal_case(3)) {
        check_multiplicativity((&l1, &w1, &a), (&l2, &w2))?;
    }

    #[test]
    fn eta_polynomial_evaluates((l, w, _w2, a) in extremal_case(4)) {
        check_polynomial_agreement(&l, &w, &a)?;
    }

    #[test]
    fn bound_steps_down_by_ceilings(norm in 0i64..200, m in 0u32..8, g in 0u64..20, b in 1u64..6) {
        let n = BigInt::from(norm);
        let base = certificate_bound(&n, m, g, b);
        prop_assert_eq!(certificate_bound(&n, m, g, b + 1), &base - 1);
        let step = i64::from(g % 2 == 0);
        prop_assert_eq!(certificate_bound(&n, m, g + 1, b), &base - step);
        prop_assert_eq!(certificate_bound(&n, m, g + 2, b), &base - 1);
    }

    #[test]
    fn surgery_window(g in 0u64..1000) {
        let r = surgery_upper(g);
        prop_assert_eq!(r.lower, Some(BigInt::from(0)));
        prop_assert_eq!(r.upper, Some(BigInt::from(g.div_ceil(2))));
    }

    #[test]
    fn stabilization_preserves_index(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, f, _) = trials::square_instance(&mut rng, 5);
        prop_assert_eq!(s.stabilized(&f).unwrap().index(), s.index());
    }

    #[test]
    fn square_sign_holds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, f1, f2) = trials::square_instance(&mut rng, 5);
        for order in [WedgeOrder::SubFirst, WedgeOrder::QuotientFirst] {
            prop_assert!(detline::verify_square_sign(&s, &f1, &f2, order).unwrap().holds);
        }
    }

    #[test]
    fn gamma_is_functorial(seed in any::<u64>(), eps in prop::array::uniform3(0u8..=1)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, g1) = trials::gamma_instance(&mut rng, 4);
        let g2 = trials::random_map(&mut rng, t.target_dim(), 2, 2);
        let p1 = g1.source_dim();
        let tg1 = t.stabilized(&g1).unwrap();
        let t_g1 = t.join(&g1).unwrap();
        let t_g12 = t_g1.join(&g2).unwrap();
        let fa = detline::auxiliary(&t, eps[0], false);
        let fb = detline::auxiliary(&t_g1, eps[1], false);
        let fc = detline::auxiliary(&t_g12, eps[2], false);
        let order = WedgeOrder::SubFirst;
        let first = detline::gamma_patched(&t, &g1, &fa, &fb, order).unwrap();
        let second = detline::gamma_patched(&tg1, &g2.padded(p1), &fb.padded(p1), &fc.padded(p1), order).unwrap();
        let direct = detline::gamma_patched(&t, &g1.join(&g2).unwrap(), &fa, &fc, order).unwrap();
        prop_assert_eq!(first.then(&second), direct);
    }

    #[test]
    fn overlap_sign(seed in any::<u64>(), extra in 0usize..3) {
        // Two surjective stabilizations f1, f2 of T compared inside det(T_{f1 f2}).
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, _) = trials::gamma_instance(&mut rng, 4);
        let w = t.target_dim();
        let f1 = detline::auxiliary(&t, (extra % 2) as u8, false);
        let f2 = detline::auxiliary(&t, 0, true);
        let (n1, n2, d) = (f1.source_dim(), f2.source_dim(), t.coker_dim());
        let order = WedgeOrder::SubFirst;
        let route1 = detline::stabilize(&t, &f1, order).unwrap()
            .then(&detline::stabilize(&t.stabilized(&f1).unwrap(), &f2.padded(n1), order).unwrap());
        let route2 = detline::stabilize(&t, &f2, order).unwrap()
            .then(&detline::stabilize(&t.stabilized(&f2).unwrap(), &f1.padded(n2), order).unwrap());
        let direct12 = detline::stabilize(&t, &f1.join(&f2).unwrap(), order).unwrap();
        let direct21 = detline::stabilize(&t, &f2.join(&f1).unwrap(), order).unwrap();
        // continuous part: the direct maps into the two block orders
        let continuous = direct12.ratio(&direct21);
        let sign = if ((n1 + n2) * d) % 2 == 1 { -1 } else { 1 };
        let overlap = route1.ratio(&route2);
        prop_assert_eq!(overlap, continuous * num_rational::BigRational::from_integer(sign.into()));
        prop_assert_eq!(w, t.target_dim());
    }
}

#[test]
fn wedge_orders_both_verify() {
    let s = LinMap::zero(3, 1);
    let f1 = LinMap::from_i64(3, 1, &[1, 0, 0]);
    let f2 = LinMap::zero(3, 3);
    for order in [WedgeOrder::SubFirst, WedgeOrder::QuotientFirst] {
        let r = detline::verify_square_sign(&s, &f1, &f2, order).unwrap();
        assert_eq!((r.dim_l1, r.dim_k2), (1, 3));
        assert!(r.holds);
    }
}
