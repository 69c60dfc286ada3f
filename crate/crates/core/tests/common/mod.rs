//! Shared generators and property checks for the integration tests and the acceptance run.
#![allow(dead_code)]

use hlat_core::enumerate::{coset_min, naive_box_radius, naive_coset_min, EnumBudget};
use hlat_core::invariants::{eta, eta_polynomial, eta_terms, Limits};
use hlat_core::lattice::{DualVector, Lattice, LatticeVector, Sign};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

/// `B^T B + I` for a random integer `B`: always positive definite.
pub fn lattice_strategy(max_rank: usize) -> impl Strategy<Value = Lattice> {
    (1..=max_rank).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |b| {
            let gram: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum::<i64>() + i64::from(i == j))
                        .collect()
                })
                .collect();
            Lattice::from_gram_i64(&gram, Sign::Negative).expect("positive definite")
        })
    })
}

pub fn lattice_and_vector(max_rank: usize, entry: i64) -> impl Strategy<Value = (Lattice, LatticeVector)> {
    lattice_strategy(max_rank).prop_flat_map(move |l| {
        let n = l.rank();
        (Just(l), prop::collection::vec(-entry..=entry, n).prop_map(LatticeVector))
    })
}

/// A lattice, an extremal `w` (a coset minimizer) of a non-zero class, a second minimizer
/// of the same class, and a functional `a`.
pub fn extremal_case(max_rank: usize) -> impl Strategy<Value = (Lattice, LatticeVector, LatticeVector, DualVector)> {
    lattice_and_vector(max_rank, 3)
        .prop_filter("w must be outside 2L", |(_, w)| w.0.iter().any(|x| x % 2 != 0))
        .prop_flat_map(|(l, w)| {
            let n = l.rank();
            let min = coset_min(&l, &w, &EnumBudget::default()).expect("small search");
            let k = min.minimizers.len();
            (
                Just(l),
                Just(min.minimizers),
                0..k,
                0..k,
                prop::collection::vec(-3i64..=3, n).prop_map(DualVector),
            )
        })
        .prop_map(|(l, mins, i, j, a)| (l, mins[i].clone(), mins[j].clone(), a))
}

/// [`extremal_case`] restricted to `w` of even norm.
pub fn even_extremal_case(max_rank: usize) -> impl Strategy<Value = (Lattice, LatticeVector, LatticeVector, DualVector)> {
    extremal_case(max_rank).prop_filter("w^2 must be even", |(l, w, _, _)| !l.norm(w).unwrap().bit(0))
}

pub fn deterministic_runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn budget() -> EnumBudget {
    EnumBudget::default()
}

fn norm_parity(l: &Lattice, w: &LatticeVector) -> u32 {
    u32::from(l.norm(w).unwrap().bit(0))
}

/// `coset_min` agrees with the box search in minimum and minimizer set.
pub fn check_oracle(l: &Lattice, w: &LatticeVector) -> Result<(), TestCaseError> {
    let fast = coset_min(l, w, &budget()).unwrap();
    let radius = naive_box_radius(l, w).unwrap();
    let slow = naive_coset_min(l, w, radius).unwrap();
    prop_assert_eq!(&fast.min_norm, &slow.min_norm);
    prop_assert_eq!(&fast.minimizers, &slow.minimizers);
    Ok(())
}

/// Moving to another extremal representative `w' = w + 2l` multiplies eta by `(-1)^{l^2}`.
pub fn check_representative_sign(
    l: &Lattice,
    w: &LatticeVector,
    w2: &LatticeVector,
    a: &DualVector,
) -> Result<(), TestCaseError> {
    let ell = LatticeVector(w2.0.iter().zip(&w.0).map(|(x, y)| (x - y) / 2).collect());
    let sign: i64 = if l.norm(&ell).unwrap().bit(0) { -1 } else { 1 };
    for m in [norm_parity(l, w), norm_parity(l, w) + 2] {
        let e1 = eta(l, w, a, m, &budget()).unwrap();
        let e2 = eta(l, w2, a, m, &budget()).unwrap();
        prop_assert_eq!(e2, e1 * sign);
    }
    Ok(())
}

/// For `w` of even norm outside `2L`, `z` and `-z` carry the same sign, so the `m = 0`
/// sum is unchanged under `w -> -w`.
pub fn check_evenness(l: &Lattice, w: &LatticeVector) -> Result<(), TestCaseError> {
    prop_assume!(norm_parity(l, w) == 0);
    let terms = eta_terms(l, w, &budget()).unwrap();
    for (s, z) in &terms {
        let neg = z.neg();
        let partner = terms.iter().find(|(_, y)| *y == neg);
        prop_assert!(partner.is_some(), "-z missing from the support");
        prop_assert_eq!(partner.unwrap().0, *s);
    }
    let zero = DualVector::zeros(l.rank());
    prop_assert_eq!(eta(l, w, &zero, 0, &budget()).unwrap(), eta(l, &w.neg(), &zero, 0, &budget()).unwrap());
    Ok(())
}

/// `eta(L1 + L2, w1 + w2, a + 0, m) = eta(L1, w1, a, m) * eta(L2, w2)` for extremal
/// `w1`, `w2` with `w2` of even norm.
pub fn check_multiplicativity(
    (l1, w1, a): (&Lattice, &LatticeVector, &DualVector),
    (l2, w2): (&Lattice, &LatticeVector),
) -> Result<(), TestCaseError> {
    prop_assume!(norm_parity(l2, w2) == 0);
    let sum = l1.direct_sum(l2).unwrap();
    let w = w1.concat(w2);
    let a_sum = a.concat(&DualVector::zeros(l2.rank()));
    let m = norm_parity(l1, w1) + 2;
    let lhs = eta(&sum, &w, &a_sum, m, &budget()).unwrap();
    let rhs = eta(l1, w1, a, m, &budget()).unwrap() * eta(l2, w2, &DualVector::zeros(l2.rank()), 0, &budget()).unwrap();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// The expanded polynomial evaluates to the direct sum.
pub fn check_polynomial_agreement(l: &Lattice, w: &LatticeVector, a: &DualVector) -> Result<(), TestCaseError> {
    let limits = Limits::default();
    let p = norm_parity(l, w);
    for m in [p, p + 2, p + 4] {
        let poly = eta_polynomial(l, w, m, &limits).unwrap();
        prop_assert_eq!(poly.eval(a).unwrap(), eta(l, w, a, m, &budget()).unwrap());
    }
    Ok(())
}
