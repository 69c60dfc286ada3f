//! Bounds on `h(Y)` from lattice data, and the certified values for the Brieskorn
//! family `Sigma(2, 2k-1, 4k-3)`.
//!
//! Two lower bounds are provided:
//!
//! * from an explicit certificate `(w, m[, a])`:
//!   `h >= ceil((|w^2| - m)/4 - ceil(g/2) - (b_plus - 1))`;
//! * from the invariant: `h >= e(L) - ceil(g/2)` (with `b_plus = 1`).
//!
//! Every certificate is re-verified; a failed check is an error, never a weaker claim.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{self, Limits};
use crate::lattice::{AmbientVector, DualVector, Lattice, LatticeVector};

/// Witness data `(w, m, a)` for an eta-based bound. Without `a`, the whole eta
/// polynomial must be non-zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaCertificate {
    pub w: LatticeVector,
    pub m: u32,
    pub a: Option<DualVector>,
}

#[derive(Clone, Debug)]
pub struct HBoundInput {
    pub genus: u64,
    pub b_plus: u64,
    pub lattice: Lattice,
    pub certificate: Option<EtaCertificate>,
}

/// What was checked to justify a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundCertificate {
    Eta {
        w: LatticeVector,
        #[serde(serialize_with = "crate::bigjson::serialize")]
        norm: BigInt,
        m: u32,
        a: Option<DualVector>,
        /// `eta(L, w, a, m)` when `a` was given (or `m = 0`).
        #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_big")]
        eta: Option<BigInt>,
        /// Number of non-zero monomials of the eta polynomial when `a` was absent.
        #[serde(skip_serializing_if = "Option::is_none")]
        polynomial_terms: Option<usize>,
        genus: u64,
        b_plus: u64,
    },
    EInvariant { e: i64, genus: u64 },
    Surgery { genus: u64 },
    Brieskorn {
        k: u64,
        lattice: String,
        w_ambient: Vec<i64>,
        #[serde(serialize_with = "crate::bigjson::serialize")]
        norm: BigInt,
        #[serde(serialize_with = "crate::bigjson::serialize")]
        eta: BigInt,
        knot_genus: u64,
    },
}

fn opt_big<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::bigjson::serialize(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HBoundResult {
    #[serde(serialize_with = "opt_big")]
    pub lower: Option<BigInt>,
    #[serde(serialize_with = "opt_big")]
    pub upper: Option<BigInt>,
    /// Present when `lower == upper`.
    #[serde(serialize_with = "opt_big")]
    pub value: Option<BigInt>,
    pub certificate: BoundCertificate,
}

impl HBoundResult {
    fn new(lower: Option<BigInt>, upper: Option<BigInt>, certificate: BoundCertificate) -> Self {
        let value = match (&lower, &upper) {
            (Some(l), Some(u)) if l == u => Some(l.clone()),
            _ => None,
        };
        HBoundResult { lower, upper, value, certificate }
    }
}

fn ceil_half(g: u64) -> BigInt {
    BigInt::from(g.div_ceil(2))
}

fn ceil_rational(x: &BigRational) -> BigInt {
    x.numer().div_ceil(x.denom())
}

/// `ceil((norm - m)/4 - ceil(g/2) - (b_plus - 1))`, evaluated exactly.
pub fn certificate_bound(norm: &BigInt, m: u32, genus: u64, b_plus: u64) -> BigInt {
    let x = BigRational::new(norm - BigInt::from(m), BigInt::from(4))
        - BigRational::from_integer(ceil_half(genus))
        - BigRational::from_integer(BigInt::from(b_plus) - 1);
    ceil_rational(&x)
}

pub fn h_lower_from_certificate(input: &HBoundInput, limits: &Limits) -> Result<HBoundResult> {
    let HBoundInput { genus, b_plus, lattice, certificate } = input;
    let cert = certificate
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("a certificate (w, m) is required".into()))?;
    if *b_plus == 0 {
        return Err(Error::InvalidInput("b_plus must be at least 1".into()));
    }
    if !lattice.is_unimodular() {
        return Err(Error::NotUnimodular(format!("determinant {}", lattice.det())));
    }
    let w = &cert.w;
    let norm = lattice.norm(w)?;
    let min = invariants::coset_minimum(lattice, w, &limits.budget)?;
    if min != norm {
        return Err(Error::NotExtremal { norm: norm.to_string(), min_norm: min.to_string() });
    }
    let (eta, polynomial_terms) = match &cert.a {
        Some(a) => {
            let value = invariants::eta(lattice, w, a, cert.m, &limits.budget)?;
            if value.is_zero() {
                return Err(Error::EtaVanishes);
            }
            (Some(value), None)
        }
        None => {
            let poly = invariants::eta_polynomial(lattice, w, cert.m, limits)?;
            if poly.is_zero() {
                return Err(Error::EtaVanishes);
            }
            (poly.constant_value(), Some(poly.coeffs().len()))
        }
    };
    let lower = certificate_bound(&norm, cert.m, *genus, *b_plus);
    let certificate = BoundCertificate::Eta {
        w: w.clone(),
        norm,
        m: cert.m,
        a: cert.a.clone(),
        eta,
        polynomial_terms,
        genus: *genus,
        b_plus: *b_plus,
    };
    Ok(HBoundResult::new(Some(lower), None, certificate))
}

/// `h(Y) >= e(L) - ceil(g/2)`.
pub fn h_lower_from_e(lattice: &Lattice, genus: u64, limits: &Limits) -> Result<HBoundResult> {
    let cert = invariants::e_invariant(lattice, limits)?;
    let lower = BigInt::from(cert.value) - ceil_half(genus);
    Ok(HBoundResult::new(Some(lower), None, BoundCertificate::EInvariant { e: cert.value, genus }))
}

/// Bounds `(0, ceil(g/2))` on the change of `h` under the surgery along a slice surface of
/// genus `g`.
pub fn surgery_upper(genus: u64) -> HBoundResult {
    HBoundResult::new(Some(BigInt::zero()), Some(ceil_half(genus)), BoundCertificate::Surgery { genus })
}

/// `h(Sigma(2, 2k-1, 4k-3)) = floor(k/2)`, certified by an extremal vector of `Gamma_{4k}`
/// (lower bound) and the genus `k-1` of the `(2, 2k-1)` torus knot (upper bound).
pub fn brieskorn_h(k: u64, limits: &Limits) -> Result<HBoundResult> {
    if k < 2 {
        return Err(Error::KTooSmall(k as i64));
    }
    let n = usize::try_from(4 * k).map_err(|_| Error::InvalidInput("k too large".into()))?;
    if n > limits.rank_guard {
        return Err(Error::RankTooLarge { rank: n, limit: limits.rank_guard });
    }
    let lattice = Lattice::gamma(n)?;
    let ell = (k / 2) as usize;
    let ambient: Vec<i64> = (0..n).map(|i| i64::from(i < 4 * ell)).collect();
    let w = lattice.ambient_to_basis(&AmbientVector::from_integers(&ambient))?;
    let norm = lattice.norm(&w)?;
    if invariants::coset_minimum(&lattice, &w, &limits.budget)? != norm {
        return Err(Error::CertificateFailed("Brieskorn witness is not extremal".into()));
    }
    let eta = invariants::eta(&lattice, &w, &DualVector::zeros(n), 0, &limits.budget)?;
    if eta.is_zero() {
        return Err(Error::CertificateFailed("Brieskorn witness has vanishing eta".into()));
    }
    let lower = certificate_bound(&norm, 0, 0, 1);
    let knot_genus = k - 1;
    let upper = ceil_half(knot_genus);
    let expected = BigInt::from(k / 2);
    if lower != expected || upper != expected {
        return Err(Error::CertificateFailed(format!(
            "bounds {lower}..{upper} do not pin down {expected}"
        )));
    }
    let certificate = BoundCertificate::Brieskorn {
        k,
        lattice: format!("gamma:{n}"),
        w_ambient: ambient,
        norm,
        eta,
        knot_genus,
    };
    Ok(HBoundResult::new(Some(lower), Some(upper), certificate))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCheck {
    pub k: u32,
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub base_eta: BigInt,
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub e8_eta: BigInt,
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub sum_eta: BigInt,
    pub holds: bool,
}

/// `eta(base + k E8, w + q + ... + q, a + 0, m) = eta(base, w, a, m) * eta(E8, q)^k` with
/// `q = e1+e2+e3+e4` and `|eta(E8, q)| = 16`.
pub fn e8_factor_check(
    k: u32,
    base: &Lattice,
    w: &LatticeVector,
    a: &DualVector,
    m: u32,
    limits: &Limits,
) -> Result<FactorCheck> {
    let rank = base.rank() + 8 * k as usize;
    if rank > limits.rank_guard {
        return Err(Error::RankTooLarge { rank, limit: limits.rank_guard });
    }
    let e8 = Lattice::e8();
    let q = e8.ambient_to_basis(&AmbientVector::from_integers(&[1, 1, 1, 1, 0, 0, 0, 0]))?;
    let e8_eta = invariants::eta(&e8, &q, &DualVector::zeros(8), 0, &limits.budget)?;
    let base_eta = invariants::eta(base, w, a, m, &limits.budget)?;

    let mut sum = base.clone();
    let mut sum_w = w.clone();
    let mut sum_a = a.clone();
    for _ in 0..k {
        sum = sum.direct_sum(&e8)?;
        sum_w = sum_w.concat(&q);
        sum_a = sum_a.concat(&DualVector::zeros(8));
    }
    let sum_eta = invariants::eta(&sum, &sum_w, &sum_a, m, &limits.budget)?;
    let holds = e8_eta.magnitude() == &16u32.into() && sum_eta == &base_eta * e8_eta.pow(k);
    Ok(FactorCheck { k, base_eta, e8_eta, sum_eta, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8_cert(genus: u64, b_plus: u64) -> HBoundInput {
        let lattice = Lattice::e8();
        let w = lattice.ambient_to_basis(&AmbientVector::from_integers(&[1, 1, 1, 1, 0, 0, 0, 0])).unwrap();
        HBoundInput { genus, b_plus, lattice, certificate: Some(EtaCertificate { w, m: 0, a: None }) }
    }

    fn lower(r: &HBoundResult) -> i64 {
        r.lower.as_ref().unwrap().try_into().unwrap()
    }

    #[test]
    fn certificate_examples() {
        let limits = Limits::default();
        assert_eq!(lower(&h_lower_from_certificate(&e8_cert(0, 1), &limits).unwrap()), 1);
        assert_eq!(lower(&h_lower_from_certificate(&e8_cert(2, 1), &limits).unwrap()), 0);
        assert_eq!(lower(&h_lower_from_certificate(&e8_cert(0, 2), &limits).unwrap()), 0);

        let g8 = Lattice::gamma(8).unwrap();
        let w = g8.ambient_to_basis(&AmbientVector::from_integers(&[1, 1, 1, 1, 0, 0, 0, 0])).unwrap();
        let input = HBoundInput {
            genus: 0,
            b_plus: 1,
            lattice: g8,
            certificate: Some(EtaCertificate { w, m: 0, a: Some(DualVector::zeros(8)) }),
        };
        let r = h_lower_from_certificate(&input, &limits).unwrap();
        assert_eq!(lower(&r), 1);
    }

    #[test]
    fn certificate_rejects_bad_witnesses() {
        let limits = Limits::default();
        let mut input = e8_cert(0, 1);
        // 2q lies in the zero class: not extremal
        let q = input.certificate.as_ref().unwrap().w.clone();
        input.certificate = Some(EtaCertificate { w: q.shifted_by_twice(&q), m: 0, a: None });
        assert!(matches!(h_lower_from_certificate(&input, &limits), Err(Error::NotExtremal { .. })));

        let mut input = e8_cert(0, 1);
        input.certificate.as_mut().unwrap().m = 1;
        assert!(matches!(h_lower_from_certificate(&input, &limits), Err(Error::ParityMismatch { .. })));

        let d4 = Lattice::diagonal(4).unwrap();
        let input = HBoundInput {
            genus: 0,
            b_plus: 1,
            lattice: d4,
            certificate: Some(EtaCertificate { w: LatticeVector(vec![1, 1, 1, 1]), m: 0, a: None }),
        };
        assert!(matches!(h_lower_from_certificate(&input, &limits), Err(Error::EtaVanishes)));

        let a2 = Lattice::from_gram_i64(&[vec![2, 1], vec![1, 2]], crate::lattice::Sign::Negative).unwrap();
        let input = HBoundInput {
            genus: 0,
            b_plus: 1,
            lattice: a2,
            certificate: Some(EtaCertificate { w: LatticeVector(vec![1, 0]), m: 0, a: None }),
        };
        assert!(matches!(h_lower_from_certificate(&input, &limits), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(certificate_bound(&BigInt::from(4), 0, 0, 1), BigInt::from(1));
        assert_eq!(certificate_bound(&BigInt::from(5), 1, 1, 1), BigInt::from(0));
        // (7 - 1)/4 = 3/2 rounds up
        assert_eq!(certificate_bound(&BigInt::from(7), 1, 0, 1), BigInt::from(2));
        assert_eq!(certificate_bound(&BigInt::from(7), 1, 0, 3), BigInt::from(0));
    }

    #[test]
    fn e_bounds() {
        let limits = Limits::default();
        assert_eq!(lower(&h_lower_from_e(&Lattice::diagonal(9).unwrap(), 0, &limits).unwrap()), 0);
        assert_eq!(lower(&h_lower_from_e(&Lattice::e8(), 0, &limits).unwrap()), 1);
        assert_eq!(lower(&h_lower_from_e(&Lattice::e8(), 3, &limits).unwrap()), -1);
    }

    #[test]
    fn surgery() {
        let pair = |g| {
            let r = surgery_upper(g);
            (lower(&r), i64::try_from(r.upper.unwrap()).unwrap())
        };
        assert_eq!(pair(0), (0, 0));
        assert_eq!(pair(1), (0, 1));
        assert_eq!(pair(4), (0, 2));
    }

    #[test]
    fn brieskorn_small() {
        let limits = Limits::default();
        for (k, h) in [(2u64, 1i64), (3, 1)] {
            let r = brieskorn_h(k, &limits).unwrap();
            assert_eq!(r.value, Some(BigInt::from(h)));
        }
        assert!(matches!(brieskorn_h(1, &limits), Err(Error::KTooSmall(1))));
    }

    #[test]
    fn factor_check_examples() {
        let limits = Limits::default();
        let d1 = Lattice::diagonal(1).unwrap();
        let r = e8_factor_check(1, &d1, &LatticeVector(vec![1]), &DualVector(vec![1]), 1, &limits).unwrap();
        assert!(r.holds);
        assert_eq!(r.sum_eta.magnitude(), &(r.base_eta.magnitude() * 16u32));

        let zero = Lattice::zero(crate::lattice::Sign::Negative);
        let r = e8_factor_check(1, &zero, &LatticeVector(vec![]), &DualVector(vec![]), 0, &limits).unwrap();
        assert!(r.holds);
        assert_eq!(r.sum_eta.magnitude(), &16u32.into());

        let r = e8_factor_check(0, &d1, &LatticeVector(vec![1]), &DualVector(vec![1]), 1, &limits).unwrap();
        assert!(r.holds);
        assert_eq!(r.sum_eta, r.base_eta);
    }
}
