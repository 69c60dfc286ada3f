//! Extremal vectors, the signed sums `eta(L, w, a, m)`, and the invariant `e(L)`.
//!
//! `eta(L, w, a, m) = sum_z (-1)^{((z+w)/2)^2} (a . z)^m`, summed over `z` in `w + 2L`
//! with `z^2 = w^2`. The exponent is evaluated with the positive Gram matrix; only its
//! parity matters, so the sign convention of the lattice does not enter.
//!
//! `e(L)` is the largest `ceil((|w^2| - m) / 4)` over extremal `w` and admissible `m`
//! with `eta(L, w, ., m)` not identically zero. It is computed by sweeping the `2^rank`
//! classes of `L / 2L`: every extremal vector of a class has the same norm (the coset
//! minimum), and the eta polynomials of two such vectors differ by a global sign, so
//! one representative per class suffices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{CosetEngine, EnumBudget};
use crate::error::{Error, Result};
use crate::lattice::{DualVector, Lattice, LatticeVector};
use crate::polynomial::EtaPolynomial;

pub const DEFAULT_M_MAX: u32 = 8;
pub const DEFAULT_RANK_GUARD: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub budget: EnumBudget,
    pub m_max: u32,
    pub rank_guard: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: EnumBudget::default(), m_max: DEFAULT_M_MAX, rank_guard: DEFAULT_RANK_GUARD }
    }
}

/// Minimum of `z^2` over the coset `w + 2L`.
pub fn coset_minimum(lattice: &Lattice, w: &LatticeVector, budget: &EnumBudget) -> Result<BigInt> {
    Ok(CosetEngine::new(lattice)?.coset_min(w, budget)?.min_norm)
}

pub fn is_extremal(lattice: &Lattice, w: &LatticeVector, budget: &EnumBudget) -> Result<bool> {
    let norm = lattice.norm(w)?;
    Ok(CosetEngine::new(lattice)?.coset_min(w, budget)?.min_norm == norm)
}

/// `(-1)^{((z+w)/2)^2}` as +1 or -1. `z` and `w` must lie in the same coset.
pub fn eta_sign(lattice: &Lattice, w: &LatticeVector, z: &LatticeVector) -> i64 {
    debug_assert!(z.same_coset(w));
    let half: Vec<i64> = z.0.iter().zip(&w.0).map(|(a, b)| (a + b) / 2).collect();
    if lattice.norm_parity(&half) == 0 {
        1
    } else {
        -1
    }
}

/// The signed support of the eta sum: every `z` in `w + 2L` with `z^2 = w^2`, sorted,
/// paired with its sign.
pub fn eta_terms(lattice: &Lattice, w: &LatticeVector, budget: &EnumBudget) -> Result<Vec<(i64, LatticeVector)>> {
    let norm = lattice.norm(w)?;
    let engine = CosetEngine::new(lattice)?;
    let min = engine.coset_min(w, budget)?;
    let zs = if min.min_norm == norm {
        min.minimizers
    } else {
        let mut below = engine.enumerate_below(w, &norm, budget)?;
        below.retain(|z| lattice.norm(z).map(|n| n == norm).unwrap_or(false));
        below
    };
    Ok(zs.into_iter().map(|z| (eta_sign(lattice, w, &z), z)).collect())
}

fn check_parity(norm: &BigInt, m: u32) -> Result<()> {
    if norm.is_odd() != (m % 2 == 1) {
        return Err(Error::ParityMismatch { norm: norm.to_string(), m });
    }
    Ok(())
}

fn power_sum(terms: &[(i64, LatticeVector)], a: &DualVector, m: u32) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for (sign, z) in terms {
        let p = crate::lattice::pairing(a, z)?;
        // (a.z)^0 = 1 even when a.z = 0
        acc += p.pow(m) * sign;
    }
    Ok(acc)
}

pub fn eta(lattice: &Lattice, w: &LatticeVector, a: &DualVector, m: u32, budget: &EnumBudget) -> Result<BigInt> {
    if a.len() != lattice.rank() {
        return Err(Error::DimensionMismatch { expected: lattice.rank(), found: a.len() });
    }
    check_parity(&lattice.norm(w)?, m)?;
    power_sum(&eta_terms(lattice, w, budget)?, a, m)
}

fn polynomial_of(rank: usize, m: u32, terms: &[(i64, LatticeVector)]) -> EtaPolynomial {
    EtaPolynomial::expand(rank, m, terms.iter().map(|(s, z)| (*s, z.coords())))
}

pub fn eta_polynomial(lattice: &Lattice, w: &LatticeVector, m: u32, limits: &Limits) -> Result<EtaPolynomial> {
    check_parity(&lattice.norm(w)?, m)?;
    if m > limits.m_max {
        return Err(Error::DegreeTooLarge { m, max: limits.m_max });
    }
    let terms = eta_terms(lattice, w, &limits.budget)?;
    Ok(polynomial_of(lattice.rank(), m, &terms))
}

/// Smallest admissible `m <= cap` with a non-vanishing eta polynomial. Fails with
/// `DegreeTooLarge` only if every scanned degree vanished and some admissible degree
/// `<= must_reach` lies beyond `m_max`.
fn scan_degrees(
    rank: usize,
    norm: &BigInt,
    terms: &[(i64, LatticeVector)],
    cap: u64,
    must_reach: Option<u64>,
    m_max: u32,
) -> Result<Option<(u32, EtaPolynomial)>> {
    let mut m = u32::from(norm.is_odd());
    while u64::from(m) <= cap && m <= m_max {
        let poly = polynomial_of(rank, m, terms);
        if !poly.is_zero() {
            return Ok(Some((m, poly)));
        }
        m += 2;
    }
    match must_reach {
        Some(reach) if u64::from(m) <= reach => Err(Error::DegreeTooLarge { m, max: m_max }),
        _ => Ok(None),
    }
}

fn norm_as_cap(norm: &BigInt) -> u64 {
    norm.to_u64().unwrap_or(u64::MAX)
}

/// Least `m >= 0` with `m = w^2 mod 2` and `eta(L, w, ., m)` not identically zero,
/// scanning `m <= |w^2|`.
pub fn minimal_m(lattice: &Lattice, w: &LatticeVector, limits: &Limits) -> Result<Option<u32>> {
    let norm = lattice.norm(w)?;
    let terms = eta_terms(lattice, w, &limits.budget)?;
    let cap = norm_as_cap(&norm);
    Ok(scan_degrees(lattice.rank(), &norm, &terms, cap, Some(cap), limits.m_max)?.map(|(m, _)| m))
}

/// `{0,1}` representatives of `L / 2L` in lexicographic order.
pub fn coset_classes(rank: usize, rank_guard: usize) -> Result<impl Iterator<Item = LatticeVector>> {
    if rank > rank_guard || rank >= 63 {
        return Err(Error::RankTooLarge { rank, limit: rank_guard });
    }
    Ok((0u64..1u64 << rank).map(move |k| class_from_index(rank, k)))
}

fn class_from_index(rank: usize, k: u64) -> LatticeVector {
    LatticeVector((0..rank).map(|i| ((k >> (rank - 1 - i)) & 1) as i64).collect())
}

fn ceil_quarter(x: &BigInt) -> BigInt {
    x.div_ceil(&BigInt::from(4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub class: LatticeVector,
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub min_norm: BigInt,
    pub minimizer_count: usize,
    pub minimal_m: Option<u32>,
    /// `ceil((min_norm - minimal_m) / 4)` when `minimal_m` exists.
    pub contribution: Option<i64>,
    pub nodes_visited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EInvariantCertificate {
    pub value: i64,
    pub rank: usize,
    pub unimodular: bool,
    pub witness_class: LatticeVector,
    pub witness_w: LatticeVector,
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub witness_norm: BigInt,
    pub witness_m: u32,
    pub witness_eta: EtaPolynomial,
    pub per_class_table: Vec<ClassRow>,
    pub nodes_visited: u64,
}

impl EInvariantCertificate {
    /// Re-checks the witness from scratch.
    pub fn verify(&self, lattice: &Lattice, limits: &Limits) -> Result<()> {
        let fail = |msg: &str| Err(Error::CertificateFailed(msg.to_string()));
        if !self.witness_w.same_coset(&self.witness_class) {
            return fail("witness is not in the witness class");
        }
        if !is_extremal(lattice, &self.witness_w, &limits.budget)? {
            return fail("witness is not extremal");
        }
        let norm = lattice.norm(&self.witness_w)?;
        if norm != self.witness_norm {
            return fail("witness norm mismatch");
        }
        let poly = eta_polynomial(lattice, &self.witness_w, self.witness_m, limits)?;
        if poly.is_zero() || poly != self.witness_eta {
            return fail("witness eta polynomial mismatch");
        }
        let contribution = ceil_quarter(&(norm - self.witness_m));
        if self.value > 0 && contribution != BigInt::from(self.value) {
            return fail("value does not match the witness contribution");
        }
        let best = self.per_class_table.iter().filter_map(|r| r.contribution).max().unwrap_or(0);
        if self.value != best.max(0) {
            return fail("value is not the maximum over classes");
        }
        Ok(())
    }
}

fn class_row(
    lattice: &Lattice,
    engine: &CosetEngine,
    class: LatticeVector,
    limits: &Limits,
) -> Result<(ClassRow, Option<EtaPolynomial>)> {
    let min = engine.coset_min(&class, &limits.budget)?;
    let w = &min.minimizers[0];
    let terms: Vec<(i64, LatticeVector)> =
        min.minimizers.iter().map(|z| (eta_sign(lattice, w, z), z.clone())).collect();
    let norm = &min.min_norm;
    let cap = norm_as_cap(norm);
    // degrees m >= norm contribute at most 0, which the zero class already provides
    let must_reach = cap.checked_sub(1);
    let found = scan_degrees(lattice.rank(), norm, &terms, cap, must_reach, limits.m_max)?;
    let (minimal_m, contribution, poly) = match found {
        Some((m, poly)) => {
            let c = ceil_quarter(&(norm - m));
            let c = c.to_i64().ok_or_else(|| Error::InvalidInput("contribution overflow".into()))?;
            (Some(m), Some(c), Some(poly))
        }
        None => (None, None, None),
    };
    let row = ClassRow {
        class,
        min_norm: min.min_norm.clone(),
        minimizer_count: min.minimizers.len(),
        minimal_m,
        contribution,
        nodes_visited: min.nodes_visited,
    };
    Ok((row, poly))
}

/// `e(L)` with a certificate. Classes are processed in parallel; the result does not
/// depend on scheduling. Among classes with the best contribution the witness is the one
/// with the largest `|w^2| - m`, then the lexicographically least class.
pub fn e_invariant(lattice: &Lattice, limits: &Limits) -> Result<EInvariantCertificate> {
    let rank = lattice.rank();
    if rank > limits.rank_guard {
        return Err(Error::RankTooLarge { rank, limit: limits.rank_guard });
    }
    let engine = CosetEngine::new(lattice)?;
    let rows: Vec<ClassRow> = (0u64..1u64 << rank)
        .into_par_iter()
        .map(|k| class_row(lattice, &engine, class_from_index(rank, k), limits).map(|(row, _)| row))
        .collect::<Result<Vec<_>>>()?;

    // rank by contribution, then by the unrounded |w^2| - m, then lexicographically
    let key = |row: &ClassRow| -> Option<(i64, BigInt)> {
        Some((row.contribution?, &row.min_norm - row.minimal_m?))
    };
    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Some(k) = key(row) {
            if best.map_or(true, |b| Some(&k) > key(&rows[b]).as_ref()) {
                best = Some(i);
            }
        }
    }
    let best = best.ok_or_else(|| Error::CertificateFailed("no class has a non-vanishing eta".into()))?;
    let value = rows[best].contribution.unwrap_or(0).max(0);
    let witness_class = rows[best].class.clone();
    let (_, poly) = class_row(lattice, &engine, witness_class.clone(), limits)?;
    let min = engine.coset_min(&witness_class, &limits.budget)?;
    let witness_m = rows[best].minimal_m.unwrap_or(0);
    let nodes_visited = rows.iter().map(|r| r.nodes_visited).sum();
    Ok(EInvariantCertificate {
        value,
        rank,
        unimodular: lattice.is_unimodular(),
        witness_class,
        witness_w: min.minimizers[0].clone(),
        witness_norm: min.min_norm,
        witness_m,
        witness_eta: poly.expect("best class has a polynomial"),
        per_class_table: rows,
        nodes_visited,
    })
}
