//! The eta sum as a polynomial in the coordinates of `a`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::DualVector;

/// `sum_z s_z (a . z)^m` expanded in the monomials of `a`: exponent vector -> coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaPolynomial {
    rank: usize,
    m: u32,
    coeffs: BTreeMap<Vec<u32>, BigInt>,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Accumulates `sign * prod z_i^alpha_i` for every exponent vector `alpha` of total
/// degree `m` supported on the non-zero coordinates of `z`. Returns `None` on `i128`
/// overflow.
fn accumulate_small(z: &[i64], m: u32, sign: i64, moments: &mut HashMap<Vec<u32>, i128>) -> Option<()> {
    fn rec(
        support: &[(usize, i64)],
        pos: usize,
        left: u32,
        exps: &mut Vec<u32>,
        weight: i128,
        moments: &mut HashMap<Vec<u32>, i128>,
    ) -> Option<()> {
        let (idx, z) = support[pos];
        if pos + 1 == support.len() {
            exps[idx] = left;
            let w = weight.checked_mul(i128::from(z).checked_pow(left)?)?;
            let slot = moments.entry(exps.clone()).or_insert(0);
            *slot = slot.checked_add(w)?;
            exps[idx] = 0;
            return Some(());
        }
        let mut power: i128 = 1;
        for e in 0..=left {
            exps[idx] = e;
            rec(support, pos + 1, left - e, exps, weight.checked_mul(power)?, moments)?;
            power = power.checked_mul(i128::from(z))?;
        }
        exps[idx] = 0;
        Some(())
    }

    let support: Vec<(usize, i64)> =
        z.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (i, *v)).collect();
    let mut exps = vec![0u32; z.len()];
    if support.is_empty() {
        if m == 0 {
            let slot = moments.entry(exps).or_insert(0);
            *slot = slot.checked_add(i128::from(sign))?;
        }
        return Some(());
    }
    rec(&support, 0, m, &mut exps, i128::from(sign), moments)
}

fn accumulate_big(z: &[i64], m: u32, sign: i64, moments: &mut HashMap<Vec<u32>, BigInt>) {
    fn rec(
        support: &[(usize, i64)],
        pos: usize,
        left: u32,
        exps: &mut Vec<u32>,
        weight: BigInt,
        moments: &mut HashMap<Vec<u32>, BigInt>,
    ) {
        let (idx, z) = support[pos];
        if pos + 1 == support.len() {
            exps[idx] = left;
            let w = weight * BigInt::from(z).pow(left);
            *moments.entry(exps.clone()).or_insert_with(BigInt::zero) += w;
            exps[idx] = 0;
            return;
        }
        let mut power = BigInt::one();
        for e in 0..=left {
            exps[idx] = e;
            rec(support, pos + 1, left - e, exps, &weight * &power, moments);
            power *= z;
        }
        exps[idx] = 0;
    }

    let support: Vec<(usize, i64)> =
        z.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (i, *v)).collect();
    let mut exps = vec![0u32; z.len()];
    if support.is_empty() {
        if m == 0 {
            *moments.entry(exps).or_insert_with(BigInt::zero) += sign;
        }
        return;
    }
    rec(&support, 0, m, &mut exps, BigInt::from(sign), moments);
}

impl EtaPolynomial {
    /// Expands `sum (sign * (a . z)^m)` over the given terms. With `m = 0` every term
    /// contributes its sign, including `z = 0`.
    pub fn expand<'a, I>(rank: usize, m: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, &'a [i64])>,
    {
        let terms: Vec<(i64, &[i64])> = terms.into_iter().collect();
        debug_assert!(terms.iter().all(|(_, z)| z.len() == rank));
        if m == 0 {
            let total: i64 = terms.iter().map(|(s, _)| s).sum();
            return Self::constant(rank, BigInt::from(total));
        }
        let small = {
            let mut moments: HashMap<Vec<u32>, i128> = HashMap::new();
            terms
                .iter()
                .try_for_each(|(sign, z)| accumulate_small(z, m, *sign, &mut moments))
                .map(|_| moments)
        };
        let moments: HashMap<Vec<u32>, BigInt> = match small {
            Some(moments) => moments.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect(),
            None => {
                let mut moments = HashMap::new();
                for (sign, z) in &terms {
                    accumulate_big(z, m, *sign, &mut moments);
                }
                moments
            }
        };
        let m_fact = factorial(m);
        let coeffs = moments
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(exps, v)| {
                let denom = exps.iter().fold(BigInt::one(), |acc, e| acc * factorial(*e));
                (exps, v * (&m_fact / denom))
            })
            .collect();
        EtaPolynomial { rank, m, coeffs }
    }

    pub fn constant(rank: usize, value: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !value.is_zero() {
            coeffs.insert(vec![0; rank], value);
        }
        EtaPolynomial { rank, m: 0, coeffs }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value of the `m = 0` polynomial; `None` for positive degree.
    pub fn constant_value(&self) -> Option<BigInt> {
        (self.m == 0).then(|| self.coeffs.values().cloned().sum())
    }

    pub fn eval(&self, a: &DualVector) -> Result<BigInt> {
        if a.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: a.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(&a.0)
                    .filter(|(e, _)| **e > 0)
                    .fold(c.clone(), |acc, (e, x)| acc * BigInt::from(*x).pow(*e))
            })
            .sum())
    }

    /// `c * self`.
    pub fn scaled(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return EtaPolynomial { rank: self.rank, m: self.m, coeffs: BTreeMap::new() };
        }
        EtaPolynomial {
            rank: self.rank,
            m: self.m,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }
}

impl Serialize for EtaPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(exps, c)| serde_json::json!({ "exponents": exps, "coeff": crate::bigjson::to_value(c) }))
            .collect();
        let mut st = s.serialize_struct("EtaPolynomial", 3)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
