//! Definite integral lattices given by a Gram matrix.
//!
//! All arithmetic uses the positive definite Gram matrix. Lattices that are negative
//! definite in their geometric setting carry [`Sign::Negative`], and `|w^2|` is always
//! `w^T G w` with `G` positive.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// Coordinates of a lattice vector in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

/// An element of `Hom(L, Z)` in the dual coordinates of the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualVector(pub Vec<i64>);

/// A point of the ambient space, stored as twice its coordinates so that half-integers
/// are exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientVector {
    pub doubled: Vec<i64>,
}

impl LatticeVector {
    pub fn zeros(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &LatticeVector) -> Self {
        LatticeVector(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `self + 2 u`.
    pub fn shifted_by_twice(&self, u: &LatticeVector) -> Self {
        LatticeVector(self.0.iter().zip(&u.0).map(|(a, b)| a + 2 * b).collect())
    }

    /// True when `self - other` lies in `2L`.
    pub fn same_coset(&self, other: &LatticeVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).is_even())
    }

    /// The `{0,1}` representative of the class of this vector in `L/2L`.
    pub fn class_representative(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x.rem_euclid(2)).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl DualVector {
    pub fn zeros(n: usize) -> Self {
        DualVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &DualVector) -> Self {
        DualVector(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl AmbientVector {
    /// From plain integer ambient coordinates.
    pub fn from_integers(x: &[i64]) -> Self {
        AmbientVector { doubled: x.iter().map(|v| 2 * v).collect() }
    }

    pub fn from_doubled(doubled: Vec<i64>) -> Self {
        AmbientVector { doubled }
    }

    /// The ambient dot product `x.x`, exact.
    pub fn norm(&self) -> BigRational {
        let s: BigInt = self.doubled.iter().map(|v| BigInt::from(*v) * v).sum();
        BigRational::new(s, BigInt::from(4))
    }

    /// Membership in `Gamma_n`: all coordinates congruent mod `Z`, all in `Z/2`, and an
    /// even coordinate sum.
    pub fn in_gamma(&self) -> bool {
        let Some(first) = self.doubled.first() else {
            return true;
        };
        let parity = first.rem_euclid(2);
        self.doubled.iter().all(|v| v.rem_euclid(2) == parity)
            && self.doubled.iter().sum::<i64>().rem_euclid(4) == 0
    }
}

/// Ambient embedding of a lattice: basis vectors as columns, in doubled coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientBasis {
    columns: Vec<Vec<i64>>,
    dim: usize,
    gamma: bool,
}

impl AmbientBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    /// True for the `Gamma_n` family, where membership follows the parity rules.
    pub fn is_gamma(&self) -> bool {
        self.gamma
    }

    fn matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = crate::linalg::q(*v);
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<BigInt>>,
    sign: Sign,
    name: Option<String>,
    det: BigInt,
    ambient: Option<AmbientBasis>,
}

/// On-disk lattice description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(with = "crate::bigjson::matrix")]
    pub gram: Vec<Vec<BigInt>>,
    pub sign: Sign,
}

/// Leading principal minors by fraction-free elimination without pivoting. Stops at the
/// first non-positive minor and returns its 1-based index as the error.
fn leading_minors(gram: &[Vec<BigInt>]) -> std::result::Result<Vec<BigInt>, usize> {
    let n = gram.len();
    let mut m: Vec<Vec<BigInt>> = gram.to_vec();
    let mut prev = BigInt::one();
    let mut minors = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = m[k][k].clone();
        if !pivot.is_positive() {
            return Err(k + 1);
        }
        minors.push(pivot.clone());
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = pivot;
    }
    Ok(minors)
}

impl Lattice {
    pub fn from_gram(gram: Vec<Vec<BigInt>>, sign: Sign) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let minors = leading_minors(&gram).map_err(Error::NotDefinite)?;
        let det = minors.last().cloned().unwrap_or_else(BigInt::one);
        Ok(Lattice { gram, sign, name: None, det, ambient: None })
    }

    pub fn from_gram_i64(rows: &[Vec<i64>], sign: Sign) -> Result<Self> {
        let gram = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Self::from_gram(gram, sign)
    }

    pub fn from_file(file: LatticeFile) -> Result<Self> {
        let name = file.name.clone();
        Ok(Self::from_gram(file.gram, file.sign)?.with_name(name))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        // serde_json reports the line and column of the failure
        let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile { name: self.name.clone(), gram: self.gram.clone(), sign: self.sign }
    }

    /// The rank-0 lattice, the neutral element for [`Lattice::direct_sum`].
    pub fn zero(sign: Sign) -> Self {
        Lattice {
            gram: Vec::new(),
            sign,
            name: None,
            det: BigInt::one(),
            ambient: Some(AmbientBasis { columns: Vec::new(), dim: 0, gamma: false }),
        }
    }

    /// `Z^n` with the standard form.
    pub fn diagonal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("diagonal lattice needs n >= 1".into()));
        }
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let columns = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 2 } else { 0 }).collect())
            .collect();
        Ok(Lattice {
            gram,
            sign: Sign::Negative,
            name: Some(format!("diag:{n}")),
            det: BigInt::one(),
            ambient: Some(AmbientBasis { columns, dim: n, gamma: false }),
        })
    }

    /// `Gamma_n` for `n` divisible by 4, with basis
    /// `s, e1+e2, e2-e1, e3-e2, ..., e_{n-1}-e_{n-2}` where `s = (1/2, ..., 1/2)`.
    pub fn gamma(n: usize) -> Result<Self> {
        if n == 0 || n % 4 != 0 {
            return Err(Error::BadRank(n));
        }
        let mut columns: Vec<Vec<i64>> = Vec::with_capacity(n);
        columns.push(vec![1; n]);
        let mut v = vec![0; n];
        v[0] = 2;
        v[1] = 2;
        columns.push(v);
        for i in 0..n - 2 {
            let mut v = vec![0; n];
            v[i] = -2;
            v[i + 1] = 2;
            columns.push(v);
        }
        let gram: Vec<Vec<BigInt>> = columns
            .iter()
            .map(|a| {
                columns
                    .iter()
                    .map(|b| {
                        let dot: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                        debug_assert_eq!(dot % 4, 0);
                        BigInt::from(dot / 4)
                    })
                    .collect()
            })
            .collect();
        let mut lattice = Self::from_gram(gram, Sign::Negative)?;
        lattice.name = Some(format!("gamma:{n}"));
        lattice.ambient = Some(AmbientBasis { columns, dim: n, gamma: true });
        Ok(lattice)
    }

    /// `E8`, realised as `Gamma_8`.
    pub fn e8() -> Self {
        let mut l = Self::gamma(8).expect("gamma(8) is valid");
        l.name = Some("e8".into());
        l
    }

    pub fn direct_sum(&self, other: &Lattice) -> Result<Self> {
        if self.sign != other.sign {
            return Err(Error::SignMismatch);
        }
        let (n1, n2) = (self.rank(), other.rank());
        let n = n1 + n2;
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n1 {
            for j in 0..n1 {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                gram[n1 + i][n1 + j] = other.gram[i][j].clone();
            }
        }
        let ambient = match (&self.ambient, &other.ambient) {
            (Some(a), Some(b)) => {
                let dim = a.dim + b.dim;
                let columns = a
                    .columns
                    .iter()
                    .map(|c| c.iter().copied().chain(std::iter::repeat(0).take(b.dim)).collect())
                    .chain(b.columns.iter().map(|c| std::iter::repeat(0).take(a.dim).chain(c.iter().copied()).collect()))
                    .collect();
                Some(AmbientBasis { columns, dim, gamma: false })
            }
            _ => None,
        };
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            (Some(a), None) if n2 == 0 => Some(a.clone()),
            (None, Some(b)) if n1 == 0 => Some(b.clone()),
            _ => None,
        };
        Ok(Lattice { gram, sign: self.sign, name, det: &self.det * &other.det, ambient })
    }

    pub fn with_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    pub fn ambient(&self) -> Option<&AmbientBasis> {
        self.ambient.as_ref()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: n });
        }
        Ok(())
    }

    pub fn inner(&self, u: &LatticeVector, v: &LatticeVector) -> Result<BigInt> {
        self.check_len(u.len())?;
        self.check_len(v.len())?;
        let mut acc = BigInt::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if *ui == 0 {
                continue;
            }
            let row: BigInt = self.gram[i]
                .iter()
                .zip(&v.0)
                .filter(|(_, vj)| **vj != 0)
                .map(|(g, vj)| g * vj)
                .sum();
            acc += row * ui;
        }
        Ok(acc)
    }

    pub fn norm(&self, v: &LatticeVector) -> Result<BigInt> {
        self.inner(v, v)
    }

    /// Parity of `v^T G v`, using `v_i^2 = v_i mod 2`.
    pub fn norm_parity(&self, v: &[i64]) -> u8 {
        let mut p = 0u8;
        for (i, vi) in v.iter().enumerate() {
            if vi.rem_euclid(2) == 1 && self.gram[i][i].is_odd() {
                p ^= 1;
            }
        }
        p
    }

    pub fn basis_to_ambient(&self, v: &LatticeVector) -> Result<AmbientVector> {
        self.check_len(v.len())?;
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbientBasis)?;
        let mut doubled = vec![0i64; amb.dim];
        for (col, c) in amb.columns.iter().zip(&v.0) {
            for (d, b) in doubled.iter_mut().zip(col) {
                *d += b * c;
            }
        }
        Ok(AmbientVector { doubled })
    }

    pub fn ambient_to_basis(&self, x: &AmbientVector) -> Result<LatticeVector> {
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbientBasis)?;
        if x.doubled.len() != amb.dim {
            return Err(Error::DimensionMismatch { expected: amb.dim, found: x.doubled.len() });
        }
        if amb.gamma && !x.in_gamma() {
            return Err(Error::NotInLattice(
                "coordinates must be all integers or all half-integers with even sum".into(),
            ));
        }
        let rhs: Vec<BigRational> = x.doubled.iter().map(|v| crate::linalg::q(*v)).collect();
        let sol = amb
            .matrix()
            .solve(&rhs)
            .ok_or_else(|| Error::NotInLattice("not in the span of the basis".into()))?;
        let coords = sol
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64().ok_or_else(|| Error::NotInLattice("coordinate overflow".into()))
                } else {
                    Err(Error::NotInLattice(format!("non-integral basis coordinate {c}")))
                }
            })
            .collect::<Result<Vec<i64>>>()?;
        Ok(LatticeVector(coords))
    }

    /// Wraps integer coordinates after checking their length.
    pub fn vector(&self, coords: Vec<i64>) -> Result<LatticeVector> {
        self.check_len(coords.len())?;
        Ok(LatticeVector(coords))
    }

    pub fn dual_vector(&self, coords: Vec<i64>) -> Result<DualVector> {
        self.check_len(coords.len())?;
        Ok(DualVector(coords))
    }

    /// Splits the basis into groups that are mutually orthogonal under the Gram matrix
    /// (connected components of its off-diagonal support), each sorted ascending.
    pub fn orthogonal_components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..n {
                    if !seen[j] && !self.gram[i][j].is_zero() {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The sublattice spanned by the given basis indices.
    pub fn restrict(&self, indices: &[usize]) -> Lattice {
        let gram = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.gram[i][j].clone()).collect())
            .collect();
        Lattice::from_gram(gram, self.sign).expect("principal submatrix of a definite form is definite")
    }
}

pub fn pairing(a: &DualVector, v: &LatticeVector) -> Result<BigInt> {
    if a.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: v.len() });
    }
    Ok(a.0.iter().zip(&v.0).map(|(x, y)| BigInt::from(*x) * y).sum())
}
