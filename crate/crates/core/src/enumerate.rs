//! Exact enumeration of lattice vectors in a coset `w + 2L` below a norm bound.
//!
//! The search runs Fincke-Pohst directly on `z = w + 2u`: every coordinate of `z` is
//! constrained to the parity of the matching coordinate of `w`. Bounds come from a
//! fraction-free `LDL^T` factorisation of the Gram matrix, so every comparison is an
//! integer comparison and no candidate can be lost to rounding.
//!
//! The hot loop runs in `i128` with checked arithmetic and restarts in `BigInt` if any
//! intermediate value overflows.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeVector};
use crate::linalg::QMatrix;

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;

/// Node limit for a single enumeration call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumBudget {
    pub max_nodes: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget { max_nodes: DEFAULT_MAX_NODES }
    }
}

impl EnumBudget {
    pub fn new(max_nodes: u64) -> Self {
        EnumBudget { max_nodes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetMinResult {
    #[serde(serialize_with = "crate::bigjson::serialize")]
    pub min_norm: BigInt,
    /// Every vector of the coset attaining `min_norm`, sorted lexicographically.
    pub minimizers: Vec<LatticeVector>,
    pub nodes_visited: u64,
}

/// `G = R^T D R` with `R` unit upper triangular and `D` diagonal, both exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cholesky {
    pub r: QMatrix,
    pub d: Vec<BigRational>,
}

impl Cholesky {
    pub fn reconstruct(&self) -> QMatrix {
        let n = self.d.len();
        let mut dr = self.r.clone();
        for i in 0..n {
            for j in 0..n {
                dr[(i, j)] = &self.r[(i, j)] * &self.d[i];
            }
        }
        self.r.transpose().mul(&dr)
    }
}

pub fn exact_cholesky(gram: &[Vec<BigInt>]) -> Result<Cholesky> {
    let n = gram.len();
    let mut a = QMatrix::zeros(n, n);
    for i in 0..n {
        if gram[i].len() != n {
            return Err(Error::NotSquare { rows: n, cols: gram[i].len() });
        }
        for j in 0..n {
            a[(i, j)] = BigRational::from_integer(gram[i][j].clone());
        }
    }
    let mut r = QMatrix::identity(n);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let mut di = a[(i, i)].clone();
        for k in 0..i {
            di -= &r[(k, i)] * &r[(k, i)] * &d[k];
        }
        if !di.is_positive() {
            return Err(Error::NotDefinite(i + 1));
        }
        for j in i + 1..n {
            let mut v = a[(i, j)].clone();
            for k in 0..i {
                v -= &r[(k, i)] * &r[(k, j)] * &d[k];
            }
            r[(i, j)] = v / &di;
        }
        d.push(di);
    }
    Ok(Cholesky { r, d })
}

/// Integer data for the search: `norm(z) = sum_i weight_i * y_i^2 / denom` with
/// `y_i = sum_{j >= i} upper[i][j] * z_j` and `upper[i][i] = minor_i`.
#[derive(Clone, Debug)]
struct SearchData<T> {
    upper: Vec<Vec<T>>,
    weight: Vec<T>,
    denom: T,
}

fn search_data_big(gram: &[Vec<BigInt>]) -> Result<SearchData<BigInt>> {
    let n = gram.len();
    let chol = exact_cholesky(gram)?;
    let mut minors = Vec::with_capacity(n);
    let mut acc = BigRational::one();
    for di in &chol.d {
        acc *= di;
        debug_assert!(acc.is_integer());
        minors.push(acc.to_integer());
    }
    let mut upper = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = &chol.r[(i, j)] * BigRational::from_integer(minors[i].clone());
            debug_assert!(v.is_integer(), "fraction-free factor must be integral");
            upper[i][j] = v.to_integer();
        }
    }
    let pair: Vec<BigInt> = (0..n)
        .map(|i| {
            let prev = if i == 0 { BigInt::one() } else { minors[i - 1].clone() };
            prev * &minors[i]
        })
        .collect();
    let denom = pair.iter().fold(BigInt::one(), |acc, p| acc.lcm(p));
    let weight = pair.iter().map(|p| &denom / p).collect();
    Ok(SearchData { upper, weight, denom })
}

fn to_i128_data(big: &SearchData<BigInt>) -> Option<SearchData<i128>> {
    let conv = |x: &BigInt| x.to_i128();
    Some(SearchData {
        upper: big
            .upper
            .iter()
            .map(|row| row.iter().map(conv).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?,
        weight: big.weight.iter().map(conv).collect::<Option<Vec<_>>>()?,
        denom: conv(&big.denom)?,
    })
}

trait SearchInt:
    Clone + Ord + Integer + Signed + Roots + CheckedAdd + CheckedSub + CheckedMul + From<i64> + ToPrimitive
{
}
impl SearchInt for i128 {}
impl SearchInt for BigInt {}

#[derive(Debug)]
enum Stop {
    Overflow,
    Budget,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Below,
    Minimum,
}

struct Search<'a, T> {
    data: &'a SearchData<T>,
    parity: Vec<i64>,
    z: Vec<T>,
    mode: Mode,
    /// Scaled bound: `norm * denom`.
    bound: T,
    found: Vec<Vec<T>>,
    nodes: u64,
    max_nodes: u64,
}

fn add<T: SearchInt>(a: &T, b: &T) -> std::result::Result<T, Stop> {
    a.checked_add(b).ok_or(Stop::Overflow)
}

fn sub<T: SearchInt>(a: &T, b: &T) -> std::result::Result<T, Stop> {
    a.checked_sub(b).ok_or(Stop::Overflow)
}

fn mul<T: SearchInt>(a: &T, b: &T) -> std::result::Result<T, Stop> {
    a.checked_mul(b).ok_or(Stop::Overflow)
}

impl<T: SearchInt> Search<'_, T> {
    fn visit(&mut self, level: usize, partial: &T) -> std::result::Result<(), Stop> {
        let n = self.z.len();
        let d = &self.data.upper[level][level];
        let mut r = T::zero();
        for j in level + 1..n {
            if !self.z[j].is_zero() {
                r = add(&r, &mul(&self.data.upper[level][j], &self.z[j])?)?;
            }
        }
        let w = &self.data.weight[level];
        let limit = sub(&self.bound, partial)?;
        if limit.is_negative() {
            return Ok(());
        }
        let ymax = limit.div_floor(w).sqrt();
        // d*z + r in [-ymax, ymax]
        let lo = sub(&T::zero(), &add(&ymax, &r)?)?.div_ceil(d);
        let hi = sub(&ymax, &r)?.div_floor(d);
        if lo > hi {
            return Ok(());
        }
        let par = T::from(self.parity[level]);
        let two = T::from(2);
        let mut start = lo.clone();
        if sub(&start, &par)?.mod_floor(&two) != T::zero() {
            start = add(&start, &T::one())?;
        }
        let mut candidates = Vec::new();
        let mut zc = start;
        while zc <= hi {
            let y = add(&mul(d, &zc)?, &r)?;
            candidates.push((y.abs(), y, zc.clone()));
            zc = add(&zc, &two)?;
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.2.cmp(&b.2)));
        for (_, y, zc) in candidates {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Stop::Budget);
            }
            let total = add(partial, &mul(w, &mul(&y, &y)?)?)?;
            if total > self.bound {
                break;
            }
            self.z[level] = zc;
            if level == 0 {
                self.leaf(total);
            } else {
                self.visit(level - 1, &total)?;
            }
        }
        self.z[level] = T::zero();
        Ok(())
    }

    fn leaf(&mut self, total: T) {
        match self.mode {
            Mode::Below => self.found.push(self.z.clone()),
            Mode::Minimum => {
                if total < self.bound {
                    self.bound = total;
                    self.found.clear();
                }
                self.found.push(self.z.clone());
            }
        }
    }
}

struct RawResult {
    vectors: Vec<Vec<i64>>,
    scaled_bound: BigInt,
    denom: BigInt,
    nodes: u64,
}

fn run_search<T: SearchInt + Into<BigInt>>(
    data: &SearchData<T>,
    parity: Vec<i64>,
    mode: Mode,
    bound: T,
    max_nodes: u64,
) -> std::result::Result<RawResult, Stop> {
    let n = parity.len();
    let mut search = Search {
        data,
        parity,
        z: vec![T::zero(); n],
        mode,
        bound,
        found: Vec::new(),
        nodes: 0,
        max_nodes,
    };
    if n > 0 {
        search.visit(n - 1, &T::zero())?;
    } else {
        search.found.push(Vec::new());
    }
    let vectors = search
        .found
        .iter()
        .map(|z| z.iter().map(|x| x.to_i64().ok_or(Stop::Overflow)).collect())
        .collect::<std::result::Result<Vec<Vec<i64>>, Stop>>()?;
    Ok(RawResult {
        vectors,
        scaled_bound: search.bound.into(),
        denom: data.denom.clone().into(),
        nodes: search.nodes,
    })
}

fn parity_of(w: &LatticeVector) -> Vec<i64> {
    w.0.iter().map(|x| x.rem_euclid(2)).collect()
}

/// Precomputed search data for one orthogonal summand.
#[derive(Clone, Debug)]
struct Block {
    indices: Vec<usize>,
    gram: Vec<Vec<BigInt>>,
    big: SearchData<BigInt>,
    small: Option<SearchData<i128>>,
}

impl Block {
    fn new(lattice: &Lattice, indices: Vec<usize>) -> Result<Self> {
        let gram: Vec<Vec<BigInt>> = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| lattice.gram()[i][j].clone()).collect())
            .collect();
        let big = search_data_big(&gram)?;
        let small = to_i128_data(&big);
        Ok(Block { indices, gram, big, small })
    }

    fn run(&self, parity: Vec<i64>, mode: Mode, bound: &BigInt, budget: &EnumBudget) -> Result<RawResult> {
        let scaled = bound * &self.big.denom;
        let budget_err = || Error::BudgetExceeded { max_nodes: budget.max_nodes };
        if let (Some(small), Some(b)) = (&self.small, scaled.to_i128()) {
            match run_search(small, parity.clone(), mode, b, budget.max_nodes) {
                Ok(r) => return Ok(r),
                Err(Stop::Budget) => return Err(budget_err()),
                Err(Stop::Overflow) => {}
            }
        }
        match run_search(&self.big, parity, mode, scaled, budget.max_nodes) {
            Ok(r) => Ok(r),
            Err(Stop::Budget) => Err(budget_err()),
            Err(Stop::Overflow) => Err(Error::InvalidInput("coordinate does not fit in 64 bits".into())),
        }
    }

    /// Greedy descent `z -> z +- 2 e_i` while the norm drops; gives a cheap starting
    /// bound for the minimum search.
    fn descend_norm(&self, w: &[i64]) -> BigInt {
        let gram = &self.gram;
        let n = w.len();
        let mut z = w.to_vec();
        let mut gz: Vec<BigInt> = (0..n)
            .map(|i| gram[i].iter().zip(&z).map(|(g, x)| g * x).sum())
            .collect();
        let mut norm: BigInt = gz.iter().zip(&z).map(|(g, x)| g * x).sum();
        loop {
            let mut improved = false;
            for i in 0..n {
                for t in [-1i64, 1] {
                    // norm(z + 2t e_i) - norm(z) = 4t (Gz)_i + 4 G_ii
                    let delta = BigInt::from(4 * t) * &gz[i] + BigInt::from(4) * &gram[i][i];
                    if delta.is_negative() {
                        z[i] += 2 * t;
                        for (j, g) in gz.iter_mut().enumerate() {
                            *g += BigInt::from(2 * t) * &gram[j][i];
                        }
                        norm += delta;
                        improved = true;
                    }
                }
            }
            if !improved {
                return norm;
            }
        }
    }

    fn coset_min(&self, w: &[i64], budget: &EnumBudget) -> Result<(BigInt, Vec<Vec<i64>>, u64)> {
        if self.indices.is_empty() {
            return Ok((BigInt::zero(), vec![Vec::new()], 0));
        }
        let start = self.descend_norm(w);
        let parity = w.iter().map(|x| x.rem_euclid(2)).collect();
        let raw = self.run(parity, Mode::Minimum, &start, budget)?;
        Ok((raw.scaled_bound / raw.denom, raw.vectors, raw.nodes))
    }
}

/// Reusable enumeration state for one lattice. Construction factors the Gram matrix
/// once; queries are then cheap and can be shared across threads.
///
/// Orthogonal summands of the Gram matrix are searched independently for coset minima
/// and the minimizer set is assembled as their product.
// TODO: LLL-reduce the Gram matrix before enumeration once ranks above ~20 are needed.
#[derive(Clone, Debug)]
pub struct CosetEngine {
    rank: usize,
    whole: Block,
    blocks: Vec<Block>,
}

impl CosetEngine {
    pub fn new(lattice: &Lattice) -> Result<Self> {
        let rank = lattice.rank();
        let whole = Block::new(lattice, (0..rank).collect())?;
        let comps = lattice.orthogonal_components();
        let blocks = if comps.len() <= 1 {
            vec![whole.clone()]
        } else {
            comps.into_iter().map(|c| Block::new(lattice, c)).collect::<Result<Vec<_>>>()?
        };
        Ok(CosetEngine { rank, whole, blocks })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check(&self, w: &LatticeVector) -> Result<()> {
        if w.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: w.len() });
        }
        Ok(())
    }

    pub fn coset_min(&self, w: &LatticeVector, budget: &EnumBudget) -> Result<CosetMinResult> {
        self.check(w)?;
        let mut min_norm = BigInt::zero();
        let mut nodes = 0u64;
        let mut partial: Vec<Vec<i64>> = vec![vec![0; self.rank]];
        for block in &self.blocks {
            let sub_w: Vec<i64> = block.indices.iter().map(|&i| w.0[i]).collect();
            let remaining = EnumBudget::new(budget.max_nodes.saturating_sub(nodes));
            let (norm, vectors, used) = block.coset_min(&sub_w, &remaining).map_err(|e| match e {
                Error::BudgetExceeded { .. } => Error::BudgetExceeded { max_nodes: budget.max_nodes },
                other => other,
            })?;
            nodes += used;
            min_norm += norm;
            let mut next = Vec::with_capacity(partial.len() * vectors.len());
            for base in &partial {
                for v in &vectors {
                    let mut full = base.clone();
                    for (&i, x) in block.indices.iter().zip(v) {
                        full[i] = *x;
                    }
                    next.push(full);
                }
            }
            partial = next;
        }
        let mut minimizers: Vec<LatticeVector> = partial.into_iter().map(LatticeVector).collect();
        minimizers.sort();
        Ok(CosetMinResult { min_norm, minimizers, nodes_visited: nodes })
    }

    pub fn enumerate_below(&self, w: &LatticeVector, bound: &BigInt, budget: &EnumBudget) -> Result<Vec<LatticeVector>> {
        self.check(w)?;
        if bound.is_negative() {
            return Err(Error::InvalidInput("norm bound must be non-negative".into()));
        }
        if self.rank == 0 {
            return Ok(vec![LatticeVector(Vec::new())]);
        }
        let raw = self.whole.run(parity_of(w), Mode::Below, bound, budget)?;
        let mut out: Vec<LatticeVector> = raw.vectors.into_iter().map(LatticeVector).collect();
        out.sort();
        Ok(out)
    }
}

/// Minimum norm of `w + 2L` and all vectors attaining it.
pub fn coset_min(lattice: &Lattice, w: &LatticeVector, budget: &EnumBudget) -> Result<CosetMinResult> {
    CosetEngine::new(lattice)?.coset_min(w, budget)
}

/// All `z` in `w + 2L` with `norm(z) <= bound`, sorted lexicographically.
pub fn enumerate_coset_below(
    lattice: &Lattice,
    w: &LatticeVector,
    bound: &BigInt,
    budget: &EnumBudget,
) -> Result<Vec<LatticeVector>> {
    CosetEngine::new(lattice)?.enumerate_below(w, bound, budget)
}

pub const NAIVE_MAX_RANK: usize = 6;

/// Exhaustive search over `u` in `[-box_radius, box_radius]^n`. Independent of the
/// factorisation used by [`coset_min`]; meant as a test oracle.
pub fn naive_coset_min(lattice: &Lattice, w: &LatticeVector, box_radius: i64) -> Result<CosetMinResult> {
    let n = lattice.rank();
    if n > NAIVE_MAX_RANK {
        return Err(Error::RankTooLarge { rank: n, limit: NAIVE_MAX_RANK });
    }
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.len() });
    }
    let gram: Vec<Vec<i128>> = lattice
        .gram()
        .iter()
        .map(|row| row.iter().map(|g| g.to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidInput("gram entries too large for the naive search".into()))?;
    let side = 2 * box_radius + 1;
    let total = (side as u64).pow(n as u32);
    let mut best: Option<i128> = None;
    let mut minimizers = Vec::new();
    let mut u = vec![-box_radius; n];
    for _ in 0..total {
        let z: Vec<i64> = w.0.iter().zip(&u).map(|(a, b)| a + 2 * b).collect();
        let mut norm = 0i128;
        for i in 0..n {
            for j in 0..n {
                norm += gram[i][j] * i128::from(z[i]) * i128::from(z[j]);
            }
        }
        match best {
            Some(b) if norm > b => {}
            Some(b) if norm == b => minimizers.push(LatticeVector(z)),
            _ => {
                best = Some(norm);
                minimizers.clear();
                minimizers.push(LatticeVector(z));
            }
        }
        for k in 0..n {
            if u[k] < box_radius {
                u[k] += 1;
                break;
            }
            u[k] = -box_radius;
        }
    }
    minimizers.sort();
    Ok(CosetMinResult {
        min_norm: BigInt::from(best.unwrap_or(0)),
        minimizers,
        nodes_visited: total,
    })
}

/// A box radius guaranteed to contain every minimizer of `w + 2L`: any `z` with
/// `norm(z) <= norm(w)` has `z_i^2 <= norm(w) * (G^-1)_ii`.
pub fn naive_box_radius(lattice: &Lattice, w: &LatticeVector) -> Result<i64> {
    let n = lattice.rank();
    let norm = lattice.norm(w)?;
    let mut g = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = BigRational::from_integer(lattice.gram()[i][j].clone());
        }
    }
    let inv = g
        .solve_matrix(&QMatrix::identity(n))
        .ok_or(Error::NotDefinite(n))?;
    let mut radius = 0i64;
    for i in 0..n {
        let bound_sq = (&inv[(i, i)] * BigRational::from_integer(norm.clone())).ceil().to_integer();
        let zmax: BigInt = Roots::sqrt(&bound_sq) + 1;
        let umax: BigInt = (zmax + BigInt::from(w.0[i].abs())) / 2 + 1;
        radius = radius.max(umax.to_i64().ok_or_else(|| Error::InvalidInput("radius overflow".into()))?);
    }
    Ok(radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{AmbientVector, Sign};
    use crate::linalg::q;

    fn budget() -> EnumBudget {
        EnumBudget::default()
    }

    #[test]
    fn cholesky_examples() {
        let id: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..3).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        let c = exact_cholesky(&id).unwrap();
        assert_eq!(c.r, QMatrix::identity(3));
        assert_eq!(c.d, vec![q(1), q(1), q(1)]);

        let a2 = vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(2)]];
        let c = exact_cholesky(&a2).unwrap();
        assert_eq!(c.d, vec![q(2), BigRational::new(3.into(), 2.into())]);
        assert_eq!(c.reconstruct(), QMatrix::from_i64(2, 2, &[2, 1, 1, 2]));

        let bad = vec![vec![BigInt::from(1), BigInt::from(2)], vec![BigInt::from(2), BigInt::from(1)]];
        assert!(matches!(exact_cholesky(&bad), Err(Error::NotDefinite(2))));
    }

    #[test]
    fn coset_min_examples() {
        let d4 = Lattice::diagonal(4).unwrap();
        let r = coset_min(&d4, &LatticeVector::zeros(4), &budget()).unwrap();
        assert_eq!(r.min_norm, BigInt::zero());
        assert_eq!(r.minimizers, vec![LatticeVector::zeros(4)]);

        let r = coset_min(&d4, &LatticeVector(vec![1, 1, 1, 1]), &budget()).unwrap();
        assert_eq!(r.min_norm, BigInt::from(4));
        assert_eq!(r.minimizers.len(), 16);
        assert!(r.minimizers.iter().all(|z| z.0.iter().all(|x| x.abs() == 1)));

        let e8 = Lattice::e8();
        let qv = e8.ambient_to_basis(&AmbientVector::from_integers(&[1, 1, 1, 1, 0, 0, 0, 0])).unwrap();
        let r = coset_min(&e8, &qv, &budget()).unwrap();
        assert_eq!(r.min_norm, BigInt::from(4));
        assert_eq!(r.minimizers.len(), 16);
        for z in &r.minimizers {
            assert!(z.same_coset(&qv));
            assert_eq!(e8.norm(z).unwrap(), BigInt::from(4));
        }
    }

    #[test]
    fn enumerate_below_examples() {
        let e8 = Lattice::e8();
        let zero = LatticeVector::zeros(8);
        assert_eq!(enumerate_coset_below(&e8, &zero, &BigInt::from(8), &budget()).unwrap().len(), 241);
        // roots: 240 vectors of norm 2 in the whole lattice
        let mut roots = 0;
        for class in 0..256u32 {
            let w = LatticeVector((0..8).map(|i| i64::from((class >> i) & 1)).collect());
            roots += enumerate_coset_below(&e8, &w, &BigInt::from(2), &budget())
                .unwrap()
                .iter()
                .filter(|z| e8.norm(z).unwrap() == BigInt::from(2))
                .count();
        }
        assert_eq!(roots, 240);

        let d2 = Lattice::diagonal(2).unwrap();
        let v = enumerate_coset_below(&d2, &LatticeVector(vec![1, 0]), &BigInt::from(1), &budget()).unwrap();
        assert_eq!(v, vec![LatticeVector(vec![-1, 0]), LatticeVector(vec![1, 0])]);
        let v = enumerate_coset_below(&d2, &LatticeVector(vec![1, 1]), &BigInt::from(1), &budget()).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn naive_examples() {
        let d3 = Lattice::diagonal(3).unwrap();
        let r = naive_coset_min(&d3, &LatticeVector(vec![1, 1, 0]), 2).unwrap();
        assert_eq!(r.min_norm, BigInt::from(2));
        let r = naive_coset_min(&d3, &LatticeVector(vec![2, 0, 0]), 2).unwrap();
        assert_eq!(r.min_norm, BigInt::zero());
        let d7 = Lattice::diagonal(7).unwrap();
        assert!(matches!(
            naive_coset_min(&d7, &LatticeVector::zeros(7), 1),
            Err(Error::RankTooLarge { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let e8 = Lattice::e8();
        let err = enumerate_coset_below(&e8, &LatticeVector::zeros(8), &BigInt::from(40), &EnumBudget::new(100))
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { max_nodes: 100 }));
    }

    #[test]
    fn bigint_fallback_agrees() {
        // entries large enough that the scaled bounds overflow i128
        let big = BigInt::from(10).pow(30);
        let gram = vec![
            vec![big.clone(), BigInt::zero()],
            vec![BigInt::zero(), big.clone() * 3],
        ];
        let l = Lattice::from_gram(gram, Sign::Positive).unwrap();
        let r = coset_min(&l, &LatticeVector(vec![1, 1]), &budget()).unwrap();
        assert_eq!(r.min_norm, big * 4);
        assert_eq!(r.minimizers.len(), 4);
    }
}
