use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotDefinite(usize),
    #[error("rank {0} is not a positive multiple of 4")]
    BadRank(usize),
    #[error("cannot combine lattices with different sign conventions")]
    SignMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient vector is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("lattice has no ambient coordinate embedding")]
    NoAmbientBasis,
    #[error("enumeration budget of {max_nodes} nodes exceeded")]
    BudgetExceeded { max_nodes: u64 },
    #[error("rank {rank} exceeds the limit {limit}")]
    RankTooLarge { rank: usize, limit: usize },
    #[error("parity mismatch: w^2 = {norm} but m = {m}")]
    ParityMismatch { norm: String, m: u32 },
    #[error("degree {m} exceeds the configured maximum {max}")]
    DegreeTooLarge { m: u32, max: u32 },
    #[error("vector is not extremal: coset minimum {min_norm} < {norm}")]
    NotExtremal { norm: String, min_norm: String },
    #[error("eta vanishes for the given certificate")]
    EtaVanishes,
    #[error("lattice is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("k = {0} is too small (need k >= 2)")]
    KTooSmall(i64),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
