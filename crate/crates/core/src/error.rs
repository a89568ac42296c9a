use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Cartan type {series}{rank}")]
    InvalidType { series: char, rank: usize },

    #[error("node {node} out of range 1..={rank}")]
    IndexOutOfRange { node: usize, rank: usize },

    #[error("negative KR length {0}")]
    NegativeLength(i64),

    #[error("invalid length {0} (must be >= 1)")]
    InvalidLength(i64),

    #[error("right-negativity is undefined for the monomial 1")]
    IdentityMonomial,

    #[error("multiplicity at offset {offset} must be positive, got {value}")]
    NonPositiveMultiplicity { offset: i64, value: i64 },

    #[error("monomial {monomial} is not {node}-dominant")]
    NotIDominant { node: usize, monomial: String },

    #[error("negative coefficient {coefficient} for {node}-dominant monomial {monomial}")]
    NegativeResidual { node: usize, monomial: String, coefficient: i64 },

    #[error("{count} monomials left after {node}-decomposition, e.g. {example}")]
    NonZeroRemainder { node: usize, count: usize, example: String },

    #[error("second dominant monomial {0} forced: module is not special")]
    NotSpecial(String),

    #[error("inconsistent coefficients for {monomial}: {detail}")]
    Inconsistent { monomial: String, detail: String },

    #[error("depth cap {0} exceeded")]
    DepthCapExceeded(usize),

    #[error("monomial cap {0} exceeded")]
    MonomialCapExceeded(usize),

    #[error("integer overflow")]
    Overflow,

    #[error("k range must hold at least two values >= depth {depth}")]
    BadRange { depth: usize },

    #[error("weight {0} is not in -Q+")]
    NotInRootLattice(String),

    #[error("binomial lower index must be nonnegative, got {0}")]
    NegativeB(i64),

    #[error("vacancy number P for node {node}, level {level} is not integral: {value}")]
    NonIntegralP { node: usize, level: u32, value: String },

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error("cache file {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
