use thiserror::Error;

use crate::corealg::MultiDegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not multihomogeneous")]
    NonHomogeneous,
    #[error("zero polynomial has no highest term")]
    ZeroPolynomial,
    #[error("prime {0} is unusable: too small or divides a stored denominator")]
    BadPrime(u64),
    #[error("expected n(n-1)/2 upper-triangle entries, got {0}")]
    BadLength(usize),
    #[error("sigma index t={t} outside 1..={n}")]
    BadT { t: usize, n: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("total degree {degree} exceeds configured bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("invariants do not share one multidegree: {0:?} vs {1:?}")]
    MixedMultidegree(MultiDegree, MultiDegree),
    #[error("bad block size: {0}")]
    BadSize(String),
    #[error("unsupported matrix size n={0}")]
    UnsupportedSize(usize),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad word: {0}")]
    BadWord(String),
}
