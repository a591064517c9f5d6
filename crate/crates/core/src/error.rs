use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("{0} is not a subfield of {1}")]
    NotSubfield(String, String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("modulus must have positive degree")]
    ConstantModulus,
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("arguments are not coprime: gcd({0}, {1}) != 1")]
    NotCoprime(String, String),
    #[error("element is not v-integral")]
    NotIntegral,
    #[error("pole encountered: {0}")]
    Pole(String),
    #[error("division by a series indistinguishable from zero")]
    ZeroDivision,
    #[error("value is zero at working precision")]
    ZeroAtPrecision,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("ring does not support inverse Frobenius")]
    NoInverseFrobenius,
    #[error("digit modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: usize, got: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("context too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
