use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("q = {0} is a power of 2 with an odd exponent: no primitive 3-normal element exists in F_{{q^6}}")]
    Inadmissible(u64),

    #[error("critical case n = 2k = {n}: the non-critical bound does not apply")]
    CriticalCase { n: u32 },

    #[error("{a} is not coprime to {modulus}")]
    NotCoprime { a: String, modulus: String },

    #[error("cannot factor {0}: cofactor outside the certified primality range")]
    Factorization(String),

    #[error("enumeration of {size} elements exceeds the guard of {guard}")]
    EnumerationGuard { size: String, guard: String },

    #[error("search exhausted for q = {0} without a witness")]
    SearchExhausted(u64),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
