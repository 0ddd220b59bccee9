use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// `a` has no inverse modulo `m`; `gcd` is a nontrivial common divisor.
    #[error("{a} is not invertible modulo {m} (gcd = {gcd})")]
    NotInvertible {
        a: BigUint,
        m: BigUint,
        gcd: BigUint,
    },

    /// The CRT construction needs coprime (here: distinct) primes.
    #[error("degenerate input: p = q = {0}")]
    Degenerate(BigUint),

    /// A brute-force or exact-enumeration guard was exceeded.
    #[error("refused: {0}")]
    RefusedTooLarge(String),

    #[error("compilation requires the factors p and q to be known")]
    CompilationRequiresFactors,

    #[error("base has period {0}; only period-2 bases compile to the two-qubit circuit")]
    NotCompilable(u64),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid semiprime: {0}")]
    InvalidSemiprime(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NotInvertible { .. } => "not_invertible",
            Error::Degenerate(_) => "degenerate",
            Error::RefusedTooLarge(_) => "refused_too_large",
            Error::CompilationRequiresFactors => "compilation_requires_factors",
            Error::NotCompilable(_) => "not_compilable",
            Error::MalformedCircuit(_) => "malformed_circuit",
            Error::Parse(_) => "parse",
            Error::InvalidSemiprime(_) => "invalid_semiprime",
            Error::Io(_) => "io",
        }
    }
}
