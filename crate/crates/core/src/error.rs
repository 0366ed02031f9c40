use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} exceeds the factorization size cap of {cap_bits} bits")]
    SizeCapExceeded { value: BigUint, cap_bits: u64 },

    #[error("{value} is not coprime to the modulus {modulus}")]
    NotCoprime { value: BigUint, modulus: BigUint },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("zero element has no multiplicative order or inverse")]
    ZeroElement,

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("elements belong to different extension rings")]
    SpecMismatch,

    #[error("no irreducible binomial exists for q = {q}, m = {m}")]
    NoBinomialExists { q: u64, m: usize },

    #[error("x^{m} - {a} is not irreducible over F_{q}")]
    IrreducibilityFailure { q: u64, m: usize, a: u64 },

    #[error("formula mismatch: {0}")]
    FormulaMismatch(String),

    #[error("search space of {needed} exceeds the budget of {budget}")]
    BoundsTooLarge { needed: u64, budget: u64 },

    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: BigUint, budget: u64 },

    #[error("selection vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that signal an instance beyond the configured budgets
    /// rather than bad input or a mathematical failure.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SizeCapExceeded { .. }
                | Error::BoundsTooLarge { .. }
                | Error::BudgetExceeded { .. }
        )
    }
}
