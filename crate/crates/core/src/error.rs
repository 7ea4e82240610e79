use thiserror::Error;

use crate::conic::AdmissibilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{n} exceeds the supported bound 2^{bits}")]
    ModulusTooLarge { p: u64, n: u32, bits: u32 },
    #[error("{value} is not a unit modulo {p}")]
    NonUnit { value: i128, p: u64 },
    #[error("denominator vanishes modulo {p} at the evaluation point")]
    PoleModP { p: u64 },
    #[error("rational amplitude has the zero polynomial as denominator")]
    ZeroDenominator,
    #[error("polynomial degree {0} exceeds the cap of {max}", max = crate::polyrat::MAX_DEGREE)]
    DegreeTooLarge(usize),
    #[error("form is not admissible: {0}")]
    NotAdmissible(AdmissibilityReport),
    #[error("no solution modulo p found for an admissible form (p = {p})")]
    NoSolutionModP { p: u64 },
    #[error("enumeration produced {found} points, expected {expected}")]
    CardinalityMismatch { expected: u64, found: u64 },
    #[error("closed form {expected} disagrees with brute force {found}")]
    FormulaMismatch { expected: u64, found: u64 },
    #[error("algebraic identity failed: {0}")]
    IdentityMismatch(String),
    #[error("the form is singular")]
    SingularForm,
    #[error("work estimate {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
