use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system {family}{rank}: {reason}")]
    InvalidRootSystem {
        family: char,
        rank: usize,
        reason: String,
    },
    #[error("Weyl group order {order} exceeds enumeration cap {cap}")]
    WeylCapExceeded { order: u128, cap: u64 },
    #[error("term budget {budget} exceeded while {stage}")]
    TermBudgetExceeded { budget: usize, stage: &'static str },
    #[error("wall-clock budget of {seconds} s exceeded while {stage}")]
    WallBudgetExceeded { seconds: u64, stage: &'static str },
    #[error("operands live in different variable sets ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact polynomial division (nonzero remainder)")]
    InexactDivision,
    #[error("substitution produced a zero denominator")]
    ZeroDenominator,
    #[error("denominator does not have unit constant term; not series-expandable at the origin")]
    NotSeriesExpandable,
    #[error("series coefficient is not a polynomial in q (odd or negative power of t)")]
    NotPolynomialInQ,
    #[error("insufficient expansion depth: need total degree {needed}, table holds {have}")]
    DegreeShortfall { needed: u32, have: u32 },
    #[error("argument {value} must be odd and positive")]
    BadModulus { value: i64 },
    #[error("internal certification failed: {0}")]
    Certification(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
