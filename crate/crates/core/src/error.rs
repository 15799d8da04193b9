use thiserror::Error;

/// Errors raised by the continued fraction, Pell, family and field routines.
///
/// Integers are carried as decimal strings so the error type stays independent
/// of the scalar type a computation ran over.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is a perfect square")]
    PerfectSquare(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {requested} out of range (only {available} quotients available)")]
    Index { requested: usize, available: usize },

    #[error("no congruence row matches f={f} (c={c}, h={h})")]
    Unclassified { f: String, c: String, h: String },

    #[error("{family}: {what} is not integral")]
    NonIntegral { family: String, what: String },

    #[error("{family} does not cover f={f}: {reason}")]
    NotCovered { family: String, f: String, reason: String },

    #[error("{n} is not squarefree ({witness}^2 divides it)")]
    NotSquarefree { n: String, witness: String },

    #[error("congruence condition failed: {0}")]
    Congruence(String),

    #[error("the fundamental unit of Q(sqrt({d})) has norm -1, so X + Y*sqrt(D) is its square")]
    NormMinusOne { d: String },

    #[error("cross-check mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
