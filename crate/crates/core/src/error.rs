use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid tensor space: {0}")]
    InvalidSpace(String),

    #[error("space mismatch: left factors {left:?}, right factors {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("operator is not square or does not match its space ({rows}x{cols}, expected {expected})")]
    BadShape { rows: usize, cols: usize, expected: usize },

    #[error("operator contains non-finite entries")]
    NonFinite,

    #[error("factor index {index} out of range for {count} factors")]
    BadFactor { index: usize, count: usize },

    #[error("local operator dimension {got} does not match factor dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Gamma pole at z = {z} (non-positive integer {n})")]
    GammaPole { z: C64, n: i64 },

    #[error("pole in {side} argument {index}: {source}")]
    RatioPole {
        side: &'static str,
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("q-Gamma pole at x = {x} (factor {j} vanishes)")]
    QGammaPole { x: C64, j: usize },

    #[error("infinite product does not converge: {0}")]
    Divergent(String),

    #[error("truncation did not reach tolerance {tol:e} within {max_terms} terms (tail {tail:e})")]
    NotConverged { tol: f64, max_terms: usize, tail: f64 },

    #[error("kernel {name} singular at ω = 0: {detail}")]
    KernelSingularity { name: String, detail: String },

    #[error("unknown kernel {name} for regime {regime}")]
    UnknownKernel { name: String, regime: String },

    #[error("representation does not match regime: {0}")]
    RepMismatch(String),

    #[error("pole or zero of scalar prefactor near {at}: |value| = {value:e}")]
    PrefactorPole { at: C64, value: f64 },

    #[error("Hilbert space dimension {dim} exceeds bound {bound}")]
    ResourceBound { dim: usize, bound: usize },

    #[error("coincident Bethe roots at indices {0} and {1}")]
    CoincidentRoots(usize, usize),
}
