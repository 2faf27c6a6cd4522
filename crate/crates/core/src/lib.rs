//! Exact complex Monge-Ampère measures of toric plurisubharmonic functions
//! on the unit polydisc.
//!
//! A toric function `u(z) = g(log|z_1|, ..., log|z_n|)` is modelled by a
//! max-plus expression `g(x) = max_t (c_t + <a_t, x>)` with non-negative
//! rational slopes. Its Monge-Ampère measure is a finite sum of atoms on
//! torus fibres: interior atoms dual to the cells of the regular
//! subdivision of the lifted exponents, and a Dirac mass at the origin
//! given by the covolume of the Newton diagram. Masses are normalised so
//! that `log|z|` has unit mass at `0` in one variable, hence every mass is
//! `n!` times a Euclidean volume.

pub mod corpus;
pub mod dsl;
pub mod expr;
pub mod geometry;
pub mod measure;
pub mod oracle;
pub mod rational;
pub mod slice;
pub mod suites;

pub use expr::{ExponentVector, MobiusTag, SliceResult, TropicalExpr, TropicalTerm};
pub use rational::{LogCoord, Rational};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("coordinate {index} is positive; the domain is the open unit polydisc")]
    PositiveCoordinate { index: usize },
    #[error("Newton diagram is not convenient: {0}")]
    NotConvenient(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
