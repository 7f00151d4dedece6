// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("all-zero input")]
    AllZero,
    #[error("point is the zero vector")]
    ZeroPoint,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("translation by the neutral element is the identity")]
    NeutralTranslation,
    #[error("irrational base point: {0}")]
    IrrationalBasePoint(String),
    #[error("degenerate composition: {0}")]
    Degenerate(String),
    #[error("equations of condition violated for ({degree}; {mults:?})")]
    NoetherViolated { degree: u32, mults: Vec<u32> },
    #[error("inconsistent shared-point data: degree would be {0}")]
    NegativeDegree(i64),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("sarkisov engine stuck: {0}")]
    Stuck(String),
    #[error("step cap {0} exceeded")]
    StepCap(usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("B not general enough: {0}")]
    NotGeneral(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
