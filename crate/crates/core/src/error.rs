use thiserror::Error;

use crate::lie::GroupSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group mismatch: expected {expected}, found {found}")]
    SpecMismatch { expected: GroupSpec, found: GroupSpec },

    #[error("logarithm undefined on the cut locus (angle {angle:.6})")]
    CutLocus { angle: f64 },

    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(usize),

    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("Ad(r(chi)) is not the identity (deviation {deviation:.3e})")]
    AdNotCentral { deviation: f64 },

    #[error("charge is not central: |ad(X)| = {deviation:.3e}")]
    NonCentralCharge { deviation: f64 },

    #[error("operation not supported for group {0}")]
    UnsupportedGroup(GroupSpec),

    #[error("representation is not on the level set (residual {residual:.3e} > tol {tol:.3e})")]
    NotOnLevelSet { residual: f64, tol: f64 },

    #[error("substitution does not send the relator to a conjugate of itself")]
    RelatorNotPreserved,

    #[error("vector is not a cocycle: |d1 u| = {defect:.3e}")]
    NotACocycle { defect: f64 },

    #[error("point ({x:.6}, {y:.6}) lies outside the chart")]
    ChartViolation { x: f64, y: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
