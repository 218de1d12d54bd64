//! Spinor representations, Lorentzian symmetric-space models, and twistor
//! spinor machinery.
//!
//! The crate is organised bottom-up:
//!
//! * [`clifford`] — explicit complex Clifford-algebra representations built
//!   from Kronecker products of 2x2 matrices, together with the standard
//!   orthonormal spinor basis, volume elements and chirality projectors.
//! * [`spaces`] — coordinate models of the supported pseudo-Riemannian
//!   spaces (flat space, Lorentzian symmetric plane-wave models and their
//!   compactified relatives, pseudo-spheres and pseudo-hyperbolic quadrics)
//!   with exact curvature data and a finite-difference curvature oracle.
//! * [`spinops`] — the spinor covariant derivative, Dirac operator, twistor
//!   residual and integrability checks.
//! * [`solutions`] — explicit finite-dimensional solution families of the
//!   twistor equation on each supported space.
//! * [`quotients`] — spin structures on quotients by discrete isometry
//!   groups and the dimension of the invariant subspace of solutions.
//!
//! All numerical linear algebra is done over `Complex<f64>` using
//! [`nalgebra`] dynamic matrices.

pub mod clifford;
pub mod linalg;
pub mod quotients;
pub mod solutions;
pub mod spaces;
pub mod spinops;

use thiserror::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dynamically sized complex vector (spinor values, coefficient vectors).
pub type CVector = nalgebra::DVector<C64>;
/// Dynamically sized complex matrix (Clifford generators, lifts, solvers).
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Real vector (chart points, tangent vectors).
pub type RVector = nalgebra::DVector<f64>;
/// Real matrix (metrics, differentials).
pub type RMatrix = nalgebra::DMatrix<f64>;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested Clifford algebra dimension exceeds the supported range.
    #[error("dimension n={n} out of supported range (2 <= n <= {max})")]
    UnsupportedDimension { n: usize, max: usize },

    /// Operation requires an even-dimensional algebra (chirality split).
    #[error("chirality split requires even n, got n={n}")]
    OddDimensionSplit { n: usize },

    /// Operation is not defined for the given space model.
    #[error("operation `{op}` is not supported on space kind `{kind}`")]
    UnsupportedSpace { op: &'static str, kind: String },

    /// A vector that must be tangent to the space fails the tangency test.
    #[error("vector is not tangent at the given point (defect {defect:.3e})")]
    NotTangent { defect: f64 },

    /// Invalid model parameters (empty lambda, non-positive radius, ...).
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    /// Parameter vector length does not match the family dimension.
    #[error("expected {expected} parameters, got {got}")]
    BadParameterCount { expected: usize, got: usize },

    /// Quotient is not orientable, so it carries no spin structure data.
    #[error("quotient is not orientable: {0}")]
    NonOrientable(String),

    /// Quotient is orientable but admits no spin structure.
    #[error("quotient admits no spin structure: {0}")]
    NoSpinStructure(String),

    /// A group generator does not map the solution family into itself.
    #[error("generator `{label}` does not preserve the solution family (residual {residual:.3e})")]
    FamilyNotPreserved { label: String, residual: f64 },

    /// The numerical rank of the invariance system did not stabilise.
    #[error("rank of invariance system did not stabilise when adding samples ({0})")]
    RankUnstable(String),

    /// A generator specification is inconsistent with the space.
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    /// ω-type eigenspace computation needs an even number of generators.
    #[error("eigenspace split needs an even number of generator indices, got {0}")]
    OddIndexCount(usize),

    /// A field fails a precondition of the requested check.
    #[error("field does not satisfy required equation: {0}")]
    NotASolution(String),
}

/// Convenience result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Integer part of n/2, the exponent in spinor dimension formulas.
pub fn half_floor(n: usize) -> usize {
    n / 2
}

/// Dimension `2^(n/2)` of the complex spinor module in dimension `n`.
pub fn spinor_dim(n: usize) -> usize {
    1 << half_floor(n)
}
