use thiserror::Error;

use crate::scalar::Scalar;

/// Crate-wide error type.
///
/// Variants fall into three broad categories, which the CLI maps to exit
/// codes: malformed or unsupported input (exit 2), exhausted search budgets
/// (exit 3), and property failures that carry a witness (exit 1).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element has {found} coordinates, group spec expects {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("operation requires a finite group, but the spec has infinite factors")]
    InfiniteGroup,

    #[error("distance matrix is not symmetric at ({i},{j})")]
    AsymmetricMatrix { i: usize, j: usize },

    #[error("negative distance at ({i},{j})")]
    NegativeDistance { i: usize, j: usize },

    #[error("nonzero diagonal entry at ({i},{i})")]
    NonzeroDiagonal { i: usize },

    #[error("zero distance between distinct points {i} and {j}")]
    ZeroOffDiagonal { i: usize, j: usize },

    #[error("triangle inequality fails: d({i},{j}) > d({i},{via}) + d({via},{j})")]
    TriangleViolation { i: usize, j: usize, via: usize },

    #[error("points {i} and {j} coincide")]
    DuplicatePoint { i: usize, j: usize },

    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("coefficients do not sum to zero")]
    NonZeroSum,

    #[error("search budget exceeded: needs about {needed} nodes, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("factor {index} is not supported here: {reason}")]
    UnsupportedFactor { index: usize, reason: String },

    #[error("norm axiom fails: {0}")]
    NormAxiomViolation(String),

    #[error("plan is not feasible for the instance: {0}")]
    InfeasiblePlan(String),

    #[error("point {index} is not an extreme point of the unit polytope")]
    NotExtreme { index: usize },

    #[error("supplied points are linearly dependent")]
    DependentPoints,

    #[error("triple does not sum to zero")]
    NotZeroMean,

    #[error("element {0} is decomposable")]
    NotIndecomposable(String),

    #[error("elements generate the same cyclic subgroup")]
    SameSubgroup,

    #[error("element {0} fits neither sign class")]
    InconsistentClasses(String),

    #[error("vertex {v} lies on the boundary set")]
    VertexOnBoundary { v: usize },

    #[error("star plan violates norm additivity in row {row}")]
    PlanNotNbp { row: usize },

    #[error("star plan does not match the star coefficients: {0}")]
    PlanMismatch(String),

    #[error("no norm-additive plan exists for the star at vertex {vertex} (searched {search_space} assignments)")]
    NoNbpPlanForStar {
        vertex: usize,
        star_coeffs: String,
        search_space: u128,
    },

    #[error("tree map is not calibrated: fill mass {fill} differs from optimal cost {optimal}")]
    NotCalibrated { fill: Scalar, optimal: Scalar },

    #[error("map is not 1-Lipschitz on pair ({i},{j}): tree distance {tree} > space distance {space}")]
    LipschitzViolation {
        i: usize,
        j: usize,
        tree: Scalar,
        space: Scalar,
    },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coarse classification used by the CLI exit-code scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// A checked property is false and the error carries the witness.
    PropertyFalse,
    /// The input was malformed, inconsistent, or unsupported.
    InvalidInput,
    /// A search budget was exhausted before completion.
    Budget,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::BudgetExceeded { .. } => ErrorCategory::Budget,
            Error::NoNbpPlanForStar { .. }
            | Error::NotCalibrated { .. }
            | Error::LipschitzViolation { .. } => ErrorCategory::PropertyFalse,
            _ => ErrorCategory::InvalidInput,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
