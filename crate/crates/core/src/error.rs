use thiserror::Error;

/// Errors surfaced by graph construction, solvers, and the evaluation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid feature table: {0}")]
    InvalidFeatures(String),

    #[error("k = {k} out of range for {n} samples (need 1 <= k < n)")]
    KOutOfRange { k: usize, n: usize },

    #[error("group {group} has {size} members, need more than k = {k}")]
    GroupTooSmall { group: i64, size: usize, k: usize },

    #[error("group-constrained construction requires group labels")]
    MissingGroupLabels,

    #[error("operation requires class labels on every row")]
    MissingClassLabels,

    #[error("vertex {0} is isolated (degree 0)")]
    IsolatedVertex(usize),

    #[error("hyperedge {edge} has {size} vertices, need at least 2")]
    HyperedgeTooSmall { edge: usize, size: usize },

    #[error("{what} must be symmetric (max asymmetry {max_diff:e})")]
    NotSymmetric { what: &'static str, max_diff: f64 },

    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("zero vector has no p-Dirichlet ratio")]
    ZeroVector,

    #[error("embedding column {0} is zero")]
    ZeroColumn(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("orthonormalization failed: columns are rank deficient")]
    RankDeficient,

    #[error("eigendecomposition did not converge")]
    EigenFailed,

    #[error("labeled fraction {fraction} yields no labeled samples in class {class}")]
    LabeledFractionTooSmall { fraction: f64, class: i64 },

    #[error("need at least two labeled classes, found {0}")]
    TooFewClasses(usize),

    #[error("hyperparameter grid is empty: {0}")]
    EmptyGrid(&'static str),

    #[error("no positive items: average precision undefined")]
    NoPositives,
}

pub type Result<T> = std::result::Result<T, Error>;
