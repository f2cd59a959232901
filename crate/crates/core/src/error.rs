use thiserror::Error;

/// Errors across lattice construction, sector enumeration, assembly,
/// eigensolving, evolution, and fitting.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("lattice must have 1 or 2 axes, got {0}")]
    BadDimensionality(usize),

    #[error("lattice extent must be at least 2, got {0}")]
    BadExtent(usize),

    #[error("boundary list has {got} entries for {axes} axes")]
    BoundaryMismatch { got: usize, axes: usize },

    #[error("charge placed on site {site}, lattice has {sites} sites")]
    ChargeOutOfRange { site: usize, sites: usize },

    #[error("charge configuration is infeasible: {0}")]
    InfeasibleCharges(String),

    #[error("sector dimension exceeds limit {max_dim} (at least {lower_bound} states)")]
    DimensionExceeded { max_dim: usize, lower_bound: usize },

    #[error("sector basis is empty")]
    EmptySector,

    #[error("invalid string path: {0}")]
    PathInvalid(String),

    #[error("raised configuration is outside the sector basis (truncation)")]
    NotInBasis,

    #[error("gauge coupling must be positive, got {0}")]
    BadCoupling(f64),

    #[error("vector length {got} does not match operator dimension {dim}")]
    LengthMismatch { got: usize, dim: usize },

    #[error("matrix is not symmetric: entry ({row},{col}) has no mirror")]
    NotSymmetric { row: usize, col: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("separation {separation} does not fit on the lattice (max {max})")]
    SeparationTooLarge { separation: usize, max: usize },

    #[error("fringe fit diverged: {0}")]
    FitDiverged(String),

    #[error("ambiguous fringe frequency: peaks at {omega_a:.6} and {omega_b:.6} within 10% power")]
    AmbiguousFrequency { omega_a: f64, omega_b: f64 },

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("{0}")]
    InvalidInput(String),
}
