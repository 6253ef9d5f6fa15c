use thiserror::Error;

/// Errors produced by mesh construction, form assembly and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },

    #[error("grid functions live on different meshes")]
    MeshMismatch,

    #[error("non-finite sample value at x = {x}")]
    NonFiniteSample { x: f64 },

    #[error("partial form is not accretive: Re (Tu|u) = {value:.3e}")]
    NotAccretive { value: f64 },

    #[error("{vector} has imaginary part {imag_norm:.3e}, expected real-valued data")]
    NotReal { vector: &'static str, imag_norm: f64 },

    #[error("lower numerical-range bound violated: (Tu|u) = {value:.3e} < {required:.3e}")]
    RangeBoundViolated { value: f64, required: f64 },

    #[error("k_term = {k_term:.3e} too small for a non-negative extension (needs >= {required:.3e})")]
    KTermTooSmall { k_term: f64, required: f64 },

    #[error("operator does not leave the subspace invariant (defect {defect:.3e})")]
    NotInvariant { defect: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("integral for `{name}` diverges with the configured exponents")]
    DivergentIntegral { name: &'static str },

    #[error("divergence table is not monotone at epsilon = {epsilon:.3e}; quadrature under-resolved")]
    NonMonotoneTable { epsilon: f64 },

    #[error("coercivity calibration failed: measured lower bound {value:.3e} is not positive")]
    CoercivityCalibration { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
