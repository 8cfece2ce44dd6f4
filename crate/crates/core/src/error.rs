use thiserror::Error;

pub type Result<T> = std::result::Result<T, EitError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EitError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("block with n1 = 0 is an uncoupled state, not a 3-level block")]
    UncoupledBlock,

    #[error("complex-root regime: q^2/4 + p^3/27 = {discriminant:e} > 0")]
    ComplexRoots { discriminant: f64 },

    #[error("coupling vacuum: beta = 0 makes the rho23 prefactor singular")]
    CouplingVacuum,

    #[error("no coupling-pulse group delay defined for zero probe Rabi frequency")]
    NoCouplingGroupDelay,

    #[error("field amplitudes are not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("field must be of product form for this operation")]
    NotProductField,

    #[error("polynomial fit is ill-conditioned (cond = {condition:e}); shrink fit interval")]
    IllConditioned { condition: f64 },

    #[error("invalid fit input: {0}")]
    FitInput(&'static str),

    #[error("truncated basis dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("step size too large: max Rabi frequency * dt = {product} >= 0.05")]
    StepTooLarge { product: f64 },

    #[error("norm drift {drift:e} exceeds 1e-6; reduce the step size")]
    NormDrift { drift: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NonHermitian { asymmetry: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unsupported nonlinear order {0}; expected 2, 4 or 6")]
    UnsupportedOrder(u32),
}
