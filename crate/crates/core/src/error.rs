use crate::C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("log_gamma: pole of Gamma at z = {0}")]
    GammaPole(C64),

    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric budget exhausted: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite integrand sample at s = {0}")]
    Evaluation(C64),

    #[error("refinement check failed: {message} (suggested step {suggested_step:e})")]
    Refinement { message: String, suggested_step: f64 },

    #[error("degenerate shifts: {0}; perturb the shifts so that all pairwise sums are nonzero")]
    Degenerate(String),

    #[error("derivative order {0} unsupported (max 8)")]
    UnsupportedOrder(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
