use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("principal value unstable: relative change {change:.3e} between eps = {eps:.3e} and eps/2 exceeds {tol:.1e}")]
    PvInstability { eps: f64, change: f64, tol: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("trace undefined for s = {s}: the lift needs s > 1/2")]
    TraceUndefined { s: f64 },

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Refinement grew the seminorm by more than 10% per level.
    DivergenceSuspected { growth: f64 },
    /// The samples do not decay at the box boundary, so the periodic transform
    /// sees a jump.
    Periodization { boundary_max: f64 },
    /// `u` does not vanish outside the truncation ball; `bound` majorizes the
    /// neglected tail integral.
    TailAssumptionViolated { bound: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::DivergenceSuspected { growth } => {
                write!(f, "divergence-suspected (growth {growth:.3} per level)")
            }
            Warning::Periodization { boundary_max } => {
                write!(f, "periodization (boundary max {boundary_max:.3e})")
            }
            Warning::TailAssumptionViolated { bound } => {
                write!(f, "tail-assumption-violated (bound {bound:.3e})")
            }
        }
    }
}
