use thiserror::Error;

/// Everything that can go wrong, partitioned by how the CLI reports it:
/// validation errors exit 2, numerical failures exit 3, I/O failures exit 4.
#[derive(Debug, Error)]
pub enum FrontError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("profile is not of KPP type: {0}")]
    KppViolation(String),

    #[error("bad reaction table: {0}")]
    BadTable(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("trial function must be nondecreasing: {0}")]
    NonMonotoneTrial(String),

    #[error("too few samples for fit: have {have}, need {need}")]
    TooFewSamples { have: usize, need: usize },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("no sign change when bracketing: {0}")]
    NoSignChange(String),

    #[error("integration step size collapsed: {0}")]
    StiffIntegration(String),

    #[error("grid too coarse for requested accuracy: {0}")]
    GridTooCoarse(String),

    #[error("quadrature failed to meet tolerance: {0}")]
    QuadratureFailure(String),

    #[error("time step went unstable: {0}")]
    UnstableStep(String),

    #[error("front reached the domain boundary before t_final; enlarge the box")]
    FrontHitBoundary,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FrontError>;

impl FrontError {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        use FrontError::*;
        match self {
            EpsilonOutOfRange(_) | ParameterOutOfRange(_) | KppViolation(_) | BadTable(_)
            | DomainError(_) | NonMonotoneTrial(_) | TooFewSamples { .. } => 2,
            NoConvergence(_) | NoSignChange(_) | StiffIntegration(_) | GridTooCoarse(_)
            | QuadratureFailure(_) | UnstableStep(_) | FrontHitBoundary => 3,
            Io(_) => 4,
        }
    }
}

/// Reject epsilon outside the open unit interval.
pub fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !epsilon.is_finite() {
        return Err(FrontError::EpsilonOutOfRange(epsilon));
    }
    Ok(())
}
