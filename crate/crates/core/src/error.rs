use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("lattice depth must be finite and non-negative, got {0}")]
    NegativeDepth(f64),
    #[error("invalid temperatures: cold {cold}, hot {hot}")]
    InvalidTemperatures { cold: f64, hot: f64 },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("symmetric eigensolver did not converge")]
    EigenNoConvergence,
    #[error("requested {requested} states but only {available} are available")]
    InsufficientStates { requested: usize, available: usize },
    #[error("chemical potential bracket [{lo}, {hi}] does not contain the root")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("time {t} outside ramp interval [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error("invalid ramp: {0}")]
    InvalidRamp(&'static str),
    #[error("time-step refinement did not reach relative change {tol:e} (last {achieved:e})")]
    StepRefinement { tol: f64, achieved: f64 },
    #[error("norm drift {0:e} exceeds tolerance")]
    NormDrift(f64),
    #[error("single-particle engine produces no work ({0:e}); ratio undefined")]
    UndefinedRatio(f64),
    #[error("no engine cell on the depth grid")]
    NoEngineRegion,
    #[error("outside validity of closed form: {0}")]
    OutOfRegime(&'static str),
    #[error("interpolation denominator vanished at epsilon = {0}")]
    DegenerateInterpolation(f64),
    #[error("STA ramp rejected: {singular} of {total} grid points singular")]
    StaRejected { singular: usize, total: usize },
}

impl Error {
    /// Failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNoConvergence
                | Error::BracketFailure { .. }
                | Error::StepRefinement { .. }
                | Error::NormDrift(_)
                | Error::UndefinedRatio(_)
                | Error::NoEngineRegion
                | Error::DegenerateInterpolation(_)
                | Error::StaRejected { .. }
        )
    }
}
