use thiserror::Error;

/// Errors produced by the model, control, stability and simulation layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical or configuration parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The vertical cable pull reaches or exceeds the human's weight, so
    /// the ground-contact assumption breaks down.
    #[error("human liftoff: vertical cable pull {pull:.3} N >= weight {weight:.3} N")]
    Liftoff { pull: f64, weight: f64 },

    /// The desired vertical cable force is zero, which leaves the robot
    /// reference position undefined.
    #[error("degenerate reference: desired vertical cable force is zero")]
    DegenerateReference,

    /// A matrix that must be inverted is singular. Cannot occur for valid
    /// symmetric positive definite inputs; kept as a guard.
    #[error("singular matrix in {0}")]
    SingularMatrix(&'static str),

    /// A state component left the numerically sane range during integration.
    #[error("numerical blowup at t = {t:.6} s: |{component}| = {value:.3e}")]
    NumericalBlowup {
        t: f64,
        component: &'static str,
        value: f64,
    },

    /// A trajectory log is too short for the requested analysis.
    #[error("insufficient samples: got {got}, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
