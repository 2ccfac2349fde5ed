use std::fmt;

use thiserror::Error;

/// Pipeline stage a design error originated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Spec,
    ObjectFunction,
    Projection,
    Synthesis,
    Assembly,
    Stabilization,
    Response,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Spec => "spec",
            Stage::ObjectFunction => "object-function",
            Stage::Projection => "projection",
            Stage::Synthesis => "fir-synthesis",
            Stage::Assembly => "iir-assembly",
            Stage::Stabilization => "stabilization",
            Stage::Response => "response",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside domain [{min}, {max}]")]
    Domain { value: f64, min: f64, max: f64 },

    #[error("invalid filter spec: {0}")]
    InvalidSpec(String),

    #[error("denominator level must be positive (got {0}); a zero in 0 <= omega <= pi makes the IIR filter unstable")]
    ZeroDenominatorLevel(f64),

    #[error("quadrature order {got} too low, need at least {need}")]
    QuadratureOrder { got: usize, need: usize },

    #[error("function returned non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero polynomial: no coefficients survive trimming")]
    ZeroPolynomial,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("denominator vanishes in band: min over [0, 1] is {min:e} at x = {at}")]
    DenominatorVanishes { min: f64, at: f64 },

    #[error("pole on unit circle at {re} + {im}j (|z| = {modulus}); shift-to-origin cannot stabilize it")]
    PoleOnUnitCircle { re: f64, im: f64, modulus: f64 },

    #[error("model already stabilized")]
    AlreadyStabilized,

    #[error("evaluation at pole: omega = {omega}{}", index.map(|i| format!(" (grid index {i})")).unwrap_or_default())]
    EvaluationAtPole { omega: f64, index: Option<usize> },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("[{stage}] {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tags the error with a pipeline stage unless it already carries one.
    pub fn at(self, stage: Stage) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// The stage tag, if the error was raised inside the design pipeline.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    /// The underlying error with any stage tag removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
