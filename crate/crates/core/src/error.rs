use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial does not divide evenly (remainder {remainder:.3e})")]
    NotDivisible { remainder: f64 },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("initial field is not holomorphic")]
    NotHolomorphic,

    #[error("initial field is constant")]
    ConstantField,

    #[error("ladder terminated early at index {index} of {n}")]
    LadderTerminated { index: usize, n: usize },

    #[error("projector has no further image under the recurrence")]
    LadderEnd,

    #[error("invalid spin label: {0}")]
    InvalidSpin(String),

    #[error("stereographic projection undefined at the south pole")]
    SouthPole,

    #[error("quadrature did not converge: estimate {estimate:.3e} exceeds {tol:.3e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported schema version {0}")]
    Schema(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
