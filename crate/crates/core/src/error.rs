use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,

    #[error("evaluation overflowed the floating-point range; renormalize and retry")]
    Range,

    #[error("constant term is zero; deflate the roots at the origin first")]
    ZeroConstantTerm,

    #[error("numerical breakdown at root-squaring step {step}")]
    PrecisionLoss { step: u32 },

    #[error("requested relative tolerance {required:e} is below the achievable {achievable:e}")]
    Tolerance { required: f64, achievable: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
