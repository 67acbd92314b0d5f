use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("jet order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("monomial of total degree {degree} exceeds jet order {order}")]
    DegreeExceedsOrder { degree: u32, order: u32 },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("jet has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("inverse square root needs constant term 1, found {0}")]
    ConstantTermNotOne(String),
    #[error("binomial coefficient ({top} over {bottom}) needs an integer lower argument or integer difference")]
    BinomialDomain { top: String, bottom: String },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("jet order {actual} is below the required order {required}")]
    InsufficientOrder { required: u32, actual: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("ill-conditioned fit (condition estimate {0:e})")]
    IllConditioned(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
