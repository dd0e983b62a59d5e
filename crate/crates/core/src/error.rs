use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("plate needs at least one sector")]
    EmptyPlate,
    #[error("{boundaries} boundaries but {phases} phases")]
    LengthMismatch { boundaries: usize, phases: usize },
    #[error("boundary {index} ({value}) is outside [0, 2pi)")]
    BoundaryOutOfRange { index: usize, value: f64 },
    #[error("boundaries not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("{field}[{index}] is not finite")]
    NonFinite { field: &'static str, index: usize },
    #[error("alternating plate needs an even, nonzero number of boundaries, got {0}")]
    OddBoundaryCount(usize),
    #[error("angle {value} is outside [{min}, {max}]")]
    AngleOutOfRange { value: f64, min: f64, max: f64 },
    #[error("quadrature needs at least {required} samples, got {given}")]
    InsufficientSamples { required: usize, given: usize },
    #[error("spectrum has no power left after cutting at |l| <= {l_cut}")]
    NothingRetained { l_cut: usize },
    #[error("spectrum carries no power")]
    ZeroSpectrum,
    #[error("source weights must be finite and nonnegative (entry {index} is {value})")]
    InvalidWeight { index: usize, value: f64 },
    #[error("source weights sum to zero")]
    ZeroWeights,
    #[error("fringe has zero peak")]
    ZeroFringe,
    #[error("fringe grid is not uniform over [0, 2pi) at sample {index}")]
    NonUniformGrid { index: usize },
    #[error("fringe needs at least {required} samples, got {given}")]
    Undersampled { required: usize, given: usize },
    #[error("fringe rate at sample {index} is negative or not finite")]
    InvalidRate { index: usize },
    #[error("number of mesas must be at least 1")]
    InvalidMesaCount,
    #[error("evaluation budget must be at least 1")]
    InvalidBudget,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
