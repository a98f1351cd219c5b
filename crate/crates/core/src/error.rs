use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("matrix is not positive semidefinite (pivot {pivot:e})")]
    NotPositiveSemidefinite { pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid linear model: {0}")]
    InvalidModel(String),

    #[error("mutual information evaluated to {value:e} bits, below the rounding band")]
    NegativeMutualInformation { value: f64 },

    #[error("at least 2 transmit antennas are required, got {0}")]
    TooFewAntennas(usize),

    #[error("scheme needs a block of {expected} slots with {antennas} antennas, got {slots} slots with {got} antennas")]
    BlockShape {
        expected: usize,
        antennas: usize,
        slots: usize,
        got: usize,
    },

    #[error("slot count must be at least 1")]
    NoSlots,

    #[error("power must be positive and finite, got {0}")]
    InvalidPower(f64),

    #[error("slot {slot} has zero expected transmit power")]
    DegenerateSlot { slot: usize },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(&'static str),

    #[error("quantity {quantity} is not available for scheme {scheme}")]
    IncompatibleQuantity {
        scheme: &'static str,
        quantity: &'static str,
    },

    #[error("trials must be at least 1")]
    NoTrials,

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("slope fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("slope fit needs distinct powers; {0} dB appears twice")]
    DuplicatePower(f64),

    #[error("point ({d1}, {d2}) lies outside the SDoF region")]
    OutsideRegion { d1: f64, d2: f64 },

    #[error("invalid region point ({d1}, {d2})")]
    InvalidRegionPoint { d1: f64, d2: f64 },

    #[error("{0}")]
    Config(String),
}
