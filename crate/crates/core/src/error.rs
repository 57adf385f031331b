use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("delay must be finite, got {0}")]
    NonFiniteDelay(f64),

    #[error("spectral width must be positive and finite, got {0}")]
    InvalidWidth(f64),

    #[error("filter wavelengths must be positive and finite (fwhm={fwhm}, center={center})")]
    InvalidFilter { fwhm: f64, center: f64 },

    #[error("squared overlap must lie in (0, 1], got {0}")]
    OverlapOutOfRange(f64),

    #[error("overlap amplitude must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),

    #[error("at least one photon per input mode is required")]
    NoPhotons,

    #[error("{0} photons per mode exceeds the supported maximum of {max}", max = crate::decomposition::MAX_PHOTONS_PER_MODE)]
    TooManyPhotons(usize),

    #[error("transmission amplitude must lie strictly between 0 and 1, got {0}")]
    InvalidTransmission(f64),

    #[error("event ({m},{n}) does not contain {total} photons")]
    EventMismatch { m: usize, n: usize, total: usize },

    #[error("cannot convolve an empty list of distributions")]
    EmptyConvolution,

    #[error("extremum search needs at least {min} grid points, got {got}", min = crate::assembly::MIN_GRID)]
    GridTooCoarse { got: usize },

    #[error("oracle disagreement {deviation:.3e} exceeds tolerance {tolerance:.3e} (k={k}, alpha={alpha}, event ({m},{n}))")]
    OracleMismatch {
        k: usize,
        alpha: f64,
        m: usize,
        n: usize,
        deviation: f64,
        tolerance: f64,
    },
}
