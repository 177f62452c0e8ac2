use thiserror::Error;

use crate::statistics::TestId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("nonpositive value at index {index}: {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("non-finite value at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },
    #[error("index k = {k} out of range 0..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("MTTF undefined where F_n(t)=0 (t = {t} < smallest observation {min})")]
    MttfUndefined { t: f64, min: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "significance level {alpha} outside (0, {max}] supported by the asymptotic approximation; \
         use Monte Carlo calibration instead"
    )]
    AlphaOutOfAnalyticRange { alpha: f64, max: f64 },
    #[error("analytic calibration is not available for {0}; use Monte Carlo calibration")]
    UnsupportedCalibration(TestId),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
