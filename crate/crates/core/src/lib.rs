//! Nonparametric tests of exponentiality against a trend change in the mean
//! time to failure (MTTF) under an age replacement policy.
//!
//! The departure measure γ(F, t) vanishes for every exponential F; its
//! supremum over t grows when the MTTF increases and then decreases (IDMTTF)
//! and the supremum of −γ grows in the dual DIMTTF case. The crate provides
//!
//! * lifetime samples with spacings, the scaled TTT transform and the
//!   empirical MTTF curve ([`sample`]);
//! * the statistics γ*, κ*, the bathtub competitors T*, U* and Aarset's G_n
//!   ([`statistics`]), with a direct-definition cross-check ([`oracle`]);
//! * asymptotic (Durbin) and Monte Carlo null calibration ([`calibration`]);
//! * samplers for exponential power and lognormal alternatives
//!   ([`distributions`]) and a seeded size/power study engine
//!   ([`experiment`]).
//!
//! ```
//! use mttf_trend::{gamma_star, Sample};
//!
//! let s = Sample::from_slice(&[2.0, 1.0]).unwrap();
//! assert!((gamma_star(&s).value - 2f64.sqrt() / 1.5).abs() < 1e-12);
//! ```

pub mod calibration;
pub mod distributions;
pub mod error;
pub mod experiment;
pub mod numeric;
pub mod oracle;
pub mod outcome;
pub mod rng;
pub mod sample;
pub mod statistics;

pub use calibration::{
    asymptotic_critical, durbin_density, durbin_tail, mc_null_quantiles, p_value,
    randomized_gn_decision, Calibration, CovarianceKernel, CriticalValueTable, GnNullPmf,
    NullDistribution, Provenance, RandomizedDecision, RandomizedRule, SampleSize, Tail,
};
pub use distributions::{
    sample_exponential, sample_exponential_power, sample_lognormal, AlternativeDistribution,
};
pub use error::{Error, Result};
pub use experiment::{
    empirical_size_study, markdown_table, power_study, ExperimentSpec, PowerReport,
};
pub use outcome::{run_test, AgingClass, Decision, TestOutcome};
pub use sample::{MttfCurve, Sample, Spacings, TttTransform};
pub use statistics::{
    aarset_gn, compute, eta, gamma_star, kappa_star, na_t_star, na_u_star, zeta, StatisticValue,
    TestId,
};
