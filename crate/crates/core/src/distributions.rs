//! Lifetime distributions used as null and alternative models, sampled by
//! inverse transform from open-interval uniforms.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{normal_cdf, normal_quantile};
use crate::rng::open_uniform;
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlternativeDistribution {
    /// Survival exp(−λx).
    Exponential { rate: f64 },
    /// Survival exp{−(e^{(λx)^β} − 1)}; bathtub failure rate for β < 1.
    ExponentialPower { rate: f64, shape: f64 },
    /// ln X ~ N(μ, σ²).
    LogNormal { mu: f64, sigma: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl AlternativeDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Ok(Self::Exponential { rate })
    }

    pub fn exponential_power(rate: f64, shape: f64) -> Result<Self> {
        positive("rate", rate)?;
        positive("shape", shape)?;
        Ok(Self::ExponentialPower { rate, shape })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mu must be finite, got {mu}"
            )));
        }
        positive("sigma", sigma)?;
        Ok(Self::LogNormal { mu, sigma })
    }

    /// Maps a uniform `u ∈ (0, 1)` to a lifetime.
    ///
    /// For the exponential and exponential power models `u` plays the role of
    /// the survival probability; for the lognormal it is the CDF level.
    pub fn from_uniform(&self, u: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => -u.ln() / rate,
            Self::ExponentialPower { rate, shape } => (-u.ln()).ln_1p().powf(1.0 / shape) / rate,
            Self::LogNormal { mu, sigma } => (mu + sigma * normal_quantile(u)).exp(),
        }
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match *self {
            Self::Exponential { rate } => (-rate * x).exp(),
            Self::ExponentialPower { rate, shape } => (-((rate * x).powf(shape).exp_m1())).exp(),
            Self::LogNormal { mu, sigma } => 1.0 - normal_cdf((x.ln() - mu) / sigma),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    /// Draws `n` lifetimes.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Sample {
        let values = (0..n)
            .map(|_| self.from_uniform(open_uniform(rng)))
            .collect();
        Sample::new(values).expect("inverse-transform draws are positive and finite")
    }
}

impl fmt::Display for AlternativeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { rate } => write!(f, "exponential(lambda={rate})"),
            Self::ExponentialPower { rate, shape } => {
                write!(f, "exp-power(lambda={rate}, beta={shape})")
            }
            Self::LogNormal { mu, sigma } => write!(f, "lognormal(mu={mu}, sigma={sigma})"),
        }
    }
}

pub fn sample_exponential<R: Rng + ?Sized>(rate: f64, n: usize, rng: &mut R) -> Result<Sample> {
    Ok(AlternativeDistribution::exponential(rate)?.sample(n, rng))
}

pub fn sample_exponential_power<R: Rng + ?Sized>(
    rate: f64,
    shape: f64,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    Ok(AlternativeDistribution::exponential_power(rate, shape)?.sample(n, rng))
}

pub fn sample_lognormal<R: Rng + ?Sized>(
    mu: f64,
    sigma: f64,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    Ok(AlternativeDistribution::lognormal(mu, sigma)?.sample(n, rng))
}
