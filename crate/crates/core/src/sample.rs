//! Lifetime samples and the quantities derived from their order statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, KahanSum};

/// A validated, complete sample of positive lifetimes.
///
/// Order statistics and the sample mean are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
    mean: f64,
}

impl Sample {
    /// Validates `raw` and caches its order statistics and mean.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in raw.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { index, value });
            }
        }
        let mut sorted = raw.clone();
        sorted.sort_by(f64::total_cmp);
        let mean = compensated_sum(raw.iter().copied()) / raw.len() as f64;
        Ok(Self {
            values: raw,
            sorted,
            mean,
        })
    }

    pub fn from_slice(raw: &[f64]) -> Result<Self> {
        Self::new(raw.to_vec())
    }

    /// Observations in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ascending order statistics X₍₁₎ ≤ … ≤ X₍ₙ₎.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: a `Sample` holds at least one observation.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Gaps between consecutive order statistics, anchored at X₍₀₎ = 0.
    pub fn spacings(&self) -> Spacings {
        let mut previous = 0.0;
        let d = self
            .sorted
            .iter()
            .map(|&x| {
                let gap = x - previous;
                previous = x;
                gap
            })
            .collect();
        Spacings { d }
    }

    /// Scaled total-time-on-test transform U₀..Uₙ.
    pub fn ttt_transform(&self) -> TttTransform {
        let n = self.len();
        let spacings = self.spacings();
        let mut acc = KahanSum::new();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for (i, &gap) in spacings.d.iter().enumerate() {
            // normalized spacing (n - j + 1) D for j = i + 1
            acc.add((n - i) as f64 * gap);
            cumulative.push(acc.value());
        }
        let total = cumulative[n];
        let mut u: Vec<f64> = cumulative.iter().map(|c| c / total).collect();
        u[n] = 1.0;
        TttTransform { u }
    }

    /// Empirical mean time to failure under age replacement, evaluated at
    /// each order statistic.
    pub fn empirical_mttf(&self) -> MttfCurve {
        let n = self.len() as f64;
        let spacings = self.spacings();
        let mut integral = KahanSum::new();
        let points = self
            .sorted
            .iter()
            .zip(&spacings.d)
            .enumerate()
            .map(|(i, (&t, &gap))| {
                integral.add((1.0 - i as f64 / n) * gap);
                let cdf = (i + 1) as f64 / n;
                MttfPoint {
                    t,
                    mttf: integral.value() / cdf,
                }
            })
            .collect();
        MttfCurve { points }
    }
}

/// Spacings D_i = X₍ᵢ₊₁₎ − X₍ᵢ₎ for i = 0..n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct Spacings {
    d: Vec<f64>,
}

impl Spacings {
    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Scaled TTT values; `u[0] = 0`, `u[n] = 1`, nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct TttTransform {
    u: Vec<f64>,
}

impl TttTransform {
    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    /// Sample size n (the transform has n + 1 entries).
    pub fn n(&self) -> usize {
        self.u.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MttfPoint {
    pub t: f64,
    pub mttf: f64,
}

/// The step-function MTTF estimator reported at the order statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MttfCurve {
    points: Vec<MttfPoint>,
}

impl MttfCurve {
    pub fn points(&self) -> &[MttfPoint] {
        &self.points
    }

    /// Exact estimator ∫₀ᵗ F̄ₙ / Fₙ(t) at an arbitrary `t ≥ X₍₁₎`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let first = self.points[0].t;
        if t.is_nan() || t < first {
            return Err(Error::MttfUndefined { t, min: first });
        }
        let n = self.points.len();
        // last order statistic <= t
        let k = self.points.partition_point(|p| p.t <= t);
        let at = self.points[k - 1];
        let cdf = k as f64 / n as f64;
        let survival = 1.0 - cdf;
        let integral = at.mttf * cdf + survival * (t - at.t);
        Ok(integral / cdf)
    }

    /// Linear interpolation between reported points, for presentation.
    /// Beyond the largest observation the curve is flat.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        let first = self.points[0].t;
        if t.is_nan() || t < first {
            return Err(Error::MttfUndefined { t, min: first });
        }
        let k = self.points.partition_point(|p| p.t <= t);
        if k == self.points.len() {
            return Ok(self.points[k - 1].mttf);
        }
        let (a, b) = (self.points[k - 1], self.points[k]);
        if b.t == a.t {
            return Ok(b.mttf);
        }
        let w = (t - a.t) / (b.t - a.t);
        Ok(a.mttf + w * (b.mttf - a.mttf))
    }
}
