//! Direct evaluation of the departure measures from the empirical survival
//! function, without the spacings closed forms.
//!
//! Integrals of F̄ₙ and F̄ₙ² are obtained from
//! `∫₀ᵗ 1{Xᵢ > x} dx = min(Xᵢ, t)`, so every quantity here is a plain sum
//! over raw observations (O(n²) for the squared survival). Intended for
//! cross-checking the fast statistics on small samples.

use crate::sample::Sample;

struct EmpiricalIntegrals<'a> {
    values: &'a [f64],
    n: f64,
}

impl<'a> EmpiricalIntegrals<'a> {
    fn new(sample: &'a Sample) -> Self {
        Self {
            values: sample.values(),
            n: sample.len() as f64,
        }
    }

    /// F̄ₙ(t) = #{Xᵢ > t}/n.
    fn survival(&self, t: f64) -> f64 {
        self.values.iter().filter(|&&x| x > t).count() as f64 / self.n
    }

    /// F̄ₙ(t⁻) = #{Xᵢ ≥ t}/n.
    fn survival_left(&self, t: f64) -> f64 {
        self.values.iter().filter(|&&x| x >= t).count() as f64 / self.n
    }

    /// ∫₀ᵗ F̄ₙ(x) dx.
    fn survival_integral(&self, t: f64) -> f64 {
        self.values.iter().map(|&x| x.min(t)).sum::<f64>() / self.n
    }

    /// ∫₀ᵗ F̄ₙ²(x) dx.
    fn squared_survival_integral(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for &a in self.values {
            for &b in self.values {
                total += a.min(b).min(t);
            }
        }
        total / (self.n * self.n)
    }

    fn mean(&self) -> f64 {
        self.survival_integral(f64::INFINITY)
    }

    fn gamma_with_survival(&self, t: f64, survival_at_t: f64) -> f64 {
        let head = self.survival_integral(t);
        let total_sq = self.squared_survival_integral(f64::INFINITY);
        let tail_sq = total_sq - self.squared_survival_integral(t);
        2.0 * (1.0 + survival_at_t) * head - 2.0 * total_sq + 4.0 * tail_sq - self.mean()
    }
}

/// γ(Fₙ, t) evaluated directly from the empirical survival function.
pub fn gamma_oracle(sample: &Sample, t: f64) -> f64 {
    let e = EmpiricalIntegrals::new(sample);
    e.gamma_with_survival(t, e.survival(t))
}

/// Left limit γ(Fₙ, t⁻): identical integrals, survival taken just below `t`.
pub fn gamma_oracle_left(sample: &Sample, t: f64) -> f64 {
    let e = EmpiricalIntegrals::new(sample);
    e.gamma_with_survival(t, e.survival_left(t))
}

/// The bathtub departure function
/// `φ(x) = (1 + F̄(x))∫₀ˣF̄ − 2∫₀ˣF̄² − F̄(x)∫ₓ^∞F̄ + 2∫ₓ^∞F̄²`
/// for the empirical distribution. Identically zero for any exponential F.
pub fn na_phi(sample: &Sample, x: f64) -> f64 {
    let e = EmpiricalIntegrals::new(sample);
    phi_with_survival(&e, x, e.survival(x))
}

fn phi_with_survival(e: &EmpiricalIntegrals<'_>, x: f64, survival: f64) -> f64 {
    let head = e.survival_integral(x);
    let head_sq = e.squared_survival_integral(x);
    let tail = e.mean() - head;
    let tail_sq = e.squared_survival_integral(f64::INFINITY) - head_sq;
    (1.0 + survival) * head - 2.0 * head_sq - survival * tail + 2.0 * tail_sq
}

/// Points where the suprema of ±γ(Fₙ, ·) can be attained: the origin, every
/// order statistic, and every left limit at an order statistic.
pub fn candidate_gamma_values(sample: &Sample) -> Vec<f64> {
    let mut out = vec![gamma_oracle(sample, 0.0)];
    for &x in sample.sorted() {
        out.push(gamma_oracle(sample, x));
        out.push(gamma_oracle_left(sample, x));
    }
    out
}

/// max_t γ(Fₙ, t) over the candidate set.
pub fn gamma_sup(sample: &Sample) -> f64 {
    candidate_gamma_values(sample)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// max_t −γ(Fₙ, t) over the candidate set.
pub fn neg_gamma_sup(sample: &Sample) -> f64 {
    candidate_gamma_values(sample)
        .into_iter()
        .map(|g| -g)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// φ at the origin and at every order statistic X₍ₖ₎, with the survival
/// factor taken by rank as 1 − k/n. Without ties this is φ(X₍ₖ₎); inside a
/// block of tied observations it is the value on the degenerate interval
/// between them, which the spacings closed form also visits.
pub fn na_phi_grid(sample: &Sample) -> Vec<f64> {
    let e = EmpiricalIntegrals::new(sample);
    let n = sample.len() as f64;
    std::iter::once(0.0)
        .chain(sample.sorted().iter().copied())
        .enumerate()
        .map(|(k, x)| phi_with_survival(&e, x, 1.0 - k as f64 / n))
        .collect()
}
