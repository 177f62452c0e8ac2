//! Null calibration: Durbin's first-passage approximation for the supremum of
//! the limiting Gaussian process, Monte Carlo null distributions for finite
//! n, and the randomized rule for the discrete Aarset statistic.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::AlternativeDistribution;
use crate::error::{Error, Result};
use crate::rng::replication_stream;
use crate::statistics::{compute, StatisticValue, TestId};

/// Largest level accepted by [`asymptotic_critical`].
pub const MAX_ANALYTIC_ALPHA: f64 = 0.15;

/// Bracket searched by [`asymptotic_critical`].
pub const CRITICAL_BRACKET: (f64, f64) = (0.5, 5.0);

const ROOT_TOL: f64 = 1e-12;

/// Covariance ρ(s, t) = ⅔(s³ − t³) + ⅓ for 0 ≤ s ≤ t ≤ 1 of the limiting
/// process of γ*(Fₙ) under exponentiality.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CovarianceKernel;

impl CovarianceKernel {
    pub fn covariance(&self, s: f64, t: f64) -> f64 {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        2.0 / 3.0 * (lo.powi(3) - hi.powi(3)) + 1.0 / 3.0
    }

    /// ρ(t, t), constant at ⅓.
    pub fn variance(&self, t: f64) -> f64 {
        self.covariance(t, t)
    }

    /// ∂ρ(s, t)/∂s at s = t⁻, i.e. 2t².
    pub fn left_derivative_on_diagonal(&self, t: f64) -> f64 {
        2.0 * t * t
    }
}

/// P{sup Z > c} ≈ (2√3 c / √(2π)) exp(−3c²/2).
pub fn durbin_tail(c: f64) -> Result<f64> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain(format!(
            "boundary c must be positive, got {c}"
        )));
    }
    Ok(2.0 * 3f64.sqrt() * c / (2.0 * std::f64::consts::PI).sqrt() * (-1.5 * c * c).exp())
}

/// First-passage density g(t) ≈ b(t) f(t) for the constant boundary `c`.
pub fn durbin_density(c: f64, t: f64) -> Result<f64> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain(format!(
            "boundary c must be positive, got {c}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("time t must lie in [0, 1], got {t}")));
    }
    let kernel = CovarianceKernel;
    let var = kernel.variance(t);
    let slope = c / var * kernel.left_derivative_on_diagonal(t);
    let density = (2.0 * std::f64::consts::PI * var).sqrt().recip() * (-c * c / (2.0 * var)).exp();
    Ok(slope * density)
}

/// Solves `durbin_tail(c) = alpha` for the asymptotic critical point.
pub fn asymptotic_critical(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= MAX_ANALYTIC_ALPHA) {
        return Err(Error::AlphaOutOfAnalyticRange {
            alpha,
            max: MAX_ANALYTIC_ALPHA,
        });
    }
    Ok(invert_durbin_tail(alpha))
}

/// Bisection for `durbin_tail(c) = alpha` on [`CRITICAL_BRACKET`], without
/// the level cap. Meaningful for alpha below the tail value at the bracket's
/// lower end (about 0.475).
pub(crate) fn invert_durbin_tail(alpha: f64) -> f64 {
    let f = |c: f64| durbin_tail(c).expect("bracket is positive") - alpha;
    let (mut lo, mut hi) = CRITICAL_BRACKET;
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Where a critical value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    MonteCarlo { seed: u64, replications: usize },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

/// How a test is calibrated under the null.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Calibration {
    Analytic,
    MonteCarlo { replications: usize, seed: u64 },
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Calibration::Analytic => f.write_str("analytic"),
            Calibration::MonteCarlo { replications, seed } => {
                write!(f, "monte-carlo(reps={replications}, seed={seed})")
            }
        }
    }
}

/// Sample size of a table row; `Asymptotic` for the n → ∞ approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSize {
    Finite(usize),
    Asymptotic,
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Asymptotic => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueEntry {
    pub test: TestId,
    pub n: SampleSize,
    pub alpha: f64,
    pub critical: f64,
    pub provenance: Provenance,
}

/// (test, n, α) → critical point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    entries: Vec<CriticalValueEntry>,
}

pub const CRITICAL_CSV_HEADER: &str = "test,n,alpha,critical,provenance,seed,replications";

impl CriticalValueTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[CriticalValueEntry] {
        &self.entries
    }

    pub fn push(&mut self, entry: CriticalValueEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: CriticalValueTable) {
        self.entries.extend(other.entries);
    }

    pub fn lookup(&self, test: TestId, n: SampleSize, alpha: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.test == test && e.n == n && e.alpha == alpha)
            .map(|e| e.critical)
    }

    /// Analytic critical points, shared by γ* and κ*.
    pub fn analytic(tests: &[TestId], alphas: &[f64]) -> Result<Self> {
        let mut table = Self::new();
        for &test in tests {
            if !test.has_analytic_calibration() {
                return Err(Error::UnsupportedCalibration(test));
            }
            for &alpha in alphas {
                table.push(CriticalValueEntry {
                    test,
                    n: SampleSize::Asymptotic,
                    alpha,
                    critical: asymptotic_critical(alpha)?,
                    provenance: Provenance::Analytic,
                });
            }
        }
        Ok(table)
    }

    /// Checks that α ∈ (0, 0.5] and that critical points strictly decrease in
    /// α within every (test, n).
    pub fn validate(&self) -> Result<()> {
        let mut groups: BTreeMap<(TestId, SampleSize), Vec<(f64, f64)>> = BTreeMap::new();
        for e in &self.entries {
            if !(e.alpha > 0.0 && e.alpha <= 0.5) {
                return Err(Error::InvalidArgument(format!(
                    "alpha {} outside (0, 0.5]",
                    e.alpha
                )));
            }
            groups
                .entry((e.test, e.n))
                .or_default()
                .push((e.alpha, e.critical));
        }
        for ((test, n), mut rows) in groups {
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            for pair in rows.windows(2) {
                if pair[1].1 >= pair[0].1 {
                    return Err(Error::InvalidArgument(format!(
                        "critical values for {test} at n={n} do not decrease in alpha"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CRITICAL_CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let (seed, reps) = match e.provenance {
                Provenance::Analytic => (String::new(), String::new()),
                Provenance::MonteCarlo { seed, replications } => {
                    (seed.to_string(), replications.to_string())
                }
            };
            out.push_str(&format!(
                "{},{},{},{:.4},{},{},{}\n",
                e.test,
                e.n,
                e.alpha,
                e.critical,
                e.provenance.label(),
                seed,
                reps
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::InvalidArgument(format!("line {line}: {msg}"));
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim() == CRITICAL_CSV_HEADER => {}
            _ => return Err(bad(1, "missing critical-value header")),
        }
        let mut table = Self::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 7 {
                return Err(bad(line_no, "expected 7 fields"));
            }
            let test = fields[0].parse::<TestId>()?;
            let n = match fields[1] {
                "inf" => SampleSize::Asymptotic,
                s => SampleSize::Finite(s.parse().map_err(|_| bad(line_no, "bad n"))?),
            };
            let alpha = fields[2].parse().map_err(|_| bad(line_no, "bad alpha"))?;
            let critical = fields[3]
                .parse()
                .map_err(|_| bad(line_no, "bad critical value"))?;
            let provenance = match fields[4] {
                "analytic" => Provenance::Analytic,
                "monte-carlo" => Provenance::MonteCarlo {
                    seed: fields[5].parse().map_err(|_| bad(line_no, "bad seed"))?,
                    replications: fields[6]
                        .parse()
                        .map_err(|_| bad(line_no, "bad replications"))?,
                },
                _ => return Err(bad(line_no, "unknown provenance")),
            };
            table.push(CriticalValueEntry {
                test,
                n,
                alpha,
                critical,
                provenance,
            });
        }
        Ok(table)
    }
}

/// Index (0-based) of the ⌈(1 − α)·reps⌉-th smallest value.
fn upper_quantile_index(alpha: f64, reps: usize) -> usize {
    // guard against 0.95 * 10000 = 9500.000000000002
    let rank = ((1.0 - alpha) * reps as f64 - 1e-9).ceil() as usize;
    rank.clamp(1, reps) - 1
}

/// Simulated null distribution of one statistic at a fixed n.
#[derive(Debug, Clone, PartialEq)]
pub struct NullDistribution {
    test: TestId,
    n: usize,
    seed: u64,
    sorted: Vec<f64>,
}

impl NullDistribution {
    /// Simulates `replications` unit-mean exponential samples of size `n`.
    /// Replication i uses stream i of `seed`.
    pub fn simulate(test: TestId, n: usize, replications: usize, seed: u64) -> Result<Self> {
        Ok(Self::simulate_many(&[test], n, replications, seed)?
            .pop()
            .expect("one test requested"))
    }

    /// Like [`simulate`](Self::simulate) for several tests evaluated on the
    /// same null samples.
    pub fn simulate_many(
        tests: &[TestId],
        n: usize,
        replications: usize,
        seed: u64,
    ) -> Result<Vec<Self>> {
        if n == 0 || replications == 0 {
            return Err(Error::InvalidArgument(
                "null simulation needs n >= 1 and at least one replication".into(),
            ));
        }
        let null = AlternativeDistribution::Exponential { rate: 1.0 };
        let rows: Vec<Vec<f64>> = (0..replications as u64)
            .into_par_iter()
            .map(|i| {
                let sample = null.sample(n, &mut replication_stream(seed, i));
                tests.iter().map(|&t| compute(t, &sample).value).collect()
            })
            .collect();
        Ok(tests
            .iter()
            .enumerate()
            .map(|(j, &test)| {
                let mut sorted: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                sorted.sort_by(f64::total_cmp);
                Self {
                    test,
                    n,
                    seed,
                    sorted,
                }
            })
            .collect())
    }

    pub fn test(&self) -> TestId {
        self.test
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replications(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// Empirical (1 − α)-quantile: the ⌈(1 − α)·reps⌉-th smallest value.
    pub fn upper_quantile(&self, alpha: f64) -> f64 {
        self.sorted[upper_quantile_index(alpha, self.sorted.len())]
    }

    /// (#{null ≥ x} + 1) / (reps + 1).
    pub fn upper_p_value(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&v| v < x);
        (self.sorted.len() - below + 1) as f64 / (self.sorted.len() + 1) as f64
    }

    /// (#{null ≤ x} + 1) / (reps + 1).
    pub fn lower_p_value(&self, x: f64) -> f64 {
        let at_most = self.sorted.partition_point(|&v| v <= x);
        (at_most + 1) as f64 / (self.sorted.len() + 1) as f64
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::MonteCarlo {
            seed: self.seed,
            replications: self.sorted.len(),
        }
    }

    /// Critical points at the given levels.
    pub fn critical_table(&self, alphas: &[f64]) -> CriticalValueTable {
        let mut table = CriticalValueTable::new();
        for &alpha in alphas {
            table.push(CriticalValueEntry {
                test: self.test,
                n: SampleSize::Finite(self.n),
                alpha,
                critical: self.upper_quantile(alpha),
                provenance: self.provenance(),
            });
        }
        table
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside (0, 0.5]"
        )))
    }
}

/// Monte Carlo (1 − α)-quantiles of `test` under the exponential null.
pub fn mc_null_quantiles(
    test: TestId,
    n: usize,
    alphas: &[f64],
    replications: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if replications < 1000 {
        return Err(Error::InvalidArgument(format!(
            "at least 1000 replications required, got {replications}"
        )));
    }
    alphas.iter().try_for_each(|&a| check_alpha(a))?;
    Ok(NullDistribution::simulate(test, n, replications, seed)?.critical_table(alphas))
}

/// Upper-tail p-value of an observed statistic.
///
/// Analytic calibration applies Durbin's approximation and is available for
/// γ* and κ* only. Below the mode of the approximation (c ≤ 1/√3) the
/// approximation carries no information and the p-value is reported as 1.
pub fn p_value(stat: &StatisticValue, n: usize, calibration: &Calibration) -> Result<f64> {
    match *calibration {
        Calibration::Analytic => {
            if !stat.test.has_analytic_calibration() {
                return Err(Error::UnsupportedCalibration(stat.test));
            }
            if stat.value <= 1.0 / 3f64.sqrt() {
                return Ok(1.0);
            }
            Ok(durbin_tail(stat.value)?.clamp(0.0, 1.0))
        }
        Calibration::MonteCarlo { replications, seed } => {
            let null = NullDistribution::simulate(stat.test, n, replications, seed)?;
            Ok(null.upper_p_value(stat.value))
        }
    }
}

/// Rejection direction for the discrete Aarset statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Large G_n: bathtub failure rate.
    Upper,
    /// Small G_n: upside-down bathtub failure rate.
    Lower,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
        })
    }
}

/// Monte Carlo estimate of the null pmf of G_n over the integers [2, n + 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnNullPmf {
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pmf: BTreeMap<usize, f64>,
}

impl GnNullPmf {
    pub fn estimate(n: usize, replications: usize, seed: u64) -> Result<Self> {
        let null = NullDistribution::simulate(TestId::AarsetGn, n, replications, seed)?;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &g in null.sorted_values() {
            *counts.entry(g as usize).or_default() += 1;
        }
        let pmf = counts
            .into_iter()
            .map(|(g, c)| (g, c as f64 / replications as f64))
            .collect();
        Ok(Self {
            n,
            replications,
            seed,
            pmf,
        })
    }

    /// Wraps an explicit pmf; probabilities must be nonnegative and sum to 1.
    pub fn from_map(n: usize, pmf: BTreeMap<usize, f64>) -> Result<Self> {
        let total: f64 = pmf.values().sum();
        if pmf.values().any(|&p| p.is_nan() || p < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "pmf must be nonnegative and sum to 1 (sum = {total})"
            )));
        }
        Ok(Self {
            n,
            replications: 0,
            seed: 0,
            pmf: pmf.into_iter().filter(|&(_, p)| p > 0.0).collect(),
        })
    }

    pub fn pmf(&self) -> &BTreeMap<usize, f64> {
        &self.pmf
    }

    pub fn probability(&self, g: usize) -> f64 {
        self.pmf.get(&g).copied().unwrap_or(0.0)
    }
}

/// Outcome of the randomized rule for one observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomizedDecision {
    pub reject: bool,
    /// Probability of rejection when the observation sits on the boundary
    /// atom; zero elsewhere.
    pub randomization_probability: f64,
}

/// Exact-level randomized test built from a null pmf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomizedRule {
    pub tail: Tail,
    pub alpha: f64,
    /// Boundary atom.
    pub atom: usize,
    /// Rejection probability at the atom.
    pub boundary_probability: f64,
}

impl RandomizedRule {
    pub fn new(pmf: &GnNullPmf, alpha: f64, tail: Tail) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha {alpha} outside (0, 1)"
            )));
        }
        let atoms: Vec<(usize, f64)> = match tail {
            Tail::Upper => pmf.pmf.iter().rev().map(|(&g, &p)| (g, p)).collect(),
            Tail::Lower => pmf.pmf.iter().map(|(&g, &p)| (g, p)).collect(),
        };
        let mut beyond = 0.0;
        for &(atom, p) in &atoms {
            if beyond + p > alpha {
                return Ok(Self {
                    tail,
                    alpha,
                    atom,
                    boundary_probability: (alpha - beyond) / p,
                });
            }
            beyond += p;
        }
        Err(Error::InvalidArgument("pmf has no mass".into()))
    }

    fn beyond(&self, g: usize) -> bool {
        match self.tail {
            Tail::Upper => g > self.atom,
            Tail::Lower => g < self.atom,
        }
    }

    /// P(reject | G_n = g).
    pub fn rejection_probability(&self, g: usize) -> f64 {
        if self.beyond(g) {
            1.0
        } else if g == self.atom {
            self.boundary_probability
        } else {
            0.0
        }
    }

    pub fn decide(&self, g: usize, u: f64) -> RandomizedDecision {
        if self.beyond(g) {
            RandomizedDecision {
                reject: true,
                randomization_probability: 0.0,
            }
        } else if g == self.atom {
            RandomizedDecision {
                reject: u < self.boundary_probability,
                randomization_probability: self.boundary_probability,
            }
        } else {
            RandomizedDecision {
                reject: false,
                randomization_probability: 0.0,
            }
        }
    }

    /// Σ_g pmf(g) · P(reject | g).
    pub fn expected_rejection_rate(&self, pmf: &GnNullPmf) -> f64 {
        pmf.pmf
            .iter()
            .map(|(&g, &p)| p * self.rejection_probability(g))
            .sum()
    }
}

/// Applies the exact-level randomized Aarset rule to an observed `gn`,
/// with `u` a uniform(0, 1) draw.
pub fn randomized_gn_decision(
    gn: usize,
    null_pmf: &GnNullPmf,
    alpha: f64,
    u: f64,
    tail: Tail,
) -> Result<RandomizedDecision> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!(
            "u must lie in [0, 1], got {u}"
        )));
    }
    Ok(RandomizedRule::new(null_pmf, alpha, tail)?.decide(gn, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_diagonal_and_symmetry() {
        let k = CovarianceKernel;
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((k.variance(t) - 1.0 / 3.0).abs() < 1e-15);
            assert_eq!(k.covariance(0.2, t), k.covariance(t, 0.2));
        }
        assert!((k.covariance(0.0, 1.0) - (1.0 / 3.0 - 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn durbin_tail_table_values() {
        assert!((durbin_tail(1.5878).unwrap() - 0.05).abs() < 2e-4);
        assert!((durbin_tail(1.9298).unwrap() - 0.01).abs() < 1e-4);
        assert!((durbin_tail(1.4065).unwrap() - 0.1).abs() < 5e-4);
        assert!(durbin_tail(0.0).is_err());
        assert!(durbin_tail(-1.0).is_err());
    }

    #[test]
    fn durbin_tail_decreases_beyond_mode() {
        let mode = 1.0 / 3f64.sqrt();
        let mut prev = durbin_tail(mode).unwrap();
        for i in 1..=400 {
            let c = mode + i as f64 * 0.01;
            let cur = durbin_tail(c).unwrap();
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn density_integrates_to_tail() {
        // Simpson's rule on [0, 1]; the integrand is quadratic in t, so this is exact
        // up to rounding.
        let c = 1.6;
        let m = 200;
        let h = 1.0 / m as f64;
        let mut acc = 0.0;
        for i in 0..=m {
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * durbin_density(c, i as f64 * h).unwrap();
        }
        let integral = acc * h / 3.0;
        assert!((integral - durbin_tail(c).unwrap()).abs() < 1e-8);
        assert_eq!(durbin_density(c, 0.0).unwrap(), 0.0);
        let ratio = durbin_density(1.5878, 1.0).unwrap() / durbin_tail(1.5878).unwrap();
        assert!((ratio - 3.0).abs() < 1e-12);
        assert!(durbin_density(c, 1.5).is_err());
        assert!(durbin_density(0.0, 0.5).is_err());
    }

    #[test]
    fn asymptotic_critical_inverts_tail() {
        for (alpha, c) in [
            (0.01, 1.9298),
            (0.025, 1.7453),
            (0.05, 1.5878),
            (0.1, 1.4065),
        ] {
            assert!((asymptotic_critical(alpha).unwrap() - c).abs() < 1e-4);
        }
        let mut c = 1.2;
        while c <= 2.5 {
            let back = invert_durbin_tail(durbin_tail(c).unwrap());
            assert!((back - c).abs() < 1e-5);
            c += 0.05;
        }
        assert!(matches!(
            asymptotic_critical(0.2),
            Err(Error::AlphaOutOfAnalyticRange { .. })
        ));
        assert!(asymptotic_critical(0.0).is_err());
    }

    #[test]
    fn analytic_p_values() {
        let stat = |test, value| StatisticValue {
            test,
            value,
            argmax_k: None,
            aarset: None,
        };
        let p = p_value(
            &stat(TestId::GammaStar, 1.5878),
            200,
            &Calibration::Analytic,
        )
        .unwrap();
        assert!((p - 0.05).abs() < 2e-4);
        let p = p_value(
            &stat(TestId::KappaStar, 1.9298),
            200,
            &Calibration::Analytic,
        )
        .unwrap();
        assert!((p - 0.01).abs() < 1e-4);
        assert_eq!(
            p_value(&stat(TestId::GammaStar, -0.3), 10, &Calibration::Analytic).unwrap(),
            1.0
        );
        assert_eq!(
            p_value(&stat(TestId::NaTStar, 2.0), 10, &Calibration::Analytic),
            Err(Error::UnsupportedCalibration(TestId::NaTStar))
        );
    }

    #[test]
    fn mc_p_value_bounds() {
        let cal = Calibration::MonteCarlo {
            replications: 999,
            seed: 3,
        };
        let below = StatisticValue {
            test: TestId::NaUStar,
            value: f64::NEG_INFINITY,
            argmax_k: None,
            aarset: None,
        };
        assert_eq!(p_value(&below, 12, &cal).unwrap(), 1.0);
        let above = StatisticValue {
            value: f64::INFINITY,
            ..below
        };
        assert_eq!(p_value(&above, 12, &cal).unwrap(), 1.0 / 1000.0);
    }

    #[test]
    fn quantile_rank_convention() {
        assert_eq!(upper_quantile_index(0.05, 10_000), 9499);
        assert_eq!(upper_quantile_index(0.1, 10_000), 8999);
        assert_eq!(upper_quantile_index(0.01, 10_000), 9899);
        assert_eq!(upper_quantile_index(0.025, 1000), 974);
    }

    #[test]
    fn mc_quantiles_reproducible_and_monotone() {
        let alphas = [0.01, 0.025, 0.05, 0.1];
        let a = mc_null_quantiles(TestId::GammaStar, 12, &alphas, 2000, 11).unwrap();
        let b = mc_null_quantiles(TestId::GammaStar, 12, &alphas, 2000, 11).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        assert!(mc_null_quantiles(TestId::GammaStar, 1, &alphas, 2000, 11).is_err());
        assert!(mc_null_quantiles(TestId::GammaStar, 12, &alphas, 999, 11).is_err());
        assert!(mc_null_quantiles(TestId::GammaStar, 12, &[0.7], 2000, 11).is_err());
    }

    #[test]
    fn critical_table_csv_round_trip() {
        let mut table = CriticalValueTable::analytic(&[TestId::GammaStar], &[0.01, 0.05]).unwrap();
        table.extend(mc_null_quantiles(TestId::KappaStar, 10, &[0.05], 1000, 5).unwrap());
        let csv = table.to_csv();
        assert!(csv.starts_with("test,n,alpha,critical,provenance,seed,replications\n"));
        assert!(csv.contains("gamma,inf,0.01,1.9298,analytic,,\n"));
        let parsed = CriticalValueTable::from_csv(&csv).unwrap();
        assert_eq!(parsed.to_csv(), csv);
        assert_eq!(
            parsed.entries()[2].provenance,
            Provenance::MonteCarlo {
                seed: 5,
                replications: 1000
            }
        );
        assert!(CriticalValueTable::analytic(&[TestId::AarsetGn], &[0.05]).is_err());
    }

    #[test]
    fn table_validation_catches_non_monotone_rows() {
        let mut t = CriticalValueTable::new();
        for (alpha, critical) in [(0.01, 1.0), (0.05, 1.2)] {
            t.push(CriticalValueEntry {
                test: TestId::GammaStar,
                n: SampleSize::Finite(10),
                alpha,
                critical,
                provenance: Provenance::Analytic,
            });
        }
        assert!(t.validate().is_err());
    }

    fn pmf(pairs: &[(usize, f64)]) -> GnNullPmf {
        GnNullPmf::from_map(10, pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn degenerate_pmf_randomizes_fully() {
        let p = pmf(&[(2, 1.0)]);
        let rule = RandomizedRule::new(&p, 0.05, Tail::Upper).unwrap();
        assert_eq!(rule.atom, 2);
        assert!((rule.boundary_probability - 0.05).abs() < 1e-15);
        let d = randomized_gn_decision(2, &p, 0.05, 0.01, Tail::Upper).unwrap();
        assert!(d.reject);
        let d = randomized_gn_decision(2, &p, 0.05, 0.5, Tail::Upper).unwrap();
        assert!(!d.reject);
        assert!((d.randomization_probability - 0.05).abs() < 1e-15);
    }

    #[test]
    fn boundary_randomization_probability() {
        // P(G > 7) = 0.03, P(G = 7) = 0.04
        let p = pmf(&[(2, 0.5), (5, 0.43), (7, 0.04), (8, 0.02), (9, 0.01)]);
        let rule = RandomizedRule::new(&p, 0.05, Tail::Upper).unwrap();
        assert_eq!(rule.atom, 7);
        assert!((rule.boundary_probability - 0.5).abs() < 1e-12);
        assert!(rule.decide(8, 0.99).reject);
        assert_eq!(rule.decide(8, 0.99).randomization_probability, 0.0);
        assert!(!rule.decide(5, 0.0).reject);
        assert!((rule.expected_rejection_rate(&p) - 0.05).abs() < 1e-12);

        let lower = RandomizedRule::new(&p, 0.05, Tail::Lower).unwrap();
        assert_eq!(lower.atom, 2);
        assert!((lower.boundary_probability - 0.1).abs() < 1e-12);
        assert!((lower.expected_rejection_rate(&p) - 0.05).abs() < 1e-12);
        assert!(randomized_gn_decision(2, &p, 0.05, 1.5, Tail::Lower).is_err());
    }

    #[test]
    fn estimated_pmf_has_support_in_range() {
        let p = GnNullPmf::estimate(8, 5000, 1).unwrap();
        assert!(p.pmf().keys().all(|&g| (2..=9).contains(&g)));
        let total: f64 = p.pmf().values().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
