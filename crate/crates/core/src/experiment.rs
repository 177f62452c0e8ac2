//! Empirical size and power studies.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{
    asymptotic_critical, Calibration, GnNullPmf, NullDistribution, RandomizedRule, Tail,
};
use crate::distributions::AlternativeDistribution;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, replication_stream};
use crate::statistics::{compute, TestId};

/// Default number of null replications behind the G_n pmf.
pub const DEFAULT_AARSET_NULL_REPLICATIONS: usize = 100_000;

/// Declarative description of a size or power study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub tests: Vec<TestId>,
    pub alternative: AlternativeDistribution,
    pub n_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub replications: usize,
    pub seed: u64,
    pub calibration: Calibration,
    /// Rejection direction of G_n when it is among `tests`.
    pub aarset_tail: Tail,
    pub aarset_null_replications: usize,
}

impl ExperimentSpec {
    /// γ*, G_n (upper tail) and T*: the tests aimed at IDMTTF/BFR alternatives.
    pub fn idmttf_side(
        alternative: AlternativeDistribution,
        n_grid: Vec<usize>,
        alpha_grid: Vec<f64>,
        replications: usize,
        seed: u64,
    ) -> Self {
        Self {
            tests: vec![TestId::GammaStar, TestId::AarsetGn, TestId::NaTStar],
            alternative,
            n_grid,
            alpha_grid,
            replications,
            seed,
            calibration: Calibration::MonteCarlo {
                replications,
                seed: derive_seed(seed, 0xCA1),
            },
            aarset_tail: Tail::Upper,
            aarset_null_replications: DEFAULT_AARSET_NULL_REPLICATIONS,
        }
    }

    /// κ*, G_n (lower tail) and U*: the tests aimed at DIMTTF/UBFR alternatives.
    pub fn dimttf_side(
        alternative: AlternativeDistribution,
        n_grid: Vec<usize>,
        alpha_grid: Vec<f64>,
        replications: usize,
        seed: u64,
    ) -> Self {
        Self {
            tests: vec![TestId::KappaStar, TestId::AarsetGn, TestId::NaUStar],
            aarset_tail: Tail::Lower,
            ..Self::idmttf_side(alternative, n_grid, alpha_grid, replications, seed)
        }
    }

    /// γ* and κ* under the exponential null against the asymptotic critical points.
    pub fn size_study(
        n_grid: Vec<usize>,
        alpha_grid: Vec<f64>,
        replications: usize,
        seed: u64,
    ) -> Self {
        Self {
            tests: vec![TestId::GammaStar, TestId::KappaStar],
            alternative: AlternativeDistribution::Exponential { rate: 1.0 },
            n_grid,
            alpha_grid,
            replications,
            seed,
            calibration: Calibration::Analytic,
            aarset_tail: Tail::Upper,
            aarset_null_replications: DEFAULT_AARSET_NULL_REPLICATIONS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tests.is_empty() || self.n_grid.is_empty() || self.alpha_grid.is_empty() {
            return Err(Error::InvalidArgument(
                "test list and grids must be nonempty".into(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::InvalidArgument(
                "replications must be positive".into(),
            ));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::InvalidArgument(
                "sample sizes must be positive".into(),
            ));
        }
        if let Some(a) = self.alpha_grid.iter().find(|&&a| !(a > 0.0 && a <= 0.5)) {
            return Err(Error::InvalidArgument(format!(
                "alpha {a} outside (0, 0.5]"
            )));
        }
        if let Calibration::Analytic = self.calibration {
            if let Some(&t) = self.tests.iter().find(|t| !t.has_analytic_calibration()) {
                return Err(Error::UnsupportedCalibration(t));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCell {
    pub test: TestId,
    pub n: usize,
    pub alpha: f64,
    /// Rejection fraction.
    pub power: f64,
    /// Monte Carlo standard error √(p(1 − p)/reps).
    pub stderr: f64,
}

/// Rejection fractions for every (test, n, α) of a study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerReport {
    pub alternative: AlternativeDistribution,
    pub replications: usize,
    pub seed: u64,
    pub calibration: Calibration,
    pub aarset_tail: Tail,
    pub tests: Vec<TestId>,
    pub cells: Vec<PowerCell>,
}

pub const POWER_CSV_HEADER: &str = "test,n,alpha,power,stderr,reps,seed";

impl PowerReport {
    pub fn cell(&self, test: TestId, n: usize, alpha: f64) -> Option<&PowerCell> {
        self.cells
            .iter()
            .find(|c| c.test == test && c.n == n && c.alpha == alpha)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(POWER_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{:.4},{:.4},{},{}\n",
                c.test, c.n, c.alpha, c.power, c.stderr, self.replications, self.seed
            ));
        }
        out
    }

    /// Column label for `test`, including the tail for G_n.
    pub fn column_label(&self, test: TestId) -> String {
        if test == TestId::AarsetGn {
            format!("{} ({})", test.symbol(), self.aarset_tail)
        } else {
            test.symbol().to_string()
        }
    }
}

/// Renders one or more reports side by side: rows are (n, α), column groups
/// are reports (typically one per shape parameter), columns within a group are
/// tests.
pub fn markdown_table(reports: &[PowerReport]) -> String {
    let mut out = String::new();
    let Some(first) = reports.first() else {
        return out;
    };
    let mut header = String::from("| n | α |");
    let mut rule = String::from("|---|---|");
    for r in reports {
        for &t in &r.tests {
            header.push_str(&format!(" {} {} |", r.alternative, r.column_label(t)));
            rule.push_str("---|");
        }
    }
    out.push_str(&header);
    out.push('\n');
    out.push_str(&rule);
    out.push('\n');

    let mut rows: BTreeMap<(usize, u64), f64> = BTreeMap::new();
    for c in &first.cells {
        rows.insert((c.n, c.alpha.to_bits()), c.alpha);
    }
    let mut keys: Vec<(usize, f64)> = rows.into_iter().map(|((n, _), a)| (n, a)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    for (n, alpha) in keys {
        out.push_str(&format!("| {n} | {alpha} |"));
        for r in reports {
            for &t in &r.tests {
                match r.cell(t, n, alpha) {
                    Some(c) => out.push_str(&format!(" {:.4} |", c.power)),
                    None => out.push_str(" – |"),
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Per-n decision rule for one test.
enum Rule {
    Threshold(Vec<f64>),
    Randomized(Vec<RandomizedRule>),
}

impl Rule {
    fn rejection(&self, j: usize, value: f64) -> f64 {
        match self {
            Rule::Threshold(crit) => f64::from(u8::from(value > crit[j])),
            Rule::Randomized(rules) => rules[j].rejection_probability(value as usize),
        }
    }
}

fn build_rules(spec: &ExperimentSpec, n: usize) -> Result<Vec<Rule>> {
    match spec.calibration {
        Calibration::Analytic => {
            let crit = spec
                .alpha_grid
                .iter()
                .map(|&a| asymptotic_critical(a))
                .collect::<Result<Vec<_>>>()?;
            Ok(spec
                .tests
                .iter()
                .map(|_| Rule::Threshold(crit.clone()))
                .collect())
        }
        Calibration::MonteCarlo { replications, seed } => {
            let n_seed = derive_seed(seed, n as u64);
            let continuous: Vec<TestId> = spec
                .tests
                .iter()
                .copied()
                .filter(|&t| t != TestId::AarsetGn)
                .collect();
            let nulls = if continuous.is_empty() {
                Vec::new()
            } else {
                NullDistribution::simulate_many(&continuous, n, replications, n_seed)?
            };
            let mut nulls = nulls.into_iter();
            spec.tests
                .iter()
                .map(|&t| {
                    if t == TestId::AarsetGn {
                        let pmf = GnNullPmf::estimate(
                            n,
                            spec.aarset_null_replications,
                            derive_seed(n_seed, 0xAA),
                        )?;
                        let rules = spec
                            .alpha_grid
                            .iter()
                            .map(|&a| RandomizedRule::new(&pmf, a, spec.aarset_tail))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Rule::Randomized(rules))
                    } else {
                        let null = nulls.next().expect("one null per continuous test");
                        Ok(Rule::Threshold(
                            spec.alpha_grid
                                .iter()
                                .map(|&a| null.upper_quantile(a))
                                .collect(),
                        ))
                    }
                })
                .collect()
        }
    }
}

/// Runs the study described by `spec`.
///
/// For every n, calibration is fixed first (independent seed), then
/// `replications` samples are drawn from the alternative, replication i on
/// stream i of a seed derived from (`seed`, n). Continuous statistics reject
/// when they exceed the critical point; G_n contributes its randomized
/// rejection probability, so its cell is the exact conditional expectation of
/// the randomized decision.
pub fn power_study(spec: &ExperimentSpec) -> Result<PowerReport> {
    spec.validate()?;
    let mut cells = Vec::new();
    for &n in &spec.n_grid {
        let rules = build_rules(spec, n)?;
        let eval_seed = derive_seed(spec.seed, n as u64);
        let stats: Vec<Vec<f64>> = (0..spec.replications as u64)
            .into_par_iter()
            .map(|i| {
                let sample = spec
                    .alternative
                    .sample(n, &mut replication_stream(eval_seed, i));
                spec.tests
                    .iter()
                    .map(|&t| compute(t, &sample).value)
                    .collect()
            })
            .collect();
        let reps = spec.replications as f64;
        for (j, &alpha) in spec.alpha_grid.iter().enumerate() {
            for (ti, &test) in spec.tests.iter().enumerate() {
                let total: f64 = stats
                    .iter()
                    .map(|row| rules[ti].rejection(j, row[ti]))
                    .sum();
                let power = total / reps;
                cells.push(PowerCell {
                    test,
                    n,
                    alpha,
                    power,
                    stderr: (power * (1.0 - power) / reps).sqrt(),
                });
            }
        }
    }
    Ok(PowerReport {
        alternative: spec.alternative,
        replications: spec.replications,
        seed: spec.seed,
        calibration: spec.calibration,
        aarset_tail: spec.aarset_tail,
        tests: spec.tests.clone(),
        cells,
    })
}

/// Fraction of exponential samples whose statistic exceeds the asymptotic
/// critical point.
pub fn empirical_size_study(spec: &ExperimentSpec) -> Result<PowerReport> {
    if !matches!(
        spec.alternative,
        AlternativeDistribution::Exponential { .. }
    ) {
        return Err(Error::InvalidArgument(
            "an empirical size study samples from the exponential null".into(),
        ));
    }
    if spec.calibration != Calibration::Analytic {
        return Err(Error::InvalidArgument(
            "an empirical size study measures the analytic calibration".into(),
        ));
    }
    power_study(spec)
}
