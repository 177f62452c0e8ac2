//! Running one test on one sample and turning it into a decision.

use std::fmt;

use serde::Serialize;

use crate::calibration::{
    asymptotic_critical, p_value, Calibration, GnNullPmf, NullDistribution, RandomizedRule, Tail,
};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, open_uniform, replication_stream};
use crate::sample::Sample;
use crate::statistics::{compute, StatisticValue, TestId};

/// The aging class a rejection points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AgingClass {
    Idmttf,
    Dimttf,
    Bfr,
    Ubfr,
}

impl fmt::Display for AgingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgingClass::Idmttf => "IDMTTF",
            AgingClass::Dimttf => "DIMTTF",
            AgingClass::Bfr => "BFR",
            AgingClass::Ubfr => "UBFR",
        })
    }
}

/// Alternative favoured by large values of `test` (G_n: by its tail).
pub fn alternative_for(test: TestId, tail: Tail) -> AgingClass {
    match test {
        TestId::GammaStar => AgingClass::Idmttf,
        TestId::KappaStar => AgingClass::Dimttf,
        TestId::NaTStar => AgingClass::Bfr,
        TestId::NaUStar => AgingClass::Ubfr,
        TestId::AarsetGn => match tail {
            Tail::Upper => AgingClass::Bfr,
            Tail::Lower => AgingClass::Ubfr,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", content = "evidence", rename_all = "kebab-case")]
pub enum Decision {
    Reject(AgingClass),
    FailToReject,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Reject(class) => write!(f, "reject H0 (evidence of {class})"),
            Decision::FailToReject => f.write_str("fail to reject H0"),
        }
    }
}

/// Result of one test on one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestOutcome {
    pub test: TestId,
    pub n: usize,
    pub statistic: StatisticValue,
    pub alpha: f64,
    pub calibration: Calibration,
    /// Only meaningful for G_n.
    pub tail: Tail,
    /// Critical point; for G_n the boundary atom.
    pub critical_value: f64,
    pub p_value: f64,
    /// For G_n on the boundary atom: the rejection probability used.
    pub randomization_probability: Option<f64>,
    pub decision: Decision,
}

/// Computes `test` on `sample` and decides at level `alpha`.
///
/// With Monte Carlo calibration G_n uses the randomized rule; its uniform
/// draw comes from a stream derived from the calibration seed.
pub fn run_test(
    sample: &Sample,
    test: TestId,
    alpha: f64,
    calibration: Calibration,
    tail: Tail,
) -> Result<TestOutcome> {
    let n = sample.len();
    let statistic = compute(test, sample);
    let reject_as = Decision::Reject(alternative_for(test, tail));
    let mut randomization_probability = None;

    let (critical_value, p_value, reject) = match calibration {
        Calibration::Analytic => {
            if !test.has_analytic_calibration() {
                return Err(Error::UnsupportedCalibration(test));
            }
            let critical = asymptotic_critical(alpha)?;
            let p = p_value(&statistic, n, &calibration)?;
            (critical, p, statistic.value > critical)
        }
        Calibration::MonteCarlo { replications, seed } if test == TestId::AarsetGn => {
            let null = NullDistribution::simulate(test, n, replications, seed)?;
            let pmf = GnNullPmf::estimate(n, replications, seed)?;
            let rule = RandomizedRule::new(&pmf, alpha, tail)?;
            let g = statistic.value as usize;
            let u = open_uniform(&mut replication_stream(derive_seed(seed, 0xDEC1DE), 0));
            let d = rule.decide(g, u);
            if g == rule.atom {
                randomization_probability = Some(d.randomization_probability);
            }
            let p = match tail {
                Tail::Upper => null.upper_p_value(statistic.value),
                Tail::Lower => null.lower_p_value(statistic.value),
            };
            (rule.atom as f64, p, d.reject)
        }
        Calibration::MonteCarlo { replications, seed } => {
            let null = NullDistribution::simulate(test, n, replications, seed)?;
            let critical = null.upper_quantile(alpha);
            (
                critical,
                null.upper_p_value(statistic.value),
                statistic.value > critical,
            )
        }
    };

    Ok(TestOutcome {
        test,
        n,
        statistic,
        alpha,
        calibration,
        tail,
        critical_value,
        p_value,
        randomization_probability,
        decision: if reject {
            reject_as
        } else {
            Decision::FailToReject
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::durbin_tail;

    #[test]
    fn singleton_analytic_outcome() {
        let s = Sample::from_slice(&[4.2]).unwrap();
        let out = run_test(
            &s,
            TestId::GammaStar,
            0.05,
            Calibration::Analytic,
            Tail::Upper,
        )
        .unwrap();
        assert!((out.statistic.value - 1.0).abs() < 1e-12);
        assert!((out.p_value - durbin_tail(1.0).unwrap()).abs() < 1e-12);
        assert!((out.p_value - 0.3084).abs() < 1e-3);
        assert_eq!(out.decision, Decision::FailToReject);
        assert_eq!(out.decision.to_string(), "fail to reject H0");
    }

    #[test]
    fn decision_wording() {
        assert_eq!(
            Decision::Reject(alternative_for(TestId::GammaStar, Tail::Upper)).to_string(),
            "reject H0 (evidence of IDMTTF)"
        );
        assert_eq!(
            alternative_for(TestId::KappaStar, Tail::Upper),
            AgingClass::Dimttf
        );
        assert_eq!(
            alternative_for(TestId::NaTStar, Tail::Lower),
            AgingClass::Bfr
        );
        assert_eq!(
            alternative_for(TestId::NaUStar, Tail::Upper),
            AgingClass::Ubfr
        );
        assert_eq!(
            alternative_for(TestId::AarsetGn, Tail::Lower),
            AgingClass::Ubfr
        );
    }

    #[test]
    fn analytic_refused_for_competitors() {
        let s = Sample::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        assert!(run_test(
            &s,
            TestId::AarsetGn,
            0.05,
            Calibration::Analytic,
            Tail::Upper
        )
        .is_err());
    }

    #[test]
    fn aarset_outcome_reports_atom() {
        let s = Sample::from_slice(&[0.4, 1.3, 0.2, 2.5, 0.9, 1.1]).unwrap();
        let cal = Calibration::MonteCarlo {
            replications: 2000,
            seed: 4,
        };
        let out = run_test(&s, TestId::AarsetGn, 0.05, cal, Tail::Upper).unwrap();
        assert!((2.0..=7.0).contains(&out.critical_value));
        assert!(out.p_value > 0.0 && out.p_value <= 1.0);
    }
}
