//! Turning parsed arguments into reports.

use anyhow::{bail, Context, Result};

use mttf_trend::rng::derive_seed;
use mttf_trend::sample::MttfPoint;
use mttf_trend::{
    empirical_size_study, power_study, run_test, AlternativeDistribution, Calibration,
    CriticalValueTable, ExperimentSpec, NullDistribution, Tail, TestId,
};

use crate::args::{
    AltKind, CalibrationMode, Command, CriticalArgs, Guard, MttfArgs, PowerArgs, SizeArgs, TailArg,
    TestArgs,
};
use crate::ingest::ingest_lifetimes;
use crate::report::{Body, Metadata, Report};

/// Largest replications × max(n) accepted without `--allow-large`.
pub const WORK_LIMIT: u128 = 1_000_000_000;

/// Below this n, `test` calibrates by simulation unless told otherwise.
pub const ANALYTIC_MIN_N: usize = 100;

pub fn execute(command: &Command, arguments: Vec<String>) -> Result<Report> {
    match command {
        Command::Test(a) => test(a, Metadata::new("test", arguments)),
        Command::Critical(a) => critical(a, Metadata::new("critical", arguments)),
        Command::Size(a) => size(a, Metadata::new("size", arguments)),
        Command::Power(a) => power(a, Metadata::new("power", arguments)),
        Command::Mttf(a) => mttf(a, Metadata::new("mttf", arguments)),
    }
}

fn tail(t: TailArg) -> Tail {
    match t {
        TailArg::Upper => Tail::Upper,
        TailArg::Lower => Tail::Lower,
    }
}

fn check_work(guard: &Guard, reps: usize, n_grid: &[usize]) -> Result<()> {
    let max_n = n_grid.iter().copied().max().unwrap_or(0);
    let work = reps as u128 * max_n as u128;
    if work > WORK_LIMIT && !guard.allow_large {
        bail!(
            "replications × max n = {work} exceeds {WORK_LIMIT}; pass --allow-large to run anyway"
        );
    }
    Ok(())
}

fn test(a: &TestArgs, mut meta: Metadata) -> Result<Report> {
    let sample = ingest_lifetimes(&a.input)?;
    let mode = a.calibration.unwrap_or(
        if sample.len() < ANALYTIC_MIN_N || !a.test.has_analytic_calibration() {
            CalibrationMode::Mc
        } else {
            CalibrationMode::Analytic
        },
    );
    let calibration = match mode {
        CalibrationMode::Analytic => Calibration::Analytic,
        CalibrationMode::Mc => Calibration::MonteCarlo {
            replications: a.reps,
            seed: a.seed,
        },
    };
    let outcome = run_test(&sample, a.test, a.alpha, calibration, tail(a.tail))?;
    if let Calibration::MonteCarlo { replications, seed } = calibration {
        meta.seed = Some(seed);
        meta.replications = Some(replications);
    }
    meta.calibration = Some(calibration.to_string());
    Ok(Report {
        metadata: meta,
        body: Body::Test(outcome),
    })
}

fn critical(a: &CriticalArgs, mut meta: Metadata) -> Result<Report> {
    if a.asymptotic {
        meta.calibration = Some("analytic".into());
        let table = CriticalValueTable::analytic(&a.tests, &a.alpha_list)?;
        return Ok(Report {
            metadata: meta,
            body: Body::Critical(table),
        });
    }
    let seed = a
        .seed
        .context("--seed is required for simulated critical values")?;
    let n_grid = if a.n.is_empty() {
        (10..=70).step_by(5).collect()
    } else {
        a.n.clone()
    };
    check_work(&a.guard, a.reps, &n_grid)?;
    if a.reps < 1000 {
        bail!("at least 1000 replications are needed for simulated critical values");
    }
    let mut table = CriticalValueTable::new();
    for &n in &n_grid {
        if n < 2 {
            bail!("simulated critical values need n >= 2");
        }
        for null in
            NullDistribution::simulate_many(&a.tests, n, a.reps, derive_seed(seed, n as u64))?
        {
            table.extend(null.critical_table(&a.alpha_list));
        }
    }
    meta.seed = Some(seed);
    meta.replications = Some(a.reps);
    meta.calibration = Some("monte-carlo".into());
    Ok(Report {
        metadata: meta,
        body: Body::Critical(table),
    })
}

fn size(a: &SizeArgs, mut meta: Metadata) -> Result<Report> {
    let n_grid: Vec<usize> = if a.n.is_empty() {
        (10..=70).step_by(5).chain([100, 200]).collect()
    } else {
        a.n.clone()
    };
    check_work(&a.guard, a.reps, &n_grid)?;
    let mut spec = ExperimentSpec::size_study(n_grid, a.alpha_list.clone(), a.reps, a.seed);
    spec.tests = a.tests.clone();
    let report = empirical_size_study(&spec)?;
    meta.seed = Some(a.seed);
    meta.replications = Some(a.reps);
    meta.calibration = Some(spec.calibration.to_string());
    Ok(Report {
        metadata: meta,
        body: Body::Studies(vec![report]),
    })
}

fn power(a: &PowerArgs, mut meta: Metadata) -> Result<Report> {
    let n_grid: Vec<usize> = if a.n.is_empty() {
        (10..=60).step_by(10).collect()
    } else {
        a.n.clone()
    };
    let needs_pmf = a.tests.is_empty() || a.tests.contains(&TestId::AarsetGn);
    let reps = if needs_pmf {
        a.reps.max(a.aarset_reps)
    } else {
        a.reps
    };
    check_work(&a.guard, reps, &n_grid)?;

    let mut reports = Vec::with_capacity(a.params.len());
    let mut calibration = None;
    for &shape in &a.params {
        let (alt, mut spec) = match a.alt {
            AltKind::ExpPower => {
                let alt = AlternativeDistribution::exponential_power(a.lambda, shape)?;
                let spec = ExperimentSpec::idmttf_side(
                    alt,
                    n_grid.clone(),
                    a.alpha_list.clone(),
                    a.reps,
                    a.seed,
                );
                (alt, spec)
            }
            AltKind::Lognormal => {
                let alt = AlternativeDistribution::lognormal(a.mu, shape)?;
                let spec = ExperimentSpec::dimttf_side(
                    alt,
                    n_grid.clone(),
                    a.alpha_list.clone(),
                    a.reps,
                    a.seed,
                );
                (alt, spec)
            }
        };
        if !a.tests.is_empty() {
            spec.tests = a.tests.clone();
        }
        if let Some(t) = a.tail {
            spec.aarset_tail = tail(t);
        }
        if a.calibration == CalibrationMode::Analytic {
            spec.calibration = Calibration::Analytic;
        }
        spec.aarset_null_replications = a.aarset_reps;
        calibration = Some(spec.calibration);
        reports.push(power_study(&spec).with_context(|| format!("power study against {alt}"))?);
    }
    meta.seed = Some(a.seed);
    meta.replications = Some(a.reps);
    meta.calibration = calibration.map(|c| c.to_string());
    Ok(Report {
        metadata: meta,
        body: Body::Studies(reports),
    })
}

fn mttf(a: &MttfArgs, meta: Metadata) -> Result<Report> {
    let sample = ingest_lifetimes(&a.input)?;
    let curve = sample.empirical_mttf();
    let evaluated =
        a.at.iter()
            .map(|&t| {
                Ok(MttfPoint {
                    t,
                    mttf: curve.value_at(t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        metadata: meta,
        body: Body::mttf(&curve, evaluated),
    })
}
