//! Report assembly and the CSV / Markdown / JSON emitters.
//!
//! Critical values, powers and standard errors print with 4 decimals; other
//! reals (statistics, p-values, MTTF values) with 6 significant digits. JSON
//! carries full precision. The generation timestamp appears in JSON and
//! Markdown only, so CSV output of a seeded run is byte-reproducible.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use mttf_trend::calibration::SampleSize;
use mttf_trend::sample::MttfPoint;
use mttf_trend::{Calibration, CriticalValueTable, MttfCurve, PowerReport, TestId, TestOutcome};

use crate::args::Format;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub arguments: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<String>,
    #[serde(skip_serializing)]
    pub timestamp: String,
}

impl Metadata {
    pub fn new(command: &'static str, arguments: Vec<String>) -> Self {
        Self {
            tool: "mttf-trend",
            version: env!("CARGO_PKG_VERSION"),
            command,
            arguments,
            seed: None,
            replications: None,
            calibration: None,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("version", format!("{} {}", self.tool, self.version)),
            ("command", self.command.to_string()),
        ];
        if !self.arguments.is_empty() {
            out.push(("arguments", self.arguments.join(" ")));
        }
        if let Some(seed) = self.seed {
            out.push(("seed", seed.to_string()));
        }
        if let Some(reps) = self.replications {
            out.push(("replications", reps.to_string()));
        }
        if let Some(cal) = &self.calibration {
            out.push(("calibration", cal.clone()));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MttfBody {
    pub points: Vec<MttfPoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evaluated: Vec<MttfPoint>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Body {
    Test(TestOutcome),
    Critical(CriticalValueTable),
    Studies(Vec<PowerReport>),
    Mttf(MttfBody),
}

impl Body {
    pub fn mttf(curve: &MttfCurve, evaluated: Vec<MttfPoint>) -> Self {
        Body::Mttf(MttfBody {
            points: curve.points().to_vec(),
            evaluated,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub metadata: Metadata,
    pub body: Body,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metadata: JsonMetadata<'a>,
    #[serde(flatten)]
    body: &'a Body,
}

#[derive(Serialize)]
struct JsonMetadata<'a> {
    #[serde(flatten)]
    inner: &'a Metadata,
    timestamp: &'a str,
}

/// 6 significant digits, fixed notation where reasonable.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Markdown => self.markdown(),
            Format::Json => {
                let json = JsonReport {
                    metadata: JsonMetadata {
                        inner: &self.metadata,
                        timestamp: &self.metadata.timestamp,
                    },
                    body: &self.body,
                };
                let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.metadata.fields() {
            let _ = writeln!(out, "# {k}: {v}");
        }
        match &self.body {
            Body::Test(o) => {
                out.push_str(
                    "test,n,statistic,alpha,calibration,reps,seed,tail,critical,p_value,randomization_probability,decision\n",
                );
                let (reps, seed) = match o.calibration {
                    Calibration::Analytic => (String::new(), String::new()),
                    Calibration::MonteCarlo { replications, seed } => {
                        (replications.to_string(), seed.to_string())
                    }
                };
                let kind = match o.calibration {
                    Calibration::Analytic => "analytic",
                    Calibration::MonteCarlo { .. } => "monte-carlo",
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{kind},{reps},{seed},{},{:.4},{},{},{}",
                    o.test,
                    o.n,
                    sig6(o.statistic.value),
                    o.alpha,
                    o.tail,
                    o.critical_value,
                    sig6(o.p_value),
                    o.randomization_probability.map(sig6).unwrap_or_default(),
                    o.decision
                );
            }
            Body::Critical(table) => out.push_str(&table.to_csv()),
            Body::Studies(reports) => {
                for r in reports {
                    let _ = writeln!(out, "# alternative: {}", r.alternative);
                    out.push_str(&r.to_csv());
                }
            }
            Body::Mttf(m) => {
                out.push_str("t,mttf\n");
                for p in m.points.iter().chain(&m.evaluated) {
                    let _ = writeln!(out, "{},{}", sig6(p.t), sig6(p.mttf));
                }
            }
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        let mut meta: Vec<String> = self
            .metadata
            .fields()
            .into_iter()
            .map(|(k, v)| format!("{k}: `{v}`"))
            .collect();
        meta.push(format!("generated: {}", self.metadata.timestamp));
        let _ = writeln!(out, "_{}_\n", meta.join(" · "));
        match &self.body {
            Body::Test(o) => {
                out.push_str("| field | value |\n|---|---|\n");
                let mut row = |k: &str, v: String| {
                    let _ = writeln!(out, "| {k} | {v} |");
                };
                row("test", o.test.symbol().to_string());
                row("n", o.n.to_string());
                row("statistic", sig6(o.statistic.value));
                row("alpha", o.alpha.to_string());
                row("calibration", o.calibration.to_string());
                if o.test == TestId::AarsetGn {
                    row("tail", o.tail.to_string());
                }
                row("critical value", format!("{:.4}", o.critical_value));
                row("p-value", sig6(o.p_value));
                if let Some(p) = o.randomization_probability {
                    row("randomization probability", sig6(p));
                }
                row("decision", o.decision.to_string());
            }
            Body::Critical(table) => out.push_str(&critical_markdown(table)),
            Body::Studies(reports) => out.push_str(&studies_markdown(reports)),
            Body::Mttf(m) => {
                out.push_str("| t | MTTF |\n|---|---|\n");
                for p in m.points.iter().chain(&m.evaluated) {
                    let _ = writeln!(out, "| {} | {} |", sig6(p.t), sig6(p.mttf));
                }
            }
        }
        out
    }
}

/// Rows (test, n), one column per α.
fn critical_markdown(table: &CriticalValueTable) -> String {
    let mut alphas: Vec<f64> = table.entries().iter().map(|e| e.alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mut rows: BTreeMap<(TestId, SampleSize), BTreeMap<u64, f64>> = BTreeMap::new();
    for e in table.entries() {
        rows.entry((e.test, e.n))
            .or_default()
            .insert(e.alpha.to_bits(), e.critical);
    }
    let mut out = String::from("| test | n |");
    for a in &alphas {
        let _ = write!(out, " α={a} |");
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---|".repeat(alphas.len()));
    out.push('\n');
    for ((test, n), cells) in rows {
        let _ = write!(out, "| {} | {n} |", test.symbol());
        for a in &alphas {
            match cells.get(&a.to_bits()) {
                Some(c) => {
                    let _ = write!(out, " {c:.4} |");
                }
                None => out.push_str(" – |"),
            }
        }
        out.push('\n');
    }
    out
}

/// Rows (n, α), one column per (alternative, test); cells "power (SE)".
fn studies_markdown(reports: &[PowerReport]) -> String {
    let mut out = String::from("| n | α |");
    for r in reports {
        for &t in &r.tests {
            let _ = write!(out, " {} {} |", r.alternative, r.column_label(t));
        }
    }
    out.push_str("\n|---|---|");
    for r in reports {
        out.push_str(&"---|".repeat(r.tests.len()));
    }
    out.push('\n');
    let mut keys: Vec<(usize, f64)> = reports
        .iter()
        .flat_map(|r| r.cells.iter().map(|c| (c.n, c.alpha)))
        .collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();
    for (n, alpha) in keys {
        let _ = write!(out, "| {n} | {alpha} |");
        for r in reports {
            for &t in &r.tests {
                match r.cell(t, n, alpha) {
                    Some(c) => {
                        let _ = write!(out, " {:.4} ({:.4}) |", c.power, c.stderr);
                    }
                    None => out.push_str(" – |"),
                }
            }
        }
        out.push('\n');
    }
    out.push_str("\nCells: rejection fraction (Monte Carlo standard error).\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(0.30612345), "0.306123");
        assert_eq!(sig6(1234.56789), "1234.57");
        assert_eq!(sig6(-2.5e-7), "-2.50000e-7");
        assert_eq!(sig6(0.0), "0");
    }
}
