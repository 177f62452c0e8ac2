//! Scale-invariant test statistics computed from order-statistic spacings.
//!
//! All five statistics are evaluated in O(n) per sample from compensated
//! suffix sums of the weighted spacings `w_i D_i` and `w_i² D_i`, where
//! `w_i = 1 − i/n` is the empirical survival on `[X₍ᵢ₎, X₍ᵢ₊₁₎)`. The
//! per-index functions [`zeta`] and [`eta`] evaluate the defining sums
//! term by term and serve as the reference for the fast path.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::sample::Sample;

/// Identifies one of the supported tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestId {
    /// γ*: increasing-then-decreasing MTTF.
    GammaStar,
    /// κ*: decreasing-then-increasing MTTF.
    KappaStar,
    /// T*: bathtub failure rate, spacings form of the Na–Jeon–Park measure.
    NaTStar,
    /// U*: upside-down bathtub counterpart of T*.
    NaUStar,
    /// Aarset's G_n = V_n + n − M_n from the TTT transform.
    AarsetGn,
}

impl TestId {
    pub const ALL: [TestId; 5] = [
        TestId::GammaStar,
        TestId::KappaStar,
        TestId::NaTStar,
        TestId::NaUStar,
        TestId::AarsetGn,
    ];

    /// Short machine name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            TestId::GammaStar => "gamma",
            TestId::KappaStar => "kappa",
            TestId::NaTStar => "na-t",
            TestId::NaUStar => "na-u",
            TestId::AarsetGn => "aarset",
        }
    }

    /// Symbol used in table headers.
    pub fn symbol(self) -> &'static str {
        match self {
            TestId::GammaStar => "γ*",
            TestId::KappaStar => "κ*",
            TestId::NaTStar => "T*",
            TestId::NaUStar => "U*",
            TestId::AarsetGn => "G_n",
        }
    }

    /// Whether the Durbin asymptotic approximation applies.
    pub fn has_analytic_calibration(self) -> bool {
        matches!(self, TestId::GammaStar | TestId::KappaStar)
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TestId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown test '{s}'")))
    }
}

/// Ingredients of Aarset's statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AarsetParts {
    pub v: usize,
    pub m: usize,
}

/// A computed test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatisticValue {
    pub test: TestId,
    pub value: f64,
    /// Index k attaining the maximum (smallest on ties). Diagnostic only.
    pub argmax_k: Option<usize>,
    pub aarset: Option<AarsetParts>,
}

/// Computes the statistic identified by `test`.
pub fn compute(test: TestId, sample: &Sample) -> StatisticValue {
    match test {
        TestId::GammaStar => gamma_star(sample),
        TestId::KappaStar => kappa_star(sample),
        TestId::NaTStar => na_t_star(sample),
        TestId::NaUStar => na_u_star(sample),
        TestId::AarsetGn => aarset_gn(sample),
    }
}

fn check_index(sample: &Sample, k: usize) -> Result<()> {
    if k > sample.len() {
        Err(Error::IndexOutOfRange { k, n: sample.len() })
    } else {
        Ok(())
    }
}

/// ζ_{n,k} = Σ_{i=0}^{n−1} A_{k,i} D_i + Σ_{i=k+1}^{n−1} B_{k,i} D_i, the supremum
/// of γ(Fₙ, t) over `[X₍ₖ₎, X₍ₖ₊₁₎)`.
pub fn zeta(sample: &Sample, k: usize) -> Result<f64> {
    check_index(sample, k)?;
    let n = sample.len() as f64;
    let c = 2.0 - k as f64 / n;
    let mut acc = KahanSum::new();
    for (i, &d) in sample.spacings().as_slice().iter().enumerate() {
        let w = 1.0 - i as f64 / n;
        acc.add((-2.0 * w * w - w + 2.0 * c * w) * d);
        if i > k {
            acc.add((4.0 * w * w - 2.0 * c * w) * d);
        }
    }
    Ok(acc.value())
}

/// η_{n,k} = Σ_{i=0}^{n−1} C_{k,i} D_i + Σ_{i=k}^{n−1} E_{k,i} D_i, the value of
/// −γ(Fₙ, X₍ₖ₎), which is the supremum of −γ(Fₙ, t) over `[X₍ₖ₎, X₍ₖ₊₁₎)`.
pub fn eta(sample: &Sample, k: usize) -> Result<f64> {
    check_index(sample, k)?;
    let n = sample.len() as f64;
    let c = 2.0 - k as f64 / n;
    let mut acc = KahanSum::new();
    for (i, &d) in sample.spacings().as_slice().iter().enumerate() {
        let w = 1.0 - i as f64 / n;
        acc.add((2.0 * w * w + w - 2.0 * c * w) * d);
        if i >= k {
            acc.add((2.0 * c * w - 4.0 * w * w) * d);
        }
    }
    Ok(acc.value())
}

/// Compensated suffix sums of `w_i D_i` and `w_i² D_i`, indexed 0..=n.
struct WeightedSpacings {
    n: usize,
    tail1: Vec<f64>,
    tail2: Vec<f64>,
    mean: f64,
}

impl WeightedSpacings {
    fn new(sample: &Sample) -> Self {
        let n = sample.len();
        let nf = n as f64;
        let spacings = sample.spacings();
        let mut tail1 = vec![0.0; n + 1];
        let mut tail2 = vec![0.0; n + 1];
        let mut acc1 = KahanSum::new();
        let mut acc2 = KahanSum::new();
        for (i, &d) in spacings.as_slice().iter().enumerate().rev() {
            let w = 1.0 - i as f64 / nf;
            acc1.add(w * d);
            acc2.add(w * w * d);
            tail1[i] = acc1.value();
            tail2[i] = acc2.value();
        }
        Self {
            n,
            tail1,
            tail2,
            mean: sample.mean(),
        }
    }

    fn s1(&self) -> f64 {
        self.tail1[0]
    }

    fn s2(&self) -> f64 {
        self.tail2[0]
    }

    fn zeta(&self, k: usize) -> f64 {
        let c = 2.0 - k as f64 / self.n as f64;
        let (t1, t2) = if k < self.n {
            (self.tail1[k + 1], self.tail2[k + 1])
        } else {
            (0.0, 0.0)
        };
        (2.0 * c - 1.0) * self.s1() - 2.0 * self.s2() + 4.0 * t2 - 2.0 * c * t1
    }

    fn eta(&self, k: usize) -> f64 {
        let c = 2.0 - k as f64 / self.n as f64;
        (1.0 - 2.0 * c) * self.s1() + 2.0 * self.s2() + 2.0 * c * self.tail1[k]
            - 4.0 * self.tail2[k]
    }

    /// η₁(k) − 2η₂(k) + η₃(k).
    fn na_combination(&self, k: usize) -> f64 {
        let a = 1.0 - k as f64 / self.n as f64;
        let eta1 = self.s1() - self.tail1[k];
        let eta2 = a * self.tail1[k] - 2.0 * self.tail2[k];
        let eta3 = a * self.s1() - 2.0 * self.s2();
        eta1 - 2.0 * eta2 + eta3
    }

    fn scaled_max(&self, test: TestId, f: impl Fn(usize) -> f64) -> StatisticValue {
        let (argmax, best) = argmax(0..=self.n, f);
        StatisticValue {
            test,
            value: (self.n as f64).sqrt() * best / self.mean,
            argmax_k: Some(argmax),
            aarset: None,
        }
    }
}

/// First index attaining the maximum.
fn argmax(range: impl Iterator<Item = usize>, f: impl Fn(usize) -> f64) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for k in range {
        let v = f(k);
        if v > best.1 {
            best = (k, v);
        }
    }
    best
}

/// γ*(Fₙ) = √n · max_k ζ_{n,k} / X̄. Large values indicate IDMTTF.
pub fn gamma_star(sample: &Sample) -> StatisticValue {
    let ws = WeightedSpacings::new(sample);
    ws.scaled_max(TestId::GammaStar, |k| ws.zeta(k))
}

/// κ*(Fₙ) = √n · max_k η_{n,k} / X̄. Large values indicate DIMTTF.
pub fn kappa_star(sample: &Sample) -> StatisticValue {
    let ws = WeightedSpacings::new(sample);
    ws.scaled_max(TestId::KappaStar, |k| ws.eta(k))
}

/// T* = √n · max_k {η₁(k) − 2η₂(k) + η₃(k)} / X̄. Large values indicate BFR.
pub fn na_t_star(sample: &Sample) -> StatisticValue {
    let ws = WeightedSpacings::new(sample);
    ws.scaled_max(TestId::NaTStar, |k| ws.na_combination(k))
}

/// U* = √n · max_k {2η₂(k) − η₁(k) − η₃(k)} / X̄. Large values indicate UBFR.
pub fn na_u_star(sample: &Sample) -> StatisticValue {
    let ws = WeightedSpacings::new(sample);
    ws.scaled_max(TestId::NaUStar, |k| -ws.na_combination(k))
}

/// Aarset's G_n = V_n + n − M_n, an integer in [2, n + 1].
pub fn aarset_gn(sample: &Sample) -> StatisticValue {
    let ttt = sample.ttt_transform();
    let u = ttt.as_slice();
    let n = ttt.n();
    let diag = |i: usize| i as f64 / n as f64;
    // U_n = 1 = n/n, so both searches succeed
    let v = (1..=n).find(|&i| u[i] >= diag(i)).unwrap_or(n);
    let m = (0..n).rev().find(|&i| u[i] <= diag(i)).unwrap_or(0);
    StatisticValue {
        test: TestId::AarsetGn,
        value: (v + n - m) as f64,
        argmax_k: None,
        aarset: Some(AarsetParts { v, m }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(xs: &[f64]) -> Sample {
        Sample::from_slice(xs).unwrap()
    }

    const ROOT2_OVER_1_5: f64 = std::f64::consts::SQRT_2 / 1.5;

    #[test]
    fn zeta_examples() {
        let s = sample(&[1.0, 2.0]);
        assert!((zeta(&s, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((zeta(&s, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((zeta(&s, 2).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(zeta(&s, 3), Err(Error::IndexOutOfRange { k: 3, n: 2 }));
    }

    #[test]
    fn eta_examples() {
        let s = sample(&[1.0, 2.0]);
        assert!((eta(&s, 0).unwrap() + 1.0).abs() < 1e-15);
        assert!(eta(&s, 1).unwrap().abs() < 1e-15);
        assert!((eta(&s, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(eta(&s, 3).is_err());
    }

    #[test]
    fn fast_path_matches_term_by_term_sums() {
        let s = sample(&[0.3, 1.7, 0.2, 4.1, 2.2, 2.2, 0.9]);
        let ws = WeightedSpacings::new(&s);
        for k in 0..=s.len() {
            assert!((ws.zeta(k) - zeta(&s, k).unwrap()).abs() < 1e-12);
            assert!((ws.eta(k) - eta(&s, k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_sample_values() {
        let s = sample(&[2.0, 1.0]);
        let g = gamma_star(&s);
        assert!((g.value - ROOT2_OVER_1_5).abs() < 1e-12);
        assert_eq!(g.argmax_k, Some(0));
        let k = kappa_star(&s);
        assert!((k.value - ROOT2_OVER_1_5).abs() < 1e-12);
        assert_eq!(k.argmax_k, Some(2));
        let a = aarset_gn(&s);
        assert_eq!(a.value, 3.0);
        assert_eq!(a.aarset, Some(AarsetParts { v: 1, m: 0 }));
    }

    #[test]
    fn singleton_identities() {
        for x in [1e-3, 0.7, 5.0, 123.0] {
            let s = sample(&[x]);
            for test in [
                TestId::GammaStar,
                TestId::KappaStar,
                TestId::NaTStar,
                TestId::NaUStar,
            ] {
                assert!(
                    (compute(test, &s).value - 1.0).abs() < 1e-12,
                    "{test} at {x}"
                );
            }
            assert_eq!(na_t_star(&s).argmax_k, Some(0));
            assert_eq!(na_u_star(&s).argmax_k, Some(1));
            let g = aarset_gn(&s);
            assert_eq!(g.value, 2.0);
            assert_eq!(g.aarset, Some(AarsetParts { v: 1, m: 0 }));
        }
    }

    #[test]
    fn ties_are_well_defined() {
        let s = sample(&[2.0, 2.0, 2.0]);
        for test in TestId::ALL {
            assert!(compute(test, &s).value.is_finite());
        }
    }

    #[test]
    fn test_id_names_round_trip() {
        for t in TestId::ALL {
            assert_eq!(t.name().parse::<TestId>().unwrap(), t);
        }
        assert!("delta".parse::<TestId>().is_err());
        assert!(TestId::KappaStar.has_analytic_calibration());
        assert!(!TestId::AarsetGn.has_analytic_calibration());
    }
}
