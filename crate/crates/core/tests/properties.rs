//! Invariants of the sample model and the statistics, checked on random data.

use mttf_trend::oracle::{gamma_sup, na_phi_grid, neg_gamma_sup};
use mttf_trend::statistics::{compute, eta, zeta, TestId};
use mttf_trend::Sample;
use proptest::prelude::*;

fn lifetimes(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![
            1e-3f64..10.0,
            (1u32..6).prop_map(|k| k as f64 * 0.5), // ties
            (-6.0f64..3.0).prop_map(f64::exp),
        ],
        1..=max_len,
    )
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn sample_caches_are_consistent(xs in lifetimes(40)) {
        let s = Sample::from_slice(&xs).unwrap();
        let mut expected = xs.clone();
        expected.sort_by(f64::total_cmp);
        prop_assert_eq!(s.sorted(), expected.as_slice());
        let naive = xs.iter().sum::<f64>() / xs.len() as f64;
        prop_assert!((s.mean() - naive).abs() <= 1e-12 * xs.len() as f64 * naive.max(1.0));
    }

    #[test]
    fn spacings_rebuild_order_statistics(xs in lifetimes(40)) {
        let s = Sample::from_slice(&xs).unwrap();
        let d = s.spacings();
        prop_assert_eq!(d.len(), s.len());
        let mut acc = 0.0;
        for (gap, &x) in d.as_slice().iter().zip(s.sorted()) {
            prop_assert!(*gap >= 0.0);
            acc += gap;
            prop_assert!((acc - x).abs() <= 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn ttt_is_monotone_with_fixed_ends(xs in lifetimes(40)) {
        let u = Sample::from_slice(&xs).unwrap().ttt_transform();
        let u = u.as_slice();
        prop_assert_eq!(u[0], 0.0);
        prop_assert_eq!(*u.last().unwrap(), 1.0);
        for w in u.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn mttf_curve_ends_at_mean(xs in lifetimes(40)) {
        let s = Sample::from_slice(&xs).unwrap();
        let curve = s.empirical_mttf();
        prop_assert!(curve.points().iter().all(|p| p.mttf > 0.0));
        let last = curve.points().last().unwrap().mttf;
        prop_assert!(rel_close(last, s.mean(), 1e-10));
    }

    #[test]
    fn scaling_behaviour(xs in lifetimes(30), a in prop::sample::select(vec![1e-6, 7.3, 1e6])) {
        let s = Sample::from_slice(&xs).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| a * x).collect();
        let t = Sample::from_slice(&scaled).unwrap();
        for (d, e) in s.spacings().as_slice().iter().zip(t.spacings().as_slice()) {
            prop_assert!(rel_close(a * d, *e, 1e-12) || (a * d - e).abs() <= 1e-12 * a * s.sorted().last().unwrap());
        }
        for (u, v) in s.ttt_transform().as_slice().iter().zip(t.ttt_transform().as_slice()) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
        for test in TestId::ALL {
            let (p, q) = (compute(test, &s).value, compute(test, &t).value);
            prop_assert!(rel_close(p, q, 1e-9), "{} {} vs {}", test, p, q);
        }
    }

    #[test]
    fn statistics_ignore_order(xs in lifetimes(30)) {
        let s = Sample::from_slice(&xs).unwrap();
        let mut rev = xs.clone();
        rev.reverse();
        let r = Sample::from_slice(&rev).unwrap();
        for test in TestId::ALL {
            prop_assert_eq!(compute(test, &s).value, compute(test, &r).value);
        }
    }

    #[test]
    fn closed_forms_match_direct_integration(xs in lifetimes(12)) {
        let s = Sample::from_slice(&xs).unwrap();
        let n = s.len();
        let zmax = (0..=n).map(|k| zeta(&s, k).unwrap()).fold(f64::NEG_INFINITY, f64::max);
        let emax = (0..=n).map(|k| eta(&s, k).unwrap()).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((zmax - gamma_sup(&s)).abs() < 1e-10);
        prop_assert!((emax - neg_gamma_sup(&s)).abs() < 1e-10);

        let scale = (n as f64).sqrt() / s.mean();
        let g = compute(TestId::GammaStar, &s).value;
        let k = compute(TestId::KappaStar, &s).value;
        prop_assert!((g - scale * gamma_sup(&s)).abs() < 1e-9 * scale.max(1.0));
        prop_assert!((k - scale * neg_gamma_sup(&s)).abs() < 1e-9 * scale.max(1.0));

        let phi = na_phi_grid(&s);
        let tmax = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let umax = phi.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((compute(TestId::NaTStar, &s).value - scale * tmax).abs() < 1e-9 * scale.max(1.0));
        prop_assert!((compute(TestId::NaUStar, &s).value - scale * umax).abs() < 1e-9 * scale.max(1.0));
    }

    #[test]
    fn aarset_statistic_range(xs in lifetimes(60)) {
        let s = Sample::from_slice(&xs).unwrap();
        let g = compute(TestId::AarsetGn, &s);
        let n = s.len() as f64;
        prop_assert_eq!(g.value.fract(), 0.0);
        prop_assert!(g.value >= 2.0 && g.value <= n + 1.0);
        let parts = g.aarset.unwrap();
        prop_assert!(parts.v >= 1 && parts.v <= s.len() && parts.m < s.len());
    }

    #[test]
    fn argmax_in_range(xs in lifetimes(30)) {
        let s = Sample::from_slice(&xs).unwrap();
        for test in [TestId::GammaStar, TestId::KappaStar, TestId::NaTStar, TestId::NaUStar] {
            let k = compute(test, &s).argmax_k.unwrap();
            prop_assert!(k <= s.len());
        }
    }
}

#[test]
fn kappa_starts_at_left_endpoint() {
    // The E-sum starting at i = k makes η_{n,k} equal −γ(Fₙ, X₍ₖ₎); the
    // alternative start at k + 1 would give −ζ_{n,k}, the left limit at X₍ₖ₊₁₎.
    let s = Sample::from_slice(&[0.3, 1.9, 0.7, 2.6, 1.1]).unwrap();
    for k in 1..=s.len() {
        let at = mttf_trend::oracle::gamma_oracle(&s, s.sorted()[k - 1]);
        assert!((eta(&s, k).unwrap() + at).abs() < 1e-12);
    }
    assert!((eta(&s, 0).unwrap() + mttf_trend::oracle::gamma_oracle(&s, 0.0)).abs() < 1e-12);
}
