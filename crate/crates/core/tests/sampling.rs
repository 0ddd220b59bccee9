//! Sampled runs against exact distributions.

mod common;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use shor_core::coinlab::coin_outcome_distribution;
use shor_core::{
    build_compiled_circuit, build_semiclassical_stages, coin_factor_demo, find_period2_base,
    output_distribution, run_circuit, run_full_algorithm, toss_series, Mode, RunOptions, Semiprime,
};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

fn b(v: u64) -> BigUint {
    BigUint::from(v)
}

#[test]
fn sampled_outcomes_match_exact_distribution() {
    for (a, n, s) in [(7u64, 15u64, 6u32), (4, 21, 7), (2, 33, 5)] {
        let circuit = build_semiclassical_stages(&b(a), &b(n), s).unwrap();
        let dist = output_distribution(&circuit).unwrap();
        let shots = 10_000u64;
        let mut counts = vec![0u64; 1 << s];
        for seed in 0..shots {
            let y = run_circuit(&circuit, seed).unwrap().y.to_u64().unwrap();
            counts[y as usize] += 1;
        }
        for (y, &count) in counts.iter().enumerate() {
            let p = dist.probability(y as u64);
            let expected = p * shots as f64;
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (count as f64 - expected).abs() <= 4.0 * sigma.max(1.0),
                "a={a} n={n} y={y}: {count} vs {expected:.1}"
            );
        }
    }
}

#[test]
fn coin_and_compiled_circuit_agree() {
    for (p, q) in [(3u64, 5u64), (3, 7), (5, 7), (11, 13)] {
        let sp = Semiprime::with_factors(b(p), b(q)).unwrap();
        let circuit = build_compiled_circuit(&find_period2_base(&sp).unwrap()).unwrap();
        let dist = output_distribution(&circuit).unwrap();
        assert!(dist.total_variation(&coin_outcome_distribution()) < 1e-12);

        let simulated = run_full_algorithm(&sp, Mode::CompiledCrt, &RunOptions::seeded(1)).unwrap();
        let (_, coin) = coin_factor_demo(&sp, 64, 1).unwrap();
        assert_eq!(simulated.factors, coin.factors);
        assert_eq!(simulated.period_found, coin.period_found);
        assert_eq!(simulated.base_used, coin.base_used);
        assert_eq!(simulated.factors, Some((b(p), b(q))));
    }
}

#[test]
fn heads_counts_are_binomial() {
    let tosses = 100u64;
    let runs = 10_000u64;
    let mut hist = vec![0u64; tosses as usize + 1];
    for seed in 0..runs {
        hist[toss_series(tosses, seed).unwrap().heads as usize] += 1;
    }
    let binom = Binomial::new(0.5, tosses).unwrap();

    // Merge tail bins until every bin expects at least 5 counts.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (k, &count) in hist.iter().enumerate() {
        obs += count as f64;
        exp += binom.pmf(k as u64) * runs as f64;
        if exp >= 5.0 {
            bins.push((obs, exp));
            (obs, exp) = (0.0, 0.0);
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs;
        last.1 += exp;
    }
    let chi2: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let critical = ChiSquared::new((bins.len() - 1) as f64)
        .unwrap()
        .inverse_cdf(0.999);
    assert!(
        chi2 < critical,
        "chi2 {chi2} over {} bins, critical {critical}",
        bins.len()
    );
}

#[test]
fn honest_runs_are_reproducible() {
    let sp = Semiprime::new(b(21)).unwrap();
    let first = run_full_algorithm(&sp, Mode::HonestRandomBase, &RunOptions::seeded(9)).unwrap();
    let again = run_full_algorithm(&sp, Mode::HonestRandomBase, &RunOptions::seeded(9)).unwrap();
    assert_eq!(first.to_json(), again.to_json());
    assert_eq!(first.factors, Some((b(3), b(7))));
}
