//! The compiled circuit's control qubit ends maximally mixed, so its readout
//! is a fair coin. This module replaces the circuit by coin tosses and keeps
//! the statistics needed for one-sigma error-bar plots.
//!
//! Convention: heads is readout `y = 1`, tails is `y = 0`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::find_period2_base;
use crate::error::{Error, Result};
use crate::numtheory::Semiprime;
use crate::postprocess::{
    decide_readout, finish_report, FactorReport, LoopOutcome, Mode, RunOptions,
};
use crate::simulator::OutcomeDistribution;

/// Readout value assigned to heads.
pub const HEADS_READOUT: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinRun {
    pub label: String,
    pub tosses: u64,
    pub heads: u64,
    pub p_hat: f64,
    /// Plug-in binomial standard error `sqrt(p_hat (1 - p_hat) / tosses)`.
    pub sigma: f64,
    /// 1-based index of the first heads.
    pub first_heads: Option<u64>,
}

impl CoinRun {
    pub fn from_outcomes(label: impl Into<String>, outcomes: &[bool]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::domain("need at least one toss"));
        }
        let tosses = outcomes.len() as u64;
        let heads = outcomes.iter().filter(|&&h| h).count() as u64;
        let first_heads = outcomes.iter().position(|&h| h).map(|i| i as u64 + 1);
        Ok(Self::with_counts(label, heads, tosses, first_heads))
    }

    fn with_counts(
        label: impl Into<String>,
        heads: u64,
        tosses: u64,
        first_heads: Option<u64>,
    ) -> Self {
        let p_hat = heads as f64 / tosses as f64;
        Self {
            label: label.into(),
            tosses,
            heads,
            p_hat,
            sigma: (p_hat * (1.0 - p_hat) / tosses as f64).sqrt(),
            first_heads,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Pearson chi-square statistic of heads/tails against a fair coin (1 dof).
    pub fn chi_square_fair(&self) -> f64 {
        let expected = self.tosses as f64 / 2.0;
        let tails = (self.tosses - self.heads) as f64;
        ((self.heads as f64 - expected).powi(2) + (tails - expected).powi(2)) / expected
    }

    /// `label p_hat sigma` row for external plotting.
    pub fn plot_row(&self) -> String {
        format!("{} {:.6} {:.6}", self.label, self.p_hat, self.sigma)
    }
}

/// Rows for several runs, with a header line.
pub fn plot_text(runs: &[CoinRun]) -> String {
    let mut out = String::from("# label p_hat sigma\n");
    for run in runs {
        out.push_str(&run.plot_row());
        out.push('\n');
    }
    out
}

fn toss_outcomes(n_tosses: u64, seed: u64) -> Result<Vec<bool>> {
    if n_tosses == 0 {
        return Err(Error::domain("need at least one toss"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_tosses).map(|_| rng.gen::<bool>()).collect())
}

/// `n_tosses` fair coin tosses from a ChaCha8 stream seeded with `seed`.
pub fn toss_series(n_tosses: u64, seed: u64) -> Result<CoinRun> {
    CoinRun::from_outcomes("coin", &toss_outcomes(n_tosses, seed)?)
}

/// Readout distribution of one toss under the heads = 1 convention.
pub fn coin_outcome_distribution() -> OutcomeDistribution {
    OutcomeDistribution {
        readout_bits: 1,
        probabilities: BTreeMap::from([(0, 0.5), (1, 0.5)]),
    }
}

/// "Factors" `sp` by tossing a coin in place of the compiled circuit: the
/// first heads reads `y = 1`, so `y/2 = 1/2`, `r = 2`, and the CRT base splits
/// `N`. All tails exhausts the run without factors.
pub fn coin_factor_demo(
    sp: &Semiprime,
    n_tosses: u64,
    seed: u64,
) -> Result<(CoinRun, FactorReport)> {
    let base = find_period2_base(sp)?;
    let n = sp.n();
    let outcomes = toss_outcomes(n_tosses, seed)?;
    let run = CoinRun::from_outcomes(format!("{}-bit N", n.bits()), &outcomes)?;
    let s_pow = BigUint::from(2u32);
    let mut outcome = LoopOutcome {
        base: base.a.clone(),
        factors: None,
        period: None,
        attempts: 0,
        lucky_gcd: false,
    };
    for heads in outcomes {
        outcome.attempts += 1;
        let y = BigUint::from(if heads {
            HEADS_READOUT
        } else {
            1 - HEADS_READOUT
        });
        let decision = decide_readout(&y, &s_pow, &base.a, n)?;
        if let (Some(c), Some(f)) = (decision.candidate, decision.factors) {
            outcome.period = Some(c.r);
            outcome.factors = Some(f);
            break;
        }
    }
    let opts = RunOptions {
        seed,
        s_override: Some(1),
        max_attempts: u32::try_from(n_tosses).unwrap_or(u32::MAX),
    };
    let report = finish_report(n, Mode::Coin, &opts, 1, outcome);
    Ok((run, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp15() -> Semiprime {
        Semiprime::with_factors(BigUint::from(3u32), BigUint::from(5u32)).unwrap()
    }

    #[test]
    fn toss_series_sizes() {
        assert_eq!(toss_series(10, 1).unwrap().tosses, 10);
        assert_eq!(toss_series(20, 1).unwrap().tosses, 20);
        assert!(toss_series(0, 1).is_err());
        assert_eq!(toss_series(20, 9).unwrap(), toss_series(20, 9).unwrap());
    }

    #[test]
    fn error_bar_formula() {
        let mut outcomes = vec![true; 5];
        outcomes.extend([false; 5]);
        let run = CoinRun::from_outcomes("15", &outcomes).unwrap();
        assert_eq!(run.p_hat, 0.5);
        assert!((run.sigma - (0.25f64 / 10.0).sqrt()).abs() < 1e-15);
        assert!((run.sigma - 0.158).abs() < 1e-3);
        assert_eq!(run.chi_square_fair(), 0.0);
        assert_eq!(run.first_heads, Some(1));
        assert_eq!(run.plot_row(), "15 0.500000 0.158114");
    }

    #[test]
    fn factors_15_unless_all_tails() {
        let (run, report) = coin_factor_demo(&sp15(), 10, 7).unwrap();
        assert_eq!(report.succeeded(), run.heads >= 1);
        if report.succeeded() {
            assert_eq!(
                report.factors,
                Some((BigUint::from(3u32), BigUint::from(5u32)))
            );
            assert_eq!(report.period_found, Some(2));
            assert_eq!(Some(u64::from(report.attempts)), run.first_heads);
        }
        assert_eq!(report.mode, Mode::Coin);
    }

    #[test]
    fn all_tails_exhausts() {
        let seed = (0u64..)
            .find(|&s| toss_series(10, s).unwrap().heads == 0)
            .unwrap();
        let (run, report) = coin_factor_demo(&sp15(), 10, seed).unwrap();
        assert_eq!(run.heads, 0);
        assert!(!report.succeeded());
        assert_eq!(report.attempts, 10);
        assert_eq!(report.period_found, None);
    }

    #[test]
    fn coin_requires_factors() {
        let sp = Semiprime::new(BigUint::from(15u32)).unwrap();
        assert_eq!(
            coin_factor_demo(&sp, 10, 0).unwrap_err(),
            Error::CompilationRequiresFactors
        );
    }
}
