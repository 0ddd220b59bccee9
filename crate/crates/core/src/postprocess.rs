//! The classical steps around the quantum core: base selection, the gcd
//! shortcut, period recovery from a readout `y`, and factor derivation, tied
//! together in a retry loop that produces a [`FactorReport`].

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coinlab;
use crate::compiler::{
    build_compiled_circuit, build_semiclassical_stages, default_readout_bits, find_period2_base,
    readout_modulus, zalka_qubit_count, Circuit, QubitBudget,
};
use crate::error::{Error, Result};
use crate::numtheory::{
    continued_fraction_convergents, exact_sqrt, gcd, is_probable_prime, mod_pow, Convergent,
    Semiprime,
};
use crate::simulator::{run_circuit, MAX_DISTRIBUTION_MODULUS};

/// Largest multiple `k` tried for each convergent denominator.
pub const MAX_DENOMINATOR_MULTIPLE: u64 = 4;

pub const DEFAULT_MAX_ATTEMPTS: u32 = 64;

/// A period guess `r = multiple * denominator(source_convergent)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCandidate {
    pub r: u64,
    pub source_convergent: Convergent,
    pub multiple: u64,
    /// `a^r = 1 (mod n)`.
    pub verified: bool,
}

/// Scans the convergents of `y / s_pow` by increasing denominator `d`, trying
/// `k * d` for `k = 1..=4` (never above `n`), and returns the first `r` with
/// `a^r = 1 (mod n)`.
///
/// Convergents with denominator 1 are integers, i.e. phase 0, and carry no
/// period information; they are skipped. In particular `y = 0` yields `None`.
pub fn extract_period(
    y: &BigUint,
    s_pow: &BigUint,
    a: &BigUint,
    n: &BigUint,
) -> Result<Option<PeriodCandidate>> {
    let one = BigUint::one();
    for conv in continued_fraction_convergents(y, s_pow)? {
        if conv.denominator.is_one() {
            continue;
        }
        if conv.denominator > *n {
            break;
        }
        let Some(d) = conv.denominator.to_u64() else {
            break;
        };
        for k in 1..=MAX_DENOMINATOR_MULTIPLE {
            let Some(r) = d.checked_mul(k) else { break };
            if BigUint::from(r) > *n {
                break;
            }
            if mod_pow(a, &BigUint::from(r), n)? == one {
                return Ok(Some(PeriodCandidate {
                    r,
                    source_convergent: conv,
                    multiple: k,
                    verified: true,
                }));
            }
        }
    }
    Ok(None)
}

fn check_period(a: &BigUint, r: u64, n: &BigUint) -> Result<()> {
    if r == 0 {
        return Err(Error::domain("period must be positive"));
    }
    if mod_pow(a, &BigUint::from(r), n)? != BigUint::one() % n {
        return Err(Error::domain(format!("{a}^{r} != 1 (mod {n})")));
    }
    Ok(())
}

/// `(gcd(x - 1, n), gcd(x + 1, n))` when both are proper factors multiplying to `n`.
fn split_with_root(x: &BigUint, n: &BigUint) -> Option<(BigUint, BigUint)> {
    if x.is_zero() {
        return None;
    }
    let lo = gcd(&(x - 1u32), n);
    let hi = gcd(&((x + 1u32) % n), n);
    let proper = |f: &BigUint| !f.is_one() && f != n;
    (proper(&lo) && proper(&hi) && &lo * &hi == *n).then_some((lo, hi))
}

/// Factors from a verified period: for even `r` with `a^(r/2) != -1`, the pair
/// `gcd(a^(r/2) - 1, n)`, `gcd(a^(r/2) + 1, n)`; odd `r` goes through
/// [`odd_period_rescue`].
pub fn derive_factors(a: &BigUint, r: u64, n: &BigUint) -> Result<Option<(BigUint, BigUint)>> {
    check_period(a, r, n)?;
    if r.is_odd() {
        return odd_period_rescue(a, r, n);
    }
    let half = mod_pow(a, &BigUint::from(r / 2), n)?;
    if half == n - 1u32 {
        return Ok(None);
    }
    Ok(split_with_root(&half, n))
}

/// For odd `r` and a perfect square `a = b^2`, `b^r` is a square root of 1
/// and may split `n`.
pub fn odd_period_rescue(a: &BigUint, r: u64, n: &BigUint) -> Result<Option<(BigUint, BigUint)>> {
    if r.is_even() {
        return Err(Error::domain(format!(
            "odd_period_rescue needs an odd period, got {r}"
        )));
    }
    check_period(a, r, n)?;
    let Some(root) = exact_sqrt(a) else {
        return Ok(None);
    };
    let x = mod_pow(&root, &BigUint::from(r), n)?;
    if x == n - 1u32 {
        return Ok(None);
    }
    Ok(split_with_root(&x, n))
}

/// What the classical post-processing makes of a single readout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadoutDecision {
    pub candidate: Option<PeriodCandidate>,
    #[serde(with = "crate::decimal::option_pair")]
    pub factors: Option<(BigUint, BigUint)>,
}

impl ReadoutDecision {
    pub fn succeeded(&self) -> bool {
        self.factors.is_some()
    }
}

/// Period extraction followed by factor derivation.
pub fn decide_readout(
    y: &BigUint,
    s_pow: &BigUint,
    a: &BigUint,
    n: &BigUint,
) -> Result<ReadoutDecision> {
    let candidate = extract_period(y, s_pow, a, n)?;
    let factors = match &candidate {
        Some(c) => derive_factors(a, c.r, n)?,
        None => None,
    };
    Ok(ReadoutDecision { candidate, factors })
}

/// How bases are chosen and how the readout is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Random base, full semiclassical circuit, exact simulation.
    HonestRandomBase,
    /// Period-2 base from the known factors, two-qubit circuit.
    CompiledCrt,
    /// Period-2 base from the known factors, readout from a fair coin.
    Coin,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::HonestRandomBase => "honest-random-base",
            Mode::CompiledCrt => "compiled-crt",
            Mode::Coin => "coin",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "honest" | "honest-random-base" => Ok(Mode::HonestRandomBase),
            "compiled" | "compiled-crt" => Ok(Mode::CompiledCrt),
            "coin" => Ok(Mode::Coin),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Readout bits; defaults to the smallest `s` with `2^s >= N^2` in honest
    /// mode and to 1 in compiled mode.
    pub s_override: Option<u32>,
    pub max_attempts: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            s_override: None,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

impl RunOptions {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Outcome of a full run. A run that exhausts its attempts is still a report,
/// with `factors = None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    #[serde(with = "crate::decimal")]
    pub n: BigUint,
    #[serde(with = "crate::decimal::option_pair")]
    pub factors: Option<(BigUint, BigUint)>,
    #[serde(with = "crate::decimal")]
    pub base_used: BigUint,
    pub period_found: Option<u64>,
    pub attempts: u32,
    pub mode: Mode,
    pub readout_bits: u32,
    pub qubit_budget: QubitBudget,
    pub seed: u64,
    /// The factor came from `gcd(a, N) != 1` on a random draw; no period was measured.
    pub lucky_gcd: bool,
    pub honesty_note: String,
}

impl FactorReport {
    pub fn succeeded(&self) -> bool {
        self.factors.is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Multi-line human-readable summary with the honesty metric first.
    pub fn render_human(&self) -> String {
        let mut out = format!(">>> {}\n", self.honesty_note);
        out.push_str(&format!("N          = {}\n", self.n));
        match &self.factors {
            Some((p, q)) => out.push_str(&format!("factors    = {p} x {q}\n")),
            None => out.push_str("factors    = (none)\n"),
        }
        out.push_str(&format!("mode       = {}\n", self.mode));
        out.push_str(&format!("base a     = {}\n", self.base_used));
        match self.period_found {
            Some(r) => out.push_str(&format!("period r   = {r}\n")),
            None => out.push_str("period r   = (none)\n"),
        }
        out.push_str(&format!("attempts   = {}\n", self.attempts));
        out.push_str(&format!(
            "qubits     = {} (optimized uncompiled) vs {} (compiled)\n",
            self.qubit_budget.zalka_qubits, self.qubit_budget.compiled_qubits
        ));
        out.push_str(&format!("seed       = {}\n", self.seed));
        out
    }
}

pub(crate) fn honesty_note(
    n: &BigUint,
    period: Option<u64>,
    lucky_gcd: bool,
    attempts: u32,
) -> String {
    let bits = n.bits();
    match (period, lucky_gcd) {
        (_, true) => format!(
            "honesty metric: no period measured; gcd(a, N) split the {bits}-bit N classically"
        ),
        (Some(r), false) => format!(
            "honesty metric: period found r = {r} ({} bit(s)) for a {bits}-bit N; \
             the period length, not the size of N, measures what was demonstrated",
            64 - r.leading_zeros()
        ),
        (None, false) => {
            format!("honesty metric: no period found in {attempts} attempt(s) for a {bits}-bit N")
        }
    }
}

fn sorted_pair((a, b): (BigUint, BigUint)) -> (BigUint, BigUint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn finish_report(
    n: &BigUint,
    mode: Mode,
    opts: &RunOptions,
    readout_bits: u32,
    outcome: LoopOutcome,
) -> FactorReport {
    FactorReport {
        n: n.clone(),
        honesty_note: honesty_note(n, outcome.period, outcome.lucky_gcd, outcome.attempts),
        factors: outcome.factors.map(sorted_pair),
        base_used: outcome.base,
        period_found: outcome.period,
        attempts: outcome.attempts,
        mode,
        readout_bits,
        qubit_budget: zalka_qubit_count(n),
        seed: opts.seed,
        lucky_gcd: outcome.lucky_gcd,
    }
}

pub(crate) struct LoopOutcome {
    pub base: BigUint,
    pub factors: Option<(BigUint, BigUint)>,
    pub period: Option<u64>,
    pub attempts: u32,
    pub lucky_gcd: bool,
}

/// One quantum attempt with a fixed base: simulate `circuit`, then decide.
pub fn simulated_attempt(
    circuit: &Circuit,
    a: &BigUint,
    n: &BigUint,
    run_seed: u64,
) -> Result<(BigUint, ReadoutDecision)> {
    let y = run_circuit(circuit, run_seed)?.y;
    let s_pow = readout_modulus(circuit.num_readout_bits);
    let decision = decide_readout(&y, &s_pow, a, n)?;
    Ok((y, decision))
}

/// Runs the whole algorithm in the given mode, retrying up to
/// `opts.max_attempts` times.
pub fn run_full_algorithm(sp: &Semiprime, mode: Mode, opts: &RunOptions) -> Result<FactorReport> {
    if opts.max_attempts == 0 {
        return Err(Error::domain("max_attempts must be at least 1"));
    }
    match mode {
        Mode::HonestRandomBase => run_honest(sp, opts),
        Mode::CompiledCrt => run_compiled(sp, opts),
        Mode::Coin => {
            let (_, report) =
                coinlab::coin_factor_demo(sp, u64::from(opts.max_attempts), opts.seed)?;
            Ok(report)
        }
    }
}

fn run_honest(sp: &Semiprime, opts: &RunOptions) -> Result<FactorReport> {
    let n = sp.n();
    if *n > BigUint::from(MAX_DISTRIBUTION_MODULUS) {
        return Err(Error::RefusedTooLarge(format!(
            "honest mode simulates the full period; N must be at most 2^16, got {} bits",
            n.bits()
        )));
    }
    if is_probable_prime(n) {
        return Err(Error::domain(format!("{n} is prime")));
    }
    let s = opts.s_override.unwrap_or_else(|| default_readout_bits(n));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let low = BigUint::from(2u32);
    let high = n - 1u32; // exclusive: a in [2, n - 2]
    let mut outcome = LoopOutcome {
        base: BigUint::zero(),
        factors: None,
        period: None,
        attempts: 0,
        lucky_gcd: false,
    };
    while outcome.attempts < opts.max_attempts {
        outcome.attempts += 1;
        let a = rng.gen_biguint_range(&low, &high);
        let run_seed: u64 = rng.gen();
        outcome.base = a.clone();
        let g = gcd(&a, n);
        if !g.is_one() {
            let other = n / &g;
            outcome.factors = Some((g, other));
            outcome.lucky_gcd = true;
            break;
        }
        let circuit = build_semiclassical_stages(&a, n, s)?;
        let (_, decision) = simulated_attempt(&circuit, &a, n, run_seed)?;
        if let (Some(c), Some(f)) = (decision.candidate, decision.factors) {
            outcome.period = Some(c.r);
            outcome.factors = Some(f);
            break;
        }
    }
    Ok(finish_report(n, Mode::HonestRandomBase, opts, s, outcome))
}

fn run_compiled(sp: &Semiprime, opts: &RunOptions) -> Result<FactorReport> {
    let n = sp.n();
    let base = find_period2_base(sp)?;
    let s = opts.s_override.unwrap_or(1);
    let circuit = if s == 1 {
        build_compiled_circuit(&base)?
    } else {
        build_semiclassical_stages(&base.a, n, s)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut outcome = LoopOutcome {
        base: base.a.clone(),
        factors: None,
        period: None,
        attempts: 0,
        lucky_gcd: false,
    };
    while outcome.attempts < opts.max_attempts {
        outcome.attempts += 1;
        let (_, decision) = simulated_attempt(&circuit, &base.a, n, rng.gen())?;
        if let (Some(c), Some(f)) = (decision.candidate, decision.factors) {
            outcome.period = Some(c.r);
            outcome.factors = Some(f);
            break;
        }
    }
    Ok(finish_report(n, Mode::CompiledCrt, opts, s, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::multiplicative_order;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn pair(x: u64, y: u64) -> Option<(BigUint, BigUint)> {
        Some((b(x), b(y)))
    }

    #[test]
    fn extract_period_examples() {
        let c = extract_period(&b(64), &b(256), &b(7), &b(15))
            .unwrap()
            .unwrap();
        assert_eq!((c.r, c.multiple), (4, 1));
        assert!(c.verified);
        assert_eq!(extract_period(&b(0), &b(256), &b(7), &b(15)).unwrap(), None);
        // 7^2 = 49 = 4 (mod 15), so d = 2 fails and 2d = 4 verifies
        assert_eq!(mod_pow(&b(7), &b(2), &b(15)).unwrap(), b(4));
        let c = extract_period(&b(128), &b(256), &b(7), &b(15))
            .unwrap()
            .unwrap();
        assert_eq!((c.r, c.multiple), (4, 2));
        assert_eq!(c.source_convergent.denominator, b(2));
        let c = extract_period(&b(192), &b(256), &b(7), &b(15))
            .unwrap()
            .unwrap();
        assert_eq!((c.r, c.multiple), (4, 1));
        assert!(extract_period(&b(256), &b(256), &b(7), &b(15)).is_err());
    }

    #[test]
    fn derive_factors_examples() {
        assert_eq!(derive_factors(&b(11), 2, &b(15)).unwrap(), pair(5, 3));
        assert_eq!(derive_factors(&b(8), 2, &b(21)).unwrap(), pair(7, 3));
        assert_eq!(derive_factors(&b(14), 2, &b(15)).unwrap(), None);
        assert_eq!(derive_factors(&b(7), 4, &b(15)).unwrap(), pair(3, 5));
        assert!(derive_factors(&b(7), 3, &b(15)).is_err());
        assert!(derive_factors(&b(7), 0, &b(15)).is_err());
        // multiple of the true period: 11^4 = 1, but 11^2 = 1 gives gcd(0, 15)
        assert_eq!(derive_factors(&b(11), 4, &b(15)).unwrap(), None);
    }

    #[test]
    fn odd_period_rescue_examples() {
        assert_eq!(odd_period_rescue(&b(4), 3, &b(21)).unwrap(), pair(7, 3));
        assert_eq!(derive_factors(&b(4), 3, &b(21)).unwrap(), pair(7, 3));
        assert!(matches!(
            odd_period_rescue(&b(7), 4, &b(15)),
            Err(Error::Domain(_))
        ));

        // Oracle search for a non-square base with odd order.
        let mut found = None;
        'search: for n in (15u64..200).step_by(2) {
            for a in 2..n {
                if a.gcd(&n) != 1 || exact_sqrt(&b(a)).is_some() {
                    continue;
                }
                let r = multiplicative_order(&b(a), &b(n)).unwrap();
                if r % 2 == 1 && r > 1 {
                    found = Some((a, r, n));
                    break 'search;
                }
            }
        }
        let (a, r, n) = found.expect("some non-square base has odd order");
        assert_eq!(odd_period_rescue(&b(a), r, &b(n)).unwrap(), None);
    }

    #[test]
    fn compiled_mode_for_15() {
        let sp = Semiprime::with_factors(b(3), b(5)).unwrap();
        let report = run_full_algorithm(&sp, Mode::CompiledCrt, &RunOptions::seeded(3)).unwrap();
        assert_eq!(report.factors, pair(3, 5));
        assert_eq!(report.period_found, Some(2));
        assert_eq!(report.qubit_budget.compiled_qubits, 2);
        assert!(report.honesty_note.contains("r = 2"));
        let again = run_full_algorithm(&sp, Mode::CompiledCrt, &RunOptions::seeded(3)).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn honest_mode_for_15_and_21() {
        for (p, q) in [(3u64, 5u64), (3, 7)] {
            let sp = Semiprime::with_factors(b(p), b(q)).unwrap();
            let report =
                run_full_algorithm(&sp, Mode::HonestRandomBase, &RunOptions::seeded(42)).unwrap();
            assert_eq!(report.factors, pair(p, q));
            assert!(report.attempts <= 20);
            if !report.lucky_gcd {
                assert!(report.period_found.is_some());
            }
        }
    }

    #[test]
    fn honest_mode_guards() {
        let big = Semiprime::new(b(65537 * 3)).unwrap();
        assert!(matches!(
            run_full_algorithm(&big, Mode::HonestRandomBase, &RunOptions::default()),
            Err(Error::RefusedTooLarge(_))
        ));
        let prime = Semiprime::new(b(101)).unwrap();
        assert!(
            run_full_algorithm(&prime, Mode::HonestRandomBase, &RunOptions::default()).is_err()
        );
        let unknown = Semiprime::new(b(15)).unwrap();
        assert_eq!(
            run_full_algorithm(&unknown, Mode::CompiledCrt, &RunOptions::default()),
            Err(Error::CompilationRequiresFactors)
        );
    }

    #[test]
    fn exhausted_attempts_still_produce_a_report() {
        let sp = Semiprime::with_factors(b(3), b(5)).unwrap();
        let opts = RunOptions {
            seed: 0,
            s_override: None,
            max_attempts: 1,
        };
        // find a seed whose single compiled attempt reads y = 0
        let report = (0..64)
            .map(|seed| {
                run_full_algorithm(&sp, Mode::CompiledCrt, &RunOptions { seed, ..opts }).unwrap()
            })
            .find(|r| !r.succeeded())
            .expect("half of all seeds read y = 0");
        assert_eq!(report.attempts, 1);
        assert_eq!(report.period_found, None);
        assert!(report.honesty_note.contains("no period found"));
    }

    #[test]
    fn mode_parsing_and_report_json() {
        assert_eq!("honest".parse::<Mode>().unwrap(), Mode::HonestRandomBase);
        assert_eq!("compiled-crt".parse::<Mode>().unwrap(), Mode::CompiledCrt);
        assert!("quantum".parse::<Mode>().is_err());
        let sp = Semiprime::with_factors(b(3), b(7)).unwrap();
        let report = run_full_algorithm(&sp, Mode::CompiledCrt, &RunOptions::seeded(1)).unwrap();
        let back: FactorReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert!(report.render_human().starts_with(">>> honesty metric"));
    }
}
