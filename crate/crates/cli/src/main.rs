//! `shor`: command-line front end for the shor-core library.
//!
//! Every command writes JSON to stdout by default (`--format text` for a
//! human-readable rendering). Failures print `{"error": {"kind", "message"}}`
//! on stdout and a one-line diagnostic on stderr.
//!
//! Exit codes: 0 success, 2 usage or invalid input, 3 verification failure,
//! 4 resource guard refusal.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;
use shor_core::coinlab::plot_text;
use shor_core::decimal::parse_decimal;
use shor_core::fixtures::{resolve_fixture, SupplementaryFixture, FIXTURE_DIR_ENV};
use shor_core::{
    build_compiled_circuit, build_semiclassical_stages, coin_factor_demo, find_period2_base,
    find_period2_bases, output_distribution, run_circuit, run_full_algorithm, zalka_qubit_count,
    Circuit, Error, Mode, RunOptions, Semiprime,
};

const EXIT_USAGE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_REFUSED: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "shor",
    version,
    about = "Shor's algorithm: honest simulation and the compiled period-2 variant"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Both nontrivial square roots of 1 modulo p q, with periods and CRT signs.
    CompileBase {
        #[arg(long, value_parser = decimal)]
        p: BigUint,
        #[arg(long, value_parser = decimal)]
        q: BigUint,
    },
    /// Print a circuit's gate list.
    Circuit(CircuitArgs),
    /// Run a circuit once and print the readout y.
    Simulate {
        #[command(flatten)]
        circuit: CircuitArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact readout distribution of a circuit.
    Dist(CircuitArgs),
    /// Factor N end to end.
    Factor {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = ModeArg::Honest)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Readout bits; defaults to 2 log2 N (honest) or 1 (compiled).
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = shor_core::postprocess::DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u32,
    },
    /// Qubit budget for factoring N.
    Qubits {
        #[arg(long, value_parser = decimal)]
        n: BigUint,
    },
    /// Check a supplementary fixture: p q = N, a^2 = 1 mod N, gcds give p and q.
    VerifySupplementary {
        /// Fixture name or directory path.
        #[arg(long)]
        fixture: String,
        #[arg(long, env = FIXTURE_DIR_ENV)]
        fixture_dir: Option<PathBuf>,
    },
    /// Replace the compiled circuit by coin tosses.
    CoinDemo {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10)]
        tosses: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long, value_parser = decimal)]
    n: Option<BigUint>,
    #[arg(long, value_parser = decimal, requires = "q")]
    p: Option<BigUint>,
    #[arg(long, value_parser = decimal, requires = "p")]
    q: Option<BigUint>,
}

/// A circuit is read from a file, built from `--a --n --s`, or compiled from
/// `--p --q`.
#[derive(Args, Debug)]
struct CircuitArgs {
    /// Circuit file in the text or JSON format.
    #[arg(long, conflicts_with_all = ["a", "n", "p", "q"])]
    input: Option<PathBuf>,
    #[arg(long, value_parser = decimal, requires = "n", conflicts_with_all = ["p", "q"])]
    a: Option<BigUint>,
    #[arg(long, value_parser = decimal)]
    n: Option<BigUint>,
    #[arg(long, requires = "a")]
    s: Option<u32>,
    #[arg(long, value_parser = decimal, requires = "q")]
    p: Option<BigUint>,
    #[arg(long, value_parser = decimal, requires = "p")]
    q: Option<BigUint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Honest,
    Compiled,
    Coin,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Honest => Mode::HonestRandomBase,
            ModeArg::Compiled => Mode::CompiledCrt,
            ModeArg::Coin => Mode::Coin,
        }
    }
}

fn decimal(text: &str) -> Result<BigUint, String> {
    parse_decimal(text).map_err(|e| e.to_string())
}

enum Failure {
    Core(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

impl Target {
    fn semiprime(&self) -> shor_core::Result<Semiprime> {
        match (&self.n, &self.p, &self.q) {
            (Some(n), Some(p), Some(q)) => Semiprime::from_parts(n.clone(), p.clone(), q.clone()),
            (None, Some(p), Some(q)) => Semiprime::with_factors(p.clone(), q.clone()),
            (Some(n), None, None) => Semiprime::new(n.clone()),
            _ => Err(Error::Parse("give --n, or --p and --q".into())),
        }
    }
}

impl CircuitArgs {
    fn circuit(&self) -> shor_core::Result<Circuit> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            return if text.trim_start().starts_with('{') {
                Circuit::from_json(&text)
            } else {
                Circuit::from_text(&text)
            };
        }
        match (&self.a, &self.n, &self.p, &self.q) {
            (Some(a), Some(n), None, None) => build_semiclassical_stages(a, n, self.s.unwrap_or(8)),
            (None, n, Some(p), Some(q)) => {
                let sp = match n {
                    Some(n) => Semiprime::from_parts(n.clone(), p.clone(), q.clone())?,
                    None => Semiprime::with_factors(p.clone(), q.clone())?,
                };
                build_compiled_circuit(&find_period2_base(&sp)?)
            }
            _ => Err(Error::Parse(
                "give --input, --a --n [--s], or --p --q".into(),
            )),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn run(cli: &Cli) -> Outcome {
    let text = cli.format == Format::Text;
    Ok(match &cli.command {
        Command::CompileBase { p, q } => {
            let sp = Semiprime::with_factors(p.clone(), q.clone())?;
            let bases = find_period2_bases(&sp)?;
            if text {
                let mut out = format!("N = {}\n", sp.n());
                for base in &bases {
                    let (sp_sign, sq_sign) = base.sign_choice;
                    out.push_str(&format!(
                        "a = {} period {} signs ({sp_sign}, {sq_sign})\n",
                        base.a, base.period
                    ));
                }
                out
            } else {
                to_json(&json!({ "n": sp.n().to_string(), "bases": bases }))
            }
        }
        Command::Circuit(args) => {
            let circuit = args.circuit()?;
            if text {
                circuit.to_text()
            } else {
                circuit.to_json()
            }
        }
        Command::Simulate { circuit, seed } => {
            let outcome = run_circuit(&circuit.circuit()?, *seed)?;
            if text {
                format!("y = {}\n", outcome.y)
            } else {
                to_json(&outcome)
            }
        }
        Command::Dist(args) => {
            let dist = output_distribution(&args.circuit()?)?;
            if text {
                dist.to_text()
            } else {
                dist.to_json()
            }
        }
        Command::Factor {
            target,
            mode,
            seed,
            s,
            max_attempts,
        } => {
            let opts = RunOptions {
                seed: *seed,
                s_override: *s,
                max_attempts: *max_attempts,
            };
            let report = run_full_algorithm(&target.semiprime()?, (*mode).into(), &opts)?;
            if text {
                report.render_human()
            } else {
                report.to_json()
            }
        }
        Command::Qubits { n } => {
            let budget = zalka_qubit_count(n);
            if text {
                format!(
                    "N bits = {}\nzalka = {}\ncompiled = {}\n",
                    budget.n_bits, budget.zalka_qubits, budget.compiled_qubits
                )
            } else {
                to_json(&budget)
            }
        }
        Command::VerifySupplementary {
            fixture,
            fixture_dir,
        } => {
            let dir = resolve_fixture(fixture, fixture_dir.as_deref())?;
            let verification = SupplementaryFixture::load(&dir)?.verify();
            let out = if text {
                let status = if verification.ok { "OK" } else { "FAILED" };
                let mut out = format!(
                    "{status}: {} ({}-bit N), p q = N: {}\n",
                    verification.name, verification.n_bits, verification.product_matches
                );
                for (i, base) in verification.bases.iter().enumerate() {
                    out.push_str(&format!(
                        "base {}: a^2 = 1 mod N: {}, gcds reproduce p, q: {}\n",
                        i + 1,
                        base.squares_to_one,
                        base.reproduces_factors
                    ));
                }
                out
            } else {
                to_json(&verification)
            };
            if !verification.ok {
                print!("{}", with_newline(out));
                return Err(Failure::Verification(format!(
                    "fixture {} failed verification",
                    verification.name
                )));
            }
            out
        }
        Command::CoinDemo {
            target,
            tosses,
            seed,
        } => {
            let (run, report) = coin_factor_demo(&target.semiprime()?, *tosses, *seed)?;
            if text {
                format!(
                    "{}{}",
                    plot_text(std::slice::from_ref(&run)),
                    report.render_human()
                )
            } else {
                to_json(&json!({ "coin_run": run, "report": report }))
            }
        }
    })
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn error_object(kind: &str, message: &str) -> String {
    to_json(&json!({ "error": { "kind": kind, "message": message } }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("usage error");
            println!(
                "{}",
                error_object("usage", first.trim_start_matches("error: "))
            );
            eprint!("{message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", with_newline(out));
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(message)) => {
            eprintln!("shor: {message}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(Failure::Core(e)) => {
            let message = e.to_string();
            println!("{}", error_object(e.kind(), &message));
            eprintln!("shor: {message}");
            match e {
                Error::RefusedTooLarge(_) => ExitCode::from(EXIT_REFUSED),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
