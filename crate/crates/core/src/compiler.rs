//! Circuit construction: the two-qubit compiled circuit for period-2 bases,
//! the qubit-recycled semiclassical circuit for arbitrary bases, and qubit
//! budgets.
//!
//! # Readout convention
//!
//! A semiclassical circuit with `s` readout bits has `s` stages. Stage `k`
//! (1-based) prepares the control qubit in `|+>`, applies
//! `U^(2^(s-k))` controlled on it, rotates by the feedback phase
//! `phi_k = -pi * sum_{i<k-1} c_i / 2^(k-1-i)` over the classical bits
//! `c_0..c_{k-2}` measured so far, applies a Hadamard and measures into
//! classical bit `k-1`. The readout is `y = sum_i c_i 2^i`, least-significant
//! bit first. Stage 1 has no feedback and uses a plain Hadamard.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{
    gcd, multiplicative_order, nontrivial_sqrt1_solutions, CompiledBase, Semiprime,
    ORDER_SCAN_LIMIT,
};

/// Upper bound on readout bits for a single circuit.
pub const MAX_READOUT_BITS: u32 = 1 << 16;

/// Qubits acted on are implicit: every gate except `ControlledModMul` acts on
/// the single recycled control qubit, and `ControlledModMul` additionally
/// acts on the work register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    PreparePlus,
    Hadamard,
    /// `|c>|w> -> |c>|multiplier^c * w mod modulus>`.
    ControlledModMul {
        #[serde(with = "crate::decimal")]
        multiplier: BigUint,
        #[serde(with = "crate::decimal")]
        modulus: BigUint,
    },
    /// `diag(1, e^{i phi})` followed by a Hadamard, where `phi` is the feedback
    /// phase of the given 1-based stage.
    PhaseThenHadamard {
        stage: usize,
    },
    Measure {
        bit: usize,
    },
}

impl Gate {
    /// A controlled modular multiplication; the multiplier must be a unit mod
    /// `modulus` so that the gate is a permutation.
    pub fn controlled_mod_mul(multiplier: BigUint, modulus: BigUint) -> Result<Gate> {
        check_mod_mul(&multiplier, &modulus)?;
        Ok(Gate::ControlledModMul {
            multiplier,
            modulus,
        })
    }

    /// Feedback phase for `stage` given the classical bits measured so far.
    pub fn feedback_phase(stage: usize, bits: &[bool]) -> f64 {
        let mut phase = 0.0;
        for (i, &bit) in bits.iter().enumerate().take(stage.saturating_sub(1)) {
            if bit {
                phase -= std::f64::consts::PI / 2f64.powi((stage - 1 - i) as i32);
            }
        }
        phase
    }
}

fn check_mod_mul(multiplier: &BigUint, modulus: &BigUint) -> Result<()> {
    if *modulus < BigUint::from(2u32) {
        return Err(Error::MalformedCircuit(format!(
            "modulus {modulus} below 2"
        )));
    }
    if multiplier >= modulus {
        return Err(Error::MalformedCircuit(format!(
            "multiplier {multiplier} not reduced modulo {modulus}"
        )));
    }
    if !gcd(multiplier, modulus).is_one() {
        return Err(Error::MalformedCircuit(format!(
            "multiplier {multiplier} shares a factor with {modulus}; the gate would not be unitary"
        )));
    }
    Ok(())
}

/// Gate-level circuit over one recycled control qubit and a work register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub num_readout_bits: usize,
    /// Number of distinct work-register values reachable from `1`, when known.
    pub work_register_span: Option<u64>,
}

impl Circuit {
    /// The common modulus of all modular multiplications, if any.
    pub fn modulus(&self) -> Option<&BigUint> {
        self.gates.iter().find_map(|g| match g {
            Gate::ControlledModMul { modulus, .. } => Some(modulus),
            _ => None,
        })
    }

    /// Checks the stage structure `PREP+ CMODMUL* (H | VH) MEAS`, sequential
    /// measurement bits, feedback referencing only earlier bits, and
    /// unitarity of every modular multiplication.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedCircuit(msg));
        if self.gates.is_empty() {
            return bad("empty circuit".into());
        }
        #[derive(PartialEq)]
        enum Phase {
            Idle,
            Prepared,
            Rotated,
        }
        let mut phase = Phase::Idle;
        let mut measured = 0usize;
        let mut modulus: Option<&BigUint> = None;
        for (idx, gate) in self.gates.iter().enumerate() {
            match gate {
                Gate::PreparePlus => {
                    if phase != Phase::Idle {
                        return bad(format!(
                            "gate {idx}: PREP+ before the previous stage was measured"
                        ));
                    }
                    phase = Phase::Prepared;
                }
                Gate::ControlledModMul {
                    multiplier,
                    modulus: m,
                } => {
                    if phase != Phase::Prepared {
                        return bad(format!(
                            "gate {idx}: CMODMUL outside the controlled section"
                        ));
                    }
                    check_mod_mul(multiplier, m)?;
                    match modulus {
                        Some(prev) if prev != m => {
                            return bad(format!("gate {idx}: modulus {m} differs from {prev}"))
                        }
                        _ => modulus = Some(m),
                    }
                }
                Gate::Hadamard | Gate::PhaseThenHadamard { .. } => {
                    if phase != Phase::Prepared {
                        return bad(format!(
                            "gate {idx}: readout rotation without a prepared control"
                        ));
                    }
                    if let Gate::PhaseThenHadamard { stage } = gate {
                        if *stage < 2 || *stage != measured + 1 {
                            return bad(format!(
                                "gate {idx}: VH {stage} must use exactly the {measured} earlier bits"
                            ));
                        }
                    }
                    phase = Phase::Rotated;
                }
                Gate::Measure { bit } => {
                    if phase != Phase::Rotated {
                        return bad(format!("gate {idx}: MEAS without a readout rotation"));
                    }
                    if *bit != measured {
                        return bad(format!(
                            "gate {idx}: MEAS {bit} out of order, expected {measured}"
                        ));
                    }
                    measured += 1;
                    phase = Phase::Idle;
                }
            }
        }
        if phase != Phase::Idle {
            return bad("final stage is not measured".into());
        }
        if measured != self.num_readout_bits {
            return bad(format!(
                "{measured} measurements but num_readout_bits = {}",
                self.num_readout_bits
            ));
        }
        if self.work_register_span == Some(0) {
            return bad("work_register_span must be positive".into());
        }
        Ok(())
    }

    /// Line-oriented text form: a header comment, then one gate per line.
    pub fn to_text(&self) -> String {
        let span = self
            .work_register_span
            .map_or_else(|| "unknown".to_string(), |w| w.to_string());
        let mut out = format!(
            "# readout_bits={} work_span={}\n",
            self.num_readout_bits, span
        );
        for gate in &self.gates {
            match gate {
                Gate::PreparePlus => out.push_str("PREP+\n"),
                Gate::Hadamard => out.push_str("H\n"),
                Gate::ControlledModMul {
                    multiplier,
                    modulus,
                } => {
                    let _ = writeln!(out, "CMODMUL {multiplier} {modulus}");
                }
                Gate::PhaseThenHadamard { stage } => {
                    let _ = writeln!(out, "VH {stage}");
                }
                Gate::Measure { bit } => {
                    let _ = writeln!(out, "MEAS {bit}");
                }
            }
        }
        out
    }

    /// Parses [`Circuit::to_text`] output. Without a header, the readout width
    /// is the number of measurements and the span is unknown.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut gates = Vec::new();
        let mut header_bits: Option<usize> = None;
        let mut span: Option<u64> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    match field.split_once('=') {
                        Some(("readout_bits", v)) => {
                            header_bits = Some(parse_usize(v, lineno)?);
                        }
                        Some(("work_span", "unknown")) => span = None,
                        Some(("work_span", v)) => {
                            span = Some(v.parse().map_err(|_| {
                                Error::Parse(format!("line {}: bad work_span {v:?}", lineno + 1))
                            })?)
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap_or_default();
            let args: Vec<&str> = parts.collect();
            let want = |n: usize| -> Result<()> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(Error::Parse(format!(
                        "line {}: {op} takes {n} argument(s)",
                        lineno + 1
                    )))
                }
            };
            let gate = match op {
                "PREP+" => {
                    want(0)?;
                    Gate::PreparePlus
                }
                "H" => {
                    want(0)?;
                    Gate::Hadamard
                }
                "CMODMUL" => {
                    want(2)?;
                    Gate::ControlledModMul {
                        multiplier: crate::decimal::parse_decimal(args[0])?,
                        modulus: crate::decimal::parse_decimal(args[1])?,
                    }
                }
                "VH" => {
                    want(1)?;
                    Gate::PhaseThenHadamard {
                        stage: parse_usize(args[0], lineno)?,
                    }
                }
                "MEAS" => {
                    want(1)?;
                    Gate::Measure {
                        bit: parse_usize(args[0], lineno)?,
                    }
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown gate {other:?}",
                        lineno + 1
                    )))
                }
            };
            gates.push(gate);
        }
        let measured = gates
            .iter()
            .filter(|g| matches!(g, Gate::Measure { .. }))
            .count();
        let circuit = Circuit {
            gates,
            num_readout_bits: header_bits.unwrap_or(measured),
            work_register_span: span,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let circuit: Circuit =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        circuit.validate()?;
        Ok(circuit)
    }
}

fn parse_usize(v: &str, lineno: usize) -> Result<usize> {
    v.parse().map_err(|_| {
        Error::Parse(format!(
            "line {}: expected an integer, got {v:?}",
            lineno + 1
        ))
    })
}

/// Qubit requirements for factoring `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitBudget {
    pub n_bits: u64,
    /// `2 + ceil(3 * n_bits / 2)` for the optimized uncompiled algorithm.
    pub zalka_qubits: u64,
    /// Always 2: one control, one work qubit holding the orbit `{1, a}`.
    pub compiled_qubits: u64,
}

pub fn zalka_qubit_count(n: &BigUint) -> QubitBudget {
    let n_bits = n.bits();
    QubitBudget {
        n_bits,
        zalka_qubits: 2 + (3 * n_bits).div_ceil(2),
        compiled_qubits: 2,
    }
}

/// Smallest `s` with `2^s >= n^2`; then `n^2 <= 2^s < 2 n^2`.
pub fn default_readout_bits(n: &BigUint) -> u32 {
    let square = n * n;
    let below: BigUint = square - 1u32;
    below.bits().max(1) as u32
}

/// Both period-2 bases of a semiprime with known factors, smaller first.
pub fn find_period2_bases(sp: &Semiprime) -> Result<[CompiledBase; 2]> {
    let (p, q) = sp.factors().ok_or(Error::CompilationRequiresFactors)?;
    let [lo, hi] = nontrivial_sqrt1_solutions(p, q)?;
    Ok([
        CompiledBase::from_solution(sp.n(), lo),
        CompiledBase::from_solution(sp.n(), hi),
    ])
}

/// The smaller period-2 base. Needs the factors: this is where the answer is
/// handed to the "compiler".
pub fn find_period2_base(sp: &Semiprime) -> Result<CompiledBase> {
    let [lo, _] = find_period2_bases(sp)?;
    Ok(lo)
}

/// Prepare, controlled multiply-by-`a` (a CNOT on the orbit `{1, a}`),
/// Hadamard, measure.
pub fn build_compiled_circuit(base: &CompiledBase) -> Result<Circuit> {
    if base.period != 2 {
        return Err(Error::NotCompilable(base.period));
    }
    if !base.is_valid() {
        return Err(Error::domain(format!(
            "{} is not a nontrivial square root of 1 modulo {}",
            base.a, base.n
        )));
    }
    Ok(Circuit {
        gates: vec![
            Gate::PreparePlus,
            Gate::controlled_mod_mul(base.a.clone(), base.n.clone())?,
            Gate::Hadamard,
            Gate::Measure { bit: 0 },
        ],
        num_readout_bits: 1,
        work_register_span: Some(2),
    })
}

/// The qubit-recycled circuit with `s` readout stages (see the module docs
/// for the bit order and feedback convention).
pub fn build_semiclassical_stages(a: &BigUint, n: &BigUint, s: u32) -> Result<Circuit> {
    if *n < BigUint::from(3u32) {
        return Err(Error::domain("modulus must be at least 3"));
    }
    if s == 0 || s > MAX_READOUT_BITS {
        return Err(Error::domain(format!(
            "readout bits must be in 1..={MAX_READOUT_BITS}, got {s}"
        )));
    }
    let a = a % n;
    let g = gcd(&a, n);
    if !g.is_one() {
        return Err(Error::domain(format!(
            "gcd({a}, {n}) = {g}; the classical shortcut already yields a factor"
        )));
    }
    // powers[t] = a^(2^t) mod n
    let mut powers = Vec::with_capacity(s as usize);
    let mut x = a.clone();
    for _ in 0..s {
        powers.push(x.clone());
        x = &x * &x % n;
    }
    let mut gates = Vec::with_capacity(4 * s as usize);
    for k in 1..=s as usize {
        gates.push(Gate::PreparePlus);
        gates.push(Gate::controlled_mod_mul(
            powers[s as usize - k].clone(),
            n.clone(),
        )?);
        gates.push(if k == 1 {
            Gate::Hadamard
        } else {
            Gate::PhaseThenHadamard { stage: k }
        });
        gates.push(Gate::Measure { bit: k - 1 });
    }
    let span = if *n < BigUint::from(ORDER_SCAN_LIMIT) {
        let r = multiplicative_order(&a, n)?;
        // x ranges over [0, 2^s), so at most 2^s orbit points are reached
        Some(if s < 64 { r.min(1 << s) } else { r })
    } else {
        None
    };
    Ok(Circuit {
        gates,
        num_readout_bits: s as usize,
        work_register_span: span,
    })
}

/// `S = 2^s` for a circuit with `s` readout bits.
pub fn readout_modulus(num_readout_bits: usize) -> BigUint {
    BigUint::one() << num_readout_bits
}
