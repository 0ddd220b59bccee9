//! Exact state-vector execution of [`Circuit`]s.
//!
//! The state is one control qubit tensored with a work register. The work
//! register is indexed by the residues reachable from `1` under the circuit's
//! multipliers (the cyclic orbit `<a>`), not by all `2^ceil(log2 N)` basis
//! states, so a period-2 base needs exactly two work states regardless of the
//! size of `N`.
//!
//! Amplitudes are laid out as `[control = 0 block | control = 1 block]`, each
//! block `span` long, with work index 0 holding residue 1.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::{Circuit, Gate};
use crate::error::{Error, Result};

/// Readout-width guard for exact distributions.
pub const MAX_DISTRIBUTION_BITS: u32 = 20;
/// Modulus guard for exact distributions.
pub const MAX_DISTRIBUTION_MODULUS: u64 = 1 << 16;
/// Largest work-register orbit the simulator will allocate.
pub const MAX_WORK_SPAN: usize = 1 << 20;

/// Branches lighter than this are dropped during exact enumeration; the total
/// dropped mass is below `2^20 * 1e-20`.
const BRANCH_CUTOFF: f64 = 1e-20;

#[derive(Debug, Clone)]
enum Op {
    Prepare,
    Hadamard,
    PhaseHadamard(usize),
    /// `perm[i]` is the work index of `residue_i * multiplier`.
    Multiply(Vec<usize>),
    Measure(usize),
}

/// A validated circuit lowered onto a concrete work-register indexing.
#[derive(Debug, Clone)]
struct Program {
    ops: Vec<Op>,
    span: usize,
    readout_bits: usize,
}

fn lower(circuit: &Circuit) -> Result<Program> {
    circuit.validate()?;
    let mut multipliers: Vec<&BigUint> = Vec::new();
    for g in &circuit.gates {
        if let Gate::ControlledModMul { multiplier, .. } = g {
            if !multipliers.contains(&multiplier) {
                multipliers.push(multiplier);
            }
        }
    }
    let (residues, index) = match circuit.modulus() {
        Some(n) => orbit_of_one(&multipliers, n)?,
        None => (vec![BigUint::one()], HashMap::from([(BigUint::one(), 0)])),
    };
    let n = circuit.modulus();
    let mut perms: HashMap<&BigUint, Vec<usize>> = HashMap::new();
    for &m in &multipliers {
        let n = n.expect("multipliers imply a modulus");
        let perm = residues
            .iter()
            .map(|r| index[&(r * m % n)])
            .collect::<Vec<_>>();
        perms.insert(m, perm);
    }
    let ops = circuit
        .gates
        .iter()
        .map(|g| match g {
            Gate::PreparePlus => Op::Prepare,
            Gate::Hadamard => Op::Hadamard,
            Gate::PhaseThenHadamard { stage } => Op::PhaseHadamard(*stage),
            Gate::ControlledModMul { multiplier, .. } => Op::Multiply(perms[multiplier].clone()),
            Gate::Measure { bit } => Op::Measure(*bit),
        })
        .collect();
    Ok(Program {
        ops,
        span: residues.len(),
        readout_bits: circuit.num_readout_bits,
    })
}

/// Breadth-first closure of `{1}` under multiplication by each multiplier.
fn orbit_of_one(
    multipliers: &[&BigUint],
    n: &BigUint,
) -> Result<(Vec<BigUint>, HashMap<BigUint, usize>)> {
    let one = BigUint::one() % n;
    let mut residues = vec![one.clone()];
    let mut index = HashMap::from([(one, 0usize)]);
    let mut cursor = 0;
    while cursor < residues.len() {
        let r = residues[cursor].clone();
        cursor += 1;
        for &m in multipliers {
            let next = &r * m % n;
            if !index.contains_key(&next) {
                if residues.len() >= MAX_WORK_SPAN {
                    return Err(Error::RefusedTooLarge(format!(
                        "work register orbit exceeds {MAX_WORK_SPAN} states"
                    )));
                }
                index.insert(next.clone(), residues.len());
                residues.push(next);
            }
        }
    }
    Ok((residues, index))
}

/// Control qubit ⊗ work register.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    classical_bits: Vec<bool>,
    seed: u64,
}

impl QuantumState {
    fn new(span: usize, seed: u64) -> Self {
        let mut amplitudes = vec![Complex64::zero(); 2 * span];
        amplitudes[0] = Complex64::one();
        Self {
            amplitudes,
            classical_bits: Vec::new(),
            seed,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn classical_bits(&self) -> &[bool] {
        &self.classical_bits
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn span(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Reduced density matrix of the control qubit (work register traced out).
    pub fn control_density_matrix(&self) -> [[Complex64; 2]; 2] {
        let (zero, one) = self.amplitudes.split_at(self.span());
        let mut rho = [[Complex64::zero(); 2]; 2];
        for (a0, a1) in zero.iter().zip(one) {
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][0] += a1 * a0.conj();
            rho[1][1] += a1 * a1.conj();
        }
        rho
    }

    /// Bloch vector `(x, y, z)` of the control qubit's reduced state.
    pub fn control_bloch_vector(&self) -> [f64; 3] {
        let rho = self.control_density_matrix();
        [
            2.0 * rho[0][1].re,
            -2.0 * rho[0][1].im,
            (rho[0][0] - rho[1][1]).re,
        ]
    }
}

fn apply_prepare(amps: &mut [Complex64]) {
    // The control is in a basis state here, so summing the two blocks
    // recovers the work register.
    let span = amps.len() / 2;
    let (zero, one) = amps.split_at_mut(span);
    for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
        let w = (*a0 + *a1) * FRAC_1_SQRT_2;
        *a0 = w;
        *a1 = w;
    }
}

fn apply_hadamard(amps: &mut [Complex64]) {
    let span = amps.len() / 2;
    let (zero, one) = amps.split_at_mut(span);
    for (a0, a1) in zero.iter_mut().zip(one.iter_mut()) {
        let (x, y) = (*a0, *a1);
        *a0 = (x + y) * FRAC_1_SQRT_2;
        *a1 = (x - y) * FRAC_1_SQRT_2;
    }
}

fn apply_phase(amps: &mut [Complex64], phase: f64) {
    let span = amps.len() / 2;
    let rot = Complex64::from_polar(1.0, phase);
    for a1 in &mut amps[span..] {
        *a1 *= rot;
    }
}

fn apply_multiply(amps: &mut [Complex64], perm: &[usize], scratch: &mut Vec<Complex64>) {
    let span = amps.len() / 2;
    let one = &mut amps[span..];
    scratch.clear();
    scratch.resize(span, Complex64::zero());
    for (i, &to) in perm.iter().enumerate() {
        scratch[to] = one[i];
    }
    one.copy_from_slice(scratch);
}

/// Zeroes the block inconsistent with `outcome`.
fn project(amps: &mut [Complex64], outcome: bool) {
    let span = amps.len() / 2;
    let range = if outcome { 0..span } else { span..2 * span };
    for a in &mut amps[range] {
        *a = Complex64::zero();
    }
}

fn prob_one(amps: &[Complex64]) -> f64 {
    let span = amps.len() / 2;
    amps[span..].iter().map(|a| a.norm_sqr()).sum()
}

fn readout_from_bits(bits: &[bool]) -> BigUint {
    let mut y = BigUint::zero();
    for (i, &bit) in bits.iter().enumerate() {
        if bit {
            y.set_bit(i as u64, true);
        }
    }
    y
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub bit: usize,
    pub value: bool,
    /// Probability of outcome 1 just before this measurement.
    pub prob_one: f64,
}

/// Summary of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub seed: u64,
    pub work_span: usize,
    pub gates_applied: usize,
    /// Largest `|sum |amp|^2 - 1|` observed after any gate.
    pub max_norm_deviation: f64,
    pub measurements: Vec<MeasurementRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    #[serde(with = "crate::decimal")]
    pub y: BigUint,
    pub trace: RunTrace,
}

/// Gate-by-gate simulation with sampled measurements.
#[derive(Debug, Clone)]
pub struct Simulator {
    program: Program,
    state: QuantumState,
    rng: ChaCha8Rng,
    pc: usize,
    scratch: Vec<Complex64>,
    trace: RunTrace,
}

impl Simulator {
    /// Validates and lowers `circuit`; the work register starts at residue 1
    /// and the control at `|0>`.
    pub fn new(circuit: &Circuit, seed: u64) -> Result<Self> {
        let program = lower(circuit)?;
        let span = program.span;
        Ok(Self {
            state: QuantumState::new(span, seed),
            rng: ChaCha8Rng::seed_from_u64(seed),
            pc: 0,
            scratch: Vec::with_capacity(span),
            trace: RunTrace {
                seed,
                work_span: span,
                gates_applied: 0,
                max_norm_deviation: 0.0,
                measurements: Vec::new(),
            },
            program,
        })
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn is_finished(&self) -> bool {
        self.pc >= self.program.ops.len()
    }

    /// Applies the next gate; returns false when the circuit is exhausted.
    pub fn step(&mut self) -> bool {
        let Some(op) = self.program.ops.get(self.pc) else {
            return false;
        };
        let amps = &mut self.state.amplitudes;
        match op {
            Op::Prepare => apply_prepare(amps),
            Op::Hadamard => apply_hadamard(amps),
            Op::PhaseHadamard(stage) => {
                apply_phase(
                    amps,
                    Gate::feedback_phase(*stage, &self.state.classical_bits),
                );
                apply_hadamard(amps);
            }
            Op::Multiply(perm) => apply_multiply(amps, perm, &mut self.scratch),
            Op::Measure(bit) => {
                let p1 = prob_one(amps).clamp(0.0, 1.0);
                let value = self.rng.gen::<f64>() < p1;
                project(amps, value);
                let p = if value { p1 } else { 1.0 - p1 };
                let scale = 1.0 / p.sqrt();
                for a in amps.iter_mut() {
                    *a *= scale;
                }
                self.state.classical_bits.push(value);
                self.trace.measurements.push(MeasurementRecord {
                    bit: *bit,
                    value,
                    prob_one: p1,
                });
            }
        }
        let dev = (self.state.norm_sqr() - 1.0).abs();
        self.trace.max_norm_deviation = self.trace.max_norm_deviation.max(dev);
        self.trace.gates_applied += 1;
        self.pc += 1;
        true
    }

    pub fn finish(mut self) -> RunOutcome {
        while self.step() {}
        debug_assert_eq!(self.state.classical_bits.len(), self.program.readout_bits);
        RunOutcome {
            y: readout_from_bits(&self.state.classical_bits),
            trace: self.trace,
        }
    }
}

/// Runs `circuit` once, sampling every measurement from a ChaCha8 stream
/// seeded with `seed`.
pub fn run_circuit(circuit: &Circuit, seed: u64) -> Result<RunOutcome> {
    Ok(Simulator::new(circuit, seed)?.finish())
}

/// Probability of each readout `y` in `[0, 2^s)`; absent keys have probability 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub readout_bits: u32,
    pub probabilities: BTreeMap<u64, f64>,
}

impl OutcomeDistribution {
    pub fn probability(&self, y: u64) -> f64 {
        self.probabilities.get(&y).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Outcomes with probability above `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<u64> {
        self.probabilities
            .iter()
            .filter(|(_, &p)| p > threshold)
            .map(|(&y, _)| y)
            .collect()
    }

    pub fn total_variation(&self, other: &OutcomeDistribution) -> f64 {
        let mut keys: Vec<u64> = self.probabilities.keys().copied().collect();
        keys.extend(other.probabilities.keys().copied());
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|y| (self.probability(y) - other.probability(y)).abs())
            .sum::<f64>()
    }

    /// Two whitespace-separated columns, `y probability`, one row per outcome.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for y in 0..1u64 << self.readout_bits {
            out.push_str(&format!("{y} {:.17e}\n", self.probability(y)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("distribution serialization is infallible")
    }
}

fn check_distribution_guard(readout_bits: usize, modulus: Option<&BigUint>) -> Result<()> {
    if readout_bits > MAX_DISTRIBUTION_BITS as usize {
        return Err(Error::RefusedTooLarge(format!(
            "exact distributions need at most {MAX_DISTRIBUTION_BITS} readout bits, got {readout_bits}"
        )));
    }
    if let Some(n) = modulus {
        if *n > BigUint::from(MAX_DISTRIBUTION_MODULUS) {
            return Err(Error::RefusedTooLarge(format!(
                "exact distributions need N <= 2^16, got {} bits",
                n.bits()
            )));
        }
    }
    Ok(())
}

/// Exact readout distribution of `circuit`, summing over every measurement
/// branch with its unnormalized amplitudes.
pub fn output_distribution(circuit: &Circuit) -> Result<OutcomeDistribution> {
    circuit.validate()?;
    check_distribution_guard(circuit.num_readout_bits, circuit.modulus())?;
    let program = lower(circuit)?;
    let mut probabilities = BTreeMap::new();
    let mut scratch = Vec::with_capacity(program.span);
    let mut stack = vec![(
        0usize,
        QuantumState::new(program.span, 0).amplitudes,
        Vec::new(),
    )];
    while let Some((mut pc, mut amps, mut bits)) = stack.pop() {
        loop {
            let Some(op) = program.ops.get(pc) else {
                let y = bits
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
                let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                *probabilities.entry(y).or_insert(0.0) += p;
                break;
            };
            pc += 1;
            match op {
                Op::Prepare => apply_prepare(&mut amps),
                Op::Hadamard => apply_hadamard(&mut amps),
                Op::PhaseHadamard(stage) => {
                    apply_phase(&mut amps, Gate::feedback_phase(*stage, &bits));
                    apply_hadamard(&mut amps);
                }
                Op::Multiply(perm) => apply_multiply(&mut amps, perm, &mut scratch),
                Op::Measure(_) => {
                    let mut branch_one = amps.clone();
                    project(&mut branch_one, true);
                    project(&mut amps, false);
                    if prob_one(&branch_one) > BRANCH_CUTOFF {
                        let mut one_bits = bits.clone();
                        one_bits.push(true);
                        stack.push((pc, branch_one, one_bits));
                    }
                    let p0: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                    if p0 <= BRANCH_CUTOFF {
                        break;
                    }
                    bits.push(false);
                }
            }
        }
    }
    Ok(OutcomeDistribution {
        readout_bits: circuit.num_readout_bits as u32,
        probabilities,
    })
}

/// Reference distribution without qubit recycling: the full `s`-qubit first
/// register in uniform superposition, the map `|x>|1> -> |x>|a^x mod n>`, a
/// dense DFT `|x> -> S^{-1/2} sum_y e^{2 pi i x y / S} |y>`, and the work
/// register traced out. Costs `O(S^2)`.
pub fn dft_oracle_distribution(a: &BigUint, n: &BigUint, s: u32) -> Result<OutcomeDistribution> {
    check_distribution_guard(s as usize, Some(n))?;
    if s == 0 {
        return Err(Error::domain("need at least one readout bit"));
    }
    let n = n
        .to_u64()
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::domain("modulus must be at least 2"))?;
    let a = (a % BigUint::from(n)).to_u64().expect("reduced below n");
    if a.gcd(&n) != 1 {
        return Err(Error::domain(format!("gcd({a}, {n}) != 1")));
    }
    let size = 1usize << s;
    let mut by_work: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut w = 1 % n;
    for x in 0..size {
        by_work.entry(w).or_default().push(x);
        w = w * a % n;
    }
    let twiddle: Vec<Complex64> = (0..size)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / size as f64))
        .collect();
    let norm = 1.0 / size as f64;
    let mut probs = vec![0.0f64; size];
    for xs in by_work.values() {
        for (y, prob) in probs.iter_mut().enumerate() {
            let mut amp = Complex64::zero();
            for &x in xs {
                amp += twiddle[(x * y) & (size - 1)];
            }
            *prob += (amp * norm).norm_sqr();
        }
    }
    Ok(OutcomeDistribution {
        readout_bits: s,
        probabilities: probs
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(y, p)| (y as u64, p))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{build_compiled_circuit, build_semiclassical_stages, find_period2_bases};
    use crate::numtheory::Semiprime;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn compiled_15_11() -> Circuit {
        let sp = Semiprime::with_factors(b(3), b(5)).unwrap();
        build_compiled_circuit(&find_period2_bases(&sp).unwrap()[1]).unwrap()
    }

    #[test]
    fn compiled_distribution_is_a_fair_coin() {
        let d = output_distribution(&compiled_15_11()).unwrap();
        assert!((d.probability(0) - 0.5).abs() < 1e-12);
        assert!((d.probability(1) - 0.5).abs() < 1e-12);
        let oracle = dft_oracle_distribution(&b(11), &b(15), 1).unwrap();
        assert!(d.total_variation(&oracle) < 1e-12);
    }

    #[test]
    fn compiled_runs_only_yield_zero_or_one() {
        let c = compiled_15_11();
        let mut ones = 0;
        for seed in 0..2000 {
            let out = run_circuit(&c, seed).unwrap();
            assert!(out.y <= b(1));
            assert_eq!(out.trace.work_span, 2);
            ones += usize::from(out.y == b(1));
        }
        // 4 sigma around 1000
        assert!((ones as f64 - 1000.0).abs() < 4.0 * (2000.0f64 * 0.25).sqrt());
    }

    #[test]
    fn period_four_comb() {
        let c = build_semiclassical_stages(&b(7), &b(15), 8).unwrap();
        let d = output_distribution(&c).unwrap();
        for y in [0, 64, 128, 192] {
            assert!((d.probability(y) - 0.25).abs() < 1e-12, "y = {y}");
        }
        assert_eq!(d.support(1e-12), vec![0, 64, 128, 192]);
        let oracle = dft_oracle_distribution(&b(7), &b(15), 8).unwrap();
        assert_eq!(oracle.support(1e-12), vec![0, 64, 128, 192]);
        for seed in 0..200 {
            let y = run_circuit(&c, seed).unwrap().y.to_u64().unwrap();
            assert!([0, 64, 128, 192].contains(&y), "seed {seed} gave {y}");
        }
    }

    #[test]
    fn constant_function_puts_all_weight_at_zero() {
        let d = dft_oracle_distribution(&b(1), &b(15), 4).unwrap();
        assert!((d.probability(0) - 1.0).abs() < 1e-12);
        assert!(d.total_mass() - 1.0 < 1e-12);
    }

    #[test]
    fn period_three_matches_oracle() {
        let c = build_semiclassical_stages(&b(4), &b(21), 9).unwrap();
        let d = output_distribution(&c).unwrap();
        let oracle = dft_oracle_distribution(&b(4), &b(21), 9).unwrap();
        assert!(d.total_variation(&oracle) < 1e-9);
        // peaks near multiples of 512/3
        for centre in [0.0f64, 512.0 / 3.0, 1024.0 / 3.0] {
            let y = centre.round() as u64;
            assert!(d.probability(y) > 0.2, "y = {y}: {}", d.probability(y));
        }
    }

    #[test]
    fn shared_factor_multiplier_is_rejected() {
        let c = Circuit {
            gates: vec![
                Gate::PreparePlus,
                Gate::ControlledModMul {
                    multiplier: b(6),
                    modulus: b(15),
                },
                Gate::Hadamard,
                Gate::Measure { bit: 0 },
            ],
            num_readout_bits: 1,
            work_register_span: None,
        };
        assert!(matches!(
            run_circuit(&c, 1),
            Err(Error::MalformedCircuit(_))
        ));
        assert!(matches!(
            output_distribution(&c),
            Err(Error::MalformedCircuit(_))
        ));
    }

    #[test]
    fn guards() {
        let c = build_semiclassical_stages(&b(7), &b(15), 21).unwrap();
        assert!(matches!(
            output_distribution(&c),
            Err(Error::RefusedTooLarge(_))
        ));
        assert!(matches!(
            dft_oracle_distribution(&b(2), &b(65539), 4),
            Err(Error::RefusedTooLarge(_))
        ));
        assert!(dft_oracle_distribution(&b(3), &b(15), 4).is_err());
    }

    #[test]
    fn norm_is_preserved_gate_by_gate() {
        let c = build_semiclassical_stages(&b(2), &b(35), 12).unwrap();
        let mut sim = Simulator::new(&c, 99).unwrap();
        while sim.step() {
            assert!((sim.state().norm_sqr() - 1.0).abs() < 1e-12);
        }
        let out = sim.finish();
        assert!(out.trace.max_norm_deviation < 1e-12);
        assert_eq!(out.trace.measurements.len(), 12);
    }

    #[test]
    fn controlled_multiplication_is_a_permutation_of_order_r() {
        for n in [15u64, 21, 33, 35] {
            for a in (2..n).filter(|a| a.gcd(&n) == 1) {
                let r = crate::numtheory::multiplicative_order(&b(a), &b(n)).unwrap();
                let mut gates = vec![Gate::PreparePlus];
                gates.extend((0..r).map(|_| Gate::ControlledModMul {
                    multiplier: b(a),
                    modulus: b(n),
                }));
                gates.extend([Gate::Hadamard, Gate::Measure { bit: 0 }]);
                let c = Circuit {
                    gates,
                    num_readout_bits: 1,
                    work_register_span: None,
                };
                let mut sim = Simulator::new(&c, 0).unwrap();
                assert!(sim.step());
                let start = sim.state().clone();
                for _ in 0..r {
                    sim.step();
                }
                for (x, y) in sim.state().amplitudes().iter().zip(start.amplitudes()) {
                    assert!((x - y).norm() < 1e-15);
                }
                assert_eq!(sim.state().span() as u64, r);
            }
        }
    }

    #[test]
    fn control_is_maximally_mixed_before_readout() {
        let mut sim = Simulator::new(&compiled_15_11(), 5).unwrap();
        sim.step();
        sim.step();
        let bloch = sim.state().control_bloch_vector();
        let len = bloch.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(len < 1e-12, "{bloch:?}");
        // and the Hadamard leaves it there
        sim.step();
        let bloch = sim.state().control_bloch_vector();
        assert!(bloch.iter().map(|c| c * c).sum::<f64>().sqrt() < 1e-12);
    }

    #[test]
    fn same_seed_same_outcome() {
        let c = build_semiclassical_stages(&b(2), &b(21), 9).unwrap();
        assert_eq!(run_circuit(&c, 17).unwrap(), run_circuit(&c, 17).unwrap());
    }

    #[test]
    fn text_rendering_covers_every_outcome() {
        let d = output_distribution(&compiled_15_11()).unwrap();
        let text = d.to_text();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("0 5.0"));
        let parsed: OutcomeDistribution = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(parsed, d);
    }
}
