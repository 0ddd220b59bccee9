//! Shor's factoring algorithm at desk scale.
//!
//! Two routes through the same pipeline:
//!
//! * the honest route picks a random base, builds the qubit-recycled
//!   (semiclassical Fourier transform) circuit and simulates it exactly;
//! * the compiled route uses the known factors to pick a base of period 2
//!   via the Chinese remainder theorem, which collapses the circuit to two
//!   qubits for any semiprime, however large.
//!
//! Every [`FactorReport`] records the period that was actually found next to
//! the size of `N`, since the period is what measures the quantum work done.

pub mod coinlab;
pub mod compiler;
pub mod decimal;
pub mod error;
pub mod fixtures;
pub mod numtheory;
pub mod postprocess;
pub mod simulator;
#[cfg(test)]
mod testutil;

pub use coinlab::{coin_factor_demo, toss_series, CoinRun};
pub use compiler::{
    build_compiled_circuit, build_semiclassical_stages, default_readout_bits, find_period2_base,
    find_period2_bases, zalka_qubit_count, Circuit, Gate, QubitBudget,
};
pub use error::{Error, Result};
pub use numtheory::{CompiledBase, Convergent, Semiprime, Sign};
pub use postprocess::{
    derive_factors, extract_period, odd_period_rescue, run_full_algorithm, FactorReport, Mode,
    PeriodCandidate, RunOptions,
};
pub use simulator::{
    dft_oracle_distribution, output_distribution, run_circuit, OutcomeDistribution,
};
