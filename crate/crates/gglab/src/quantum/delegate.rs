//! Two-party accounting for a run: Alice keeps every element and ring
//! register, Bob keeps the qubits. Each quantum gate moves the control
//! block (dimension 2tw) from Bob to Alice and back, so it costs
//! ⌈log₂(2tw)⌉ qubits of communication; labeling gates cost only the
//! measured bits, and pure qubit gates are free. The split never changes
//! the unitary algebra, which the runner checks by comparing the delegated
//! final state against a monolithic one amplitude by amplitude.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::ceil_log2;

use super::program::{apply_program_gate, GateCharge, Program, ProgramOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelegationTally {
    pub t: u64,
    pub w: u64,
    pub quantum_gates: u64,
    pub alice_to_bob_qubits: u64,
    pub classical_bits: u64,
}

impl DelegationTally {
    pub fn new(t: u64, w: u64) -> Self {
        assert!(t >= 1 && w >= 1, "gate arity parameters start at one");
        Self { t, w, quantum_gates: 0, alice_to_bob_qubits: 0, classical_bits: 0 }
    }

    /// Qubits exchanged per quantum gate: the control block has dimension
    /// 2tw, rounded up to whole qubits.
    pub fn per_gate_qubits(&self) -> u32 {
        ceil_log2(2 * self.t * self.w)
    }

    pub fn charge_quantum(&mut self) {
        self.quantum_gates += 1;
        self.alice_to_bob_qubits += u64::from(self.per_gate_qubits());
    }

    pub fn charge_classical(&mut self, bits: u32) {
        self.classical_bits += u64::from(bits);
    }

    /// Bits of message the exchanged qubits can carry: 2·Q·log₂(2tw),
    /// unrounded. One factor of two because each qubit crosses twice.
    pub fn communication_bits(&self) -> f64 {
        2.0 * self.quantum_gates as f64 * ((2 * self.t * self.w) as f64).log2()
    }

    /// Compression audit: a protocol this cheap can only succeed often on a
    /// large message space if 2·Q·log₂(2tw) ≥ log₂|M| + log₂ ε̂.
    pub fn audit_slack(&self, log2_message_space: f64, success_rate: f64) -> f64 {
        assert!(success_rate > 0.0, "audit needs a positive success rate");
        self.communication_bits() - log2_message_space - success_rate.log2()
    }
}

/// Runs the program twice, monolithically and under the delegation split,
/// asserts the final states agree exactly, and returns the delegated
/// outcome with its tally.
pub fn delegation_run(program: &Program, t: u64, w: u64, seed: u64) -> (ProgramOutcome, DelegationTally) {
    let monolithic = program.run(&mut ChaCha12Rng::seed_from_u64(seed));

    let mut tally = DelegationTally::new(t, w);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut state = program.initial_state();
    let mut labels = Vec::new();
    let mut quantum_gates = 0;
    let mut classical_bits = 0;
    for gate in &program.gates {
        match apply_program_gate(&mut state, gate, &mut rng, &mut labels) {
            GateCharge::Quantum => {
                tally.charge_quantum();
                quantum_gates += 1;
            }
            GateCharge::ClassicalBits(bits) => {
                tally.charge_classical(bits);
                classical_bits += u64::from(bits);
            }
            GateCharge::Free => {}
        }
    }

    assert_eq!(labels, monolithic.labels, "delegation changed a measurement");
    let drift = state
        .amplitudes()
        .iter()
        .zip(monolithic.state.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    assert!(drift <= 1e-10, "delegated state drifted {drift} from the monolithic run");

    (ProgramOutcome { state, labels, quantum_gates, classical_bits }, tally)
}
