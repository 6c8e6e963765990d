//! JSON program format for the simulator.
//!
//! A program is an object with three fields:
//!
//! ```json
//! {
//!   "registers": [
//!     {"kind": "qubit"},
//!     {"kind": "qudit", "dim": 4},
//!     {"kind": "element", "order": 11},
//!     {"kind": "ring", "modulus": 15}
//!   ],
//!   "initial": [0, 0, 1, 1],
//!   "gates": [
//!     {"gate": "qft", "registers": [0], "inverse": false},
//!     {"gate": "op", "control": 0, "x": 2, "y": 2},
//!     {"gate": "op_value", "control": 0, "x": 2, "value": 5},
//!     {"gate": "prod_add", "control": 0, "x": 3, "y": 3, "z": 3},
//!     {"gate": "test_inv", "control": 0, "x": 3},
//!     {"gate": "label", "qubits": [0], "target": {"kind": "element", "order": 2}}
//!   ]
//! }
//! ```
//!
//! Registers are addressed by their position in `registers`; `initial` gives
//! one starting digit per register. Element and ring gates take register ids
//! for their operands; the `*_value` forms take a classically known operand
//! instead of a register. `label` measures the listed qubits and appends a
//! fresh element or ring register, growing the address space by one.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::ceil_log2;

use super::gates::{
    apply_element_gate, apply_element_gate_classical, apply_inv_add_classical,
    apply_prod_add_classical, apply_ring_gate, classical_label_measure, ElementGate,
    ElementGateKind, RingGate,
};
use super::layout::{RegisterKind, RegisterLayout};
use super::state::QState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegisterSpec {
    Qubit,
    Qudit { dim: u64 },
    Element { order: u64 },
    Ring { modulus: u64 },
}

impl RegisterSpec {
    pub fn kind(self) -> RegisterKind {
        match self {
            RegisterSpec::Qubit => RegisterKind::Qubit,
            RegisterSpec::Qudit { dim } => RegisterKind::Qudit(dim),
            RegisterSpec::Element { order } => RegisterKind::Element(order),
            RegisterSpec::Ring { modulus } => RegisterKind::Ring(modulus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum ProgramGate {
    Op { control: usize, x: usize, y: usize },
    Inv { control: usize, x: usize, y: usize },
    Eq { control: usize, x: usize, y: usize },
    OpValue { control: usize, x: usize, value: u64 },
    InvValue { control: usize, x: usize, value: u64 },
    Add { control: usize, x: usize, y: usize },
    Sub { control: usize, x: usize, y: usize },
    ProdAdd { control: usize, x: usize, y: usize, z: usize },
    InvAdd { control: usize, x: usize, y: usize, z: usize },
    ProdAddValue { control: usize, x: usize, y: usize, value: u64 },
    InvAddValue { control: usize, x: usize, y: usize, value: u64 },
    TestInv { control: usize, x: usize },
    RingEq { control: usize, x: usize, y: usize },
    Qft {
        registers: Vec<usize>,
        #[serde(default)]
        inverse: bool,
    },
    Label { qubits: Vec<usize>, target: RegisterSpec },
}

/// What one gate costs under the delegation protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateCharge {
    Quantum,
    ClassicalBits(u32),
    Free,
}

/// Applies one program gate and reports its delegation charge. Labeling
/// gates consume randomness and push the measured value onto `labels`.
pub fn apply_program_gate(
    state: &mut QState,
    gate: &ProgramGate,
    rng: &mut ChaCha12Rng,
    labels: &mut Vec<u64>,
) -> GateCharge {
    match *gate {
        ProgramGate::Op { control, x, y } => {
            apply_element_gate(state, &ElementGate::basic(ElementGateKind::Op, control, x, y));
            GateCharge::Quantum
        }
        ProgramGate::Inv { control, x, y } => {
            apply_element_gate(state, &ElementGate::basic(ElementGateKind::Inv, control, x, y));
            GateCharge::Quantum
        }
        ProgramGate::Eq { control, x, y } => {
            apply_element_gate(state, &ElementGate::basic(ElementGateKind::Eq, control, x, y));
            GateCharge::Quantum
        }
        ProgramGate::OpValue { control, x, value } => {
            apply_element_gate_classical(state, ElementGateKind::Op, control, x, value);
            GateCharge::Quantum
        }
        ProgramGate::InvValue { control, x, value } => {
            apply_element_gate_classical(state, ElementGateKind::Inv, control, x, value);
            GateCharge::Quantum
        }
        ProgramGate::Add { control, x, y } => {
            apply_ring_gate(state, RingGate::Add { b: control, x, y });
            GateCharge::Quantum
        }
        ProgramGate::Sub { control, x, y } => {
            apply_ring_gate(state, RingGate::Sub { b: control, x, y });
            GateCharge::Quantum
        }
        ProgramGate::ProdAdd { control, x, y, z } => {
            apply_ring_gate(state, RingGate::ProdAdd { b: control, x, y, z });
            GateCharge::Quantum
        }
        ProgramGate::InvAdd { control, x, y, z } => {
            apply_ring_gate(state, RingGate::InvAdd { b: control, x, y, z });
            GateCharge::Quantum
        }
        ProgramGate::ProdAddValue { control, x, y, value } => {
            apply_prod_add_classical(state, control, x, y, value);
            GateCharge::Quantum
        }
        ProgramGate::InvAddValue { control, x, y, value } => {
            apply_inv_add_classical(state, control, x, y, value);
            GateCharge::Quantum
        }
        ProgramGate::TestInv { control, x } => {
            apply_ring_gate(state, RingGate::TestInv { x, c: control });
            GateCharge::Quantum
        }
        ProgramGate::RingEq { control, x, y } => {
            apply_ring_gate(state, RingGate::Eq { b: control, x, y });
            GateCharge::Quantum
        }
        ProgramGate::Qft { ref registers, inverse } => {
            state.apply_qft(registers, inverse);
            GateCharge::Free
        }
        ProgramGate::Label { ref qubits, target } => {
            let value = classical_label_measure(state, qubits, target.kind(), rng);
            labels.push(value);
            let order = target.kind().order().expect("labeling target carries an order");
            GateCharge::ClassicalBits(ceil_log2(order))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub registers: Vec<RegisterSpec>,
    pub initial: Vec<u64>,
    pub gates: Vec<ProgramGate>,
}

#[derive(Clone, Debug)]
pub struct ProgramOutcome {
    pub state: QState,
    pub labels: Vec<u64>,
    pub quantum_gates: u64,
    pub classical_bits: u64,
}

impl Program {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("programs serialize")
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.registers.iter().map(|r| r.kind()).collect())
    }

    pub fn initial_state(&self) -> QState {
        QState::basis(self.layout(), &self.initial)
    }

    pub fn run(&self, rng: &mut ChaCha12Rng) -> ProgramOutcome {
        let mut state = self.initial_state();
        let mut labels = Vec::new();
        let mut quantum_gates = 0;
        let mut classical_bits = 0;
        for gate in &self.gates {
            match apply_program_gate(&mut state, gate, rng, &mut labels) {
                GateCharge::Quantum => quantum_gates += 1,
                GateCharge::ClassicalBits(bits) => classical_bits += u64::from(bits),
                GateCharge::Free => {}
            }
        }
        ProgramOutcome { state, labels, quantum_gates, classical_bits }
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn json_round_trips() {
        let program = Program {
            registers: vec![
                RegisterSpec::Qubit,
                RegisterSpec::Element { order: 11 },
                RegisterSpec::Ring { modulus: 15 },
            ],
            initial: vec![1, 3, 2],
            gates: vec![
                ProgramGate::Qft { registers: vec![0], inverse: false },
                ProgramGate::OpValue { control: 0, x: 1, value: 9 },
                ProgramGate::Label { qubits: vec![0], target: RegisterSpec::Element { order: 2 } },
            ],
        };
        let text = program.to_json();
        assert_eq!(Program::from_json(&text).unwrap(), program);
    }

    #[test]
    fn documented_field_names_parse() {
        let text = r#"{
            "registers": [
                {"kind": "qubit"},
                {"kind": "element", "order": 5},
                {"kind": "element", "order": 5}
            ],
            "initial": [1, 2, 3],
            "gates": [{"gate": "op", "control": 0, "x": 1, "y": 2}]
        }"#;
        let program = Program::from_json(text).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let outcome = program.run(&mut rng);
        assert_eq!(outcome.quantum_gates, 1);
        let amp = outcome.state.amplitude(&[1, 0, 3]);
        assert!((amp - Complex64::ONE).norm() <= 1e-10);
    }

    #[test]
    fn labels_grow_the_register_file() {
        let program = Program {
            registers: vec![RegisterSpec::Qubit, RegisterSpec::Qubit],
            initial: vec![1, 0],
            gates: vec![
                ProgramGate::Label {
                    qubits: vec![0, 1],
                    target: RegisterSpec::Element { order: 3 },
                },
                ProgramGate::OpValue { control: 0, x: 2, value: 1 },
            ],
        };
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let outcome = program.run(&mut rng);
        assert_eq!(outcome.labels, vec![2]);
        assert_eq!(outcome.quantum_gates, 1);
        assert_eq!(outcome.classical_bits, 2);
        let amp = outcome.state.amplitude(&[1, 0, 0]);
        assert!((amp - Complex64::ONE).norm() <= 1e-10);
    }
}
