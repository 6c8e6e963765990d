//! Exact statevector simulation of the quantum group and ring gate sets:
//! mixed-dimension register layouts, the gates themselves, a JSON program
//! format, delegation accounting, equality-gate removal for classical
//! preprocessing, and small Shor-style demonstrations.

pub mod delegate;
pub mod eq_remove;
pub mod gates;
pub mod layout;
pub mod program;
pub mod shor;
pub mod state;

pub use delegate::{delegation_run, DelegationTally};
pub use eq_remove::{
    eq_removal_experiment, remove_classical_equalities, vanishing_multiple_probe,
    ClassicalCircuit, ClassicalStep, EqRemovalReport,
};
pub use gates::{
    apply_element_gate, apply_element_gate_classical, apply_inv_add_classical,
    apply_prod_add_classical, apply_ring_gate, classical_label_measure, ElementGate,
    ElementGateKind, RingGate,
};
pub use layout::{RegisterKind, RegisterLayout};
pub use program::{Program, ProgramGate, ProgramOutcome, RegisterSpec};
pub use shor::{
    factor_witness, shor_dl_qggm, shor_order_qgrm, ShorDlReport, ShorOrderReport,
    SHOR_DL_17_FIXTURE, SHOR_ORDER_15_FIXTURE,
};
pub use state::QState;
