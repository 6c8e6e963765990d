//! Element and ring gates as basis permutations. Exponent arithmetic runs
//! mod the register order; any branch touching a blank operand is left
//! fixed, as is any (t, w) branch whose indexed source and target coincide.

use rand_chacha::ChaCha12Rng;

use crate::algebra::inv_mod;

use super::layout::RegisterKind;
use super::state::QState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementGateKind {
    Op,
    Inv,
    Eq,
}

/// Wiring of an element gate: control qubit, candidate targets X_1..X_t,
/// candidate sources Y_1..Y_w, and for the (t, w) form the two index
/// registers selecting which pair acts.
#[derive(Clone, Debug)]
pub struct ElementGate {
    pub kind: ElementGateKind,
    pub control: usize,
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
    pub indices: Option<(usize, usize)>,
}

impl ElementGate {
    pub fn basic(kind: ElementGateKind, control: usize, x: usize, y: usize) -> Self {
        Self { kind, control, xs: vec![x], ys: vec![y], indices: None }
    }

    pub fn indexed(
        kind: ElementGateKind,
        control: usize,
        t_register: usize,
        w_register: usize,
        xs: Vec<usize>,
        ys: Vec<usize>,
    ) -> Self {
        Self { kind, control, xs, ys, indices: Some((t_register, w_register)) }
    }
}

fn element_order(state: &QState, gate: &ElementGate) -> u64 {
    let layout = state.layout();
    assert_eq!(layout.kind(gate.control), RegisterKind::Qubit, "control must be a qubit");
    let order = match layout.kind(gate.xs[0]) {
        RegisterKind::Element(n) => n,
        other => panic!("target register is {other:?}, not an element register"),
    };
    for &r in gate.xs.iter().chain(&gate.ys) {
        assert_eq!(
            layout.kind(r),
            RegisterKind::Element(order),
            "element registers must share one group"
        );
        assert_ne!(r, gate.control, "control overlaps an element register");
    }
    for (k, &r) in gate.xs.iter().enumerate() {
        assert!(!gate.xs[..k].contains(&r), "duplicate target register");
    }
    for (k, &r) in gate.ys.iter().enumerate() {
        assert!(!gate.ys[..k].contains(&r), "duplicate source register");
    }
    match gate.indices {
        None => {
            assert_eq!(gate.xs.len(), 1, "basic form takes one target");
            assert_eq!(gate.ys.len(), 1, "basic form takes one source");
        }
        Some((t, w)) => {
            assert_eq!(
                state.layout().dim_of(t),
                gate.xs.len() as u64,
                "index register T must have dimension t"
            );
            assert_eq!(
                state.layout().dim_of(w),
                gate.ys.len() as u64,
                "index register W must have dimension w"
            );
            for r in [t, w] {
                assert!(
                    matches!(layout.kind(r), RegisterKind::Qubit | RegisterKind::Qudit(_)),
                    "index registers must be qubit registers"
                );
                assert!(
                    !gate.xs.contains(&r) && !gate.ys.contains(&r) && r != gate.control,
                    "index register overlaps an operand"
                );
            }
        }
    }
    order
}

pub fn apply_element_gate(state: &mut QState, gate: &ElementGate) {
    let order = element_order(state, gate);
    let blank = order;
    let gate = gate.clone();
    state.apply_permutation(|digits| {
        let b = digits[gate.control];
        let (i, j) = match gate.indices {
            Some((t, w)) => (digits[t] as usize, digits[w] as usize),
            None => (0, 0),
        };
        let (xr, yr) = (gate.xs[i], gate.ys[j]);
        if xr == yr {
            return;
        }
        let (x, y) = (digits[xr], digits[yr]);
        if x == blank || y == blank {
            return;
        }
        match gate.kind {
            ElementGateKind::Op => digits[xr] = (x + b * y) % order,
            ElementGateKind::Inv => digits[xr] = (x + b * ((order - y) % order)) % order,
            ElementGateKind::Eq => {
                if x == y {
                    digits[gate.control] = b ^ 1;
                }
            }
        }
    });
}

/// Op or Inv whose source operand is a classically known element rather
/// than a register. Exact for source registers sitting in an unentangled
/// basis state, and counted the same as the register form.
pub fn apply_element_gate_classical(
    state: &mut QState,
    kind: ElementGateKind,
    control: usize,
    x: usize,
    y_value: u64,
) {
    assert_eq!(state.layout().kind(control), RegisterKind::Qubit, "control must be a qubit");
    let order = match state.layout().kind(x) {
        RegisterKind::Element(n) => n,
        other => panic!("target register is {other:?}, not an element register"),
    };
    assert!(y_value < order, "source value out of range");
    assert!(!matches!(kind, ElementGateKind::Eq), "equality needs a source register");
    let blank = order;
    state.apply_permutation(|digits| {
        let (b, x_digit) = (digits[control], digits[x]);
        if x_digit == blank {
            return;
        }
        digits[x] = match kind {
            ElementGateKind::Op => (x_digit + b * y_value) % order,
            ElementGateKind::Inv => (x_digit + b * ((order - y_value) % order)) % order,
            ElementGateKind::Eq => unreachable!(),
        };
    });
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingGate {
    Add { b: usize, x: usize, y: usize },
    Sub { b: usize, x: usize, y: usize },
    ProdAdd { b: usize, x: usize, y: usize, z: usize },
    TestInv { x: usize, c: usize },
    InvAdd { b: usize, x: usize, y: usize, z: usize },
    Eq { b: usize, x: usize, y: usize },
}

fn ring_modulus(state: &QState, ring_regs: &[usize], bit_regs: &[usize]) -> u64 {
    let layout = state.layout();
    let modulus = match layout.kind(ring_regs[0]) {
        RegisterKind::Ring(n) => n,
        other => panic!("expected a ring register, found {other:?}"),
    };
    for (k, &r) in ring_regs.iter().enumerate() {
        assert_eq!(layout.kind(r), RegisterKind::Ring(modulus), "ring registers must share a modulus");
        assert!(!ring_regs[..k].contains(&r), "ring operands must be distinct registers");
    }
    for &r in bit_regs {
        assert_eq!(layout.kind(r), RegisterKind::Qubit, "control must be a qubit");
        assert!(!ring_regs.contains(&r), "control overlaps a ring operand");
    }
    modulus
}

pub fn apply_ring_gate(state: &mut QState, gate: RingGate) {
    match gate {
        RingGate::Add { b, x, y } | RingGate::Sub { b, x, y } => {
            let n = ring_modulus(state, &[x, y], &[b]);
            let negate = matches!(gate, RingGate::Sub { .. });
            state.apply_permutation(|digits| {
                let (xv, yv) = (digits[x], digits[y]);
                if xv == n || yv == n {
                    return;
                }
                let step = if negate { (n - yv) % n } else { yv };
                digits[x] = (xv + digits[b] * step) % n;
            });
        }
        RingGate::ProdAdd { b, x, y, z } => {
            let n = ring_modulus(state, &[x, y, z], &[b]);
            state.apply_permutation(|digits| {
                let (xv, yv, zv) = (digits[x], digits[y], digits[z]);
                if xv == n || yv == n || zv == n {
                    return;
                }
                digits[x] = (xv + digits[b] * (yv * zv % n)) % n;
            });
        }
        RingGate::TestInv { x, c } => {
            let n = ring_modulus(state, &[x], &[c]);
            state.apply_permutation(|digits| {
                if digits[x] < n && inv_mod(digits[x], n).is_some() {
                    digits[c] ^= 1;
                }
            });
        }
        RingGate::InvAdd { b, x, y, z } => {
            let n = ring_modulus(state, &[x, y, z], &[b]);
            state.apply_permutation(|digits| {
                let (xv, yv, zv) = (digits[x], digits[y], digits[z]);
                if xv == n || yv == n || zv == n {
                    return;
                }
                let Some(z_inv) = inv_mod(zv, n) else { return };
                digits[x] = (xv + digits[b] * (yv * z_inv % n)) % n;
            });
        }
        RingGate::Eq { b, x, y } => {
            let n = ring_modulus(state, &[x, y], &[b]);
            state.apply_permutation(|digits| {
                if digits[x] < n && digits[x] == digits[y] {
                    digits[b] ^= 1;
                }
            });
        }
    }
}

/// ProdAdd with a classically known z operand: x += b·y·z.
pub fn apply_prod_add_classical(state: &mut QState, b: usize, x: usize, y: usize, z_value: u64) {
    let n = ring_modulus(state, &[x, y], &[b]);
    assert!(z_value < n, "operand value out of range");
    state.apply_permutation(|digits| {
        let (xv, yv) = (digits[x], digits[y]);
        if xv == n || yv == n {
            return;
        }
        digits[x] = (xv + digits[b] * (yv * z_value % n)) % n;
    });
}

/// InvAdd with a classically known z operand: x += b·Test(z)·y·z⁻¹. The
/// whole gate is the identity when z is not invertible.
pub fn apply_inv_add_classical(state: &mut QState, b: usize, x: usize, y: usize, z_value: u64) {
    let n = ring_modulus(state, &[x, y], &[b]);
    assert!(z_value < n, "operand value out of range");
    let Some(z_inv) = inv_mod(z_value, n) else { return };
    state.apply_permutation(|digits| {
        let (xv, yv) = (digits[x], digits[y]);
        if xv == n || yv == n {
            return;
        }
        digits[x] = (xv + digits[b] * (yv * z_inv % n)) % n;
    });
}

/// Classical labeling: measures the listed qubits, reads them as a
/// most-significant-first integer v, and appends a fresh register holding
/// that element, blank when v falls outside the carrier.
pub fn classical_label_measure(
    state: &mut QState,
    qubit_registers: &[usize],
    target: RegisterKind,
    rng: &mut ChaCha12Rng,
) -> u64 {
    let order = target.order().expect("labeling targets element or ring registers");
    assert_eq!(
        qubit_registers.len() as u32,
        crate::algebra::ceil_log2(order),
        "labeling reads exactly the bits of one element"
    );
    for &r in qubit_registers {
        assert_eq!(state.layout().kind(r), RegisterKind::Qubit, "labeling measures qubits");
    }
    let bits = state.measure(qubit_registers, rng);
    let value = bits.iter().fold(0u64, |acc, &bit| acc * 2 + bit);
    let digit = if value < order { value } else { order };
    state.append_register(target, digit);
    value
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use rand::SeedableRng;

    use crate::algebra::inv_mod;

    use super::super::layout::RegisterLayout;
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-10
    }

    fn group_layout(n: u64) -> RegisterLayout {
        RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Element(n),
            RegisterKind::Element(n),
        ])
    }

    #[test]
    fn group_op_adds_exponents() {
        let mut state = QState::basis(group_layout(5), &[1, 2, 3]);
        apply_element_gate(&mut state, &ElementGate::basic(ElementGateKind::Op, 0, 1, 2));
        assert!(close(state.amplitude(&[1, 0, 3]), Complex64::ONE));
    }

    #[test]
    fn blank_operands_freeze_the_branch() {
        let mut state = QState::basis(group_layout(5), &[1, 5, 3]);
        apply_element_gate(&mut state, &ElementGate::basic(ElementGateKind::Op, 0, 1, 2));
        assert!(close(state.amplitude(&[1, 5, 3]), Complex64::ONE));
        apply_element_gate(&mut state, &ElementGate::basic(ElementGateKind::Eq, 0, 1, 2));
        assert!(close(state.amplitude(&[1, 5, 3]), Complex64::ONE));
    }

    #[test]
    fn control_superpositions_act_linearly() {
        let mut state = QState::basis(group_layout(5), &[0, 1, 1]);
        state.apply_qft(&[0], false);
        apply_element_gate(&mut state, &ElementGate::basic(ElementGateKind::Op, 0, 1, 2));
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(close(state.amplitude(&[0, 1, 1]), r));
        assert!(close(state.amplitude(&[1, 2, 1]), r));
    }

    #[test]
    fn op_then_inv_is_the_identity_and_eq_flips_back() {
        let layout = group_layout(7);
        let mut state = QState::basis(layout, &[1, 4, 6]);
        state.apply_qft(&[0], false);
        let op = ElementGate::basic(ElementGateKind::Op, 0, 1, 2);
        let inv = ElementGate::basic(ElementGateKind::Inv, 0, 1, 2);
        let before = state.amplitudes().to_vec();
        apply_element_gate(&mut state, &op);
        apply_element_gate(&mut state, &inv);
        for (a, b) in state.amplitudes().iter().zip(&before) {
            assert!(close(*a, *b));
        }
        let eq = ElementGate::basic(ElementGateKind::Eq, 0, 1, 2);
        apply_element_gate(&mut state, &eq);
        apply_element_gate(&mut state, &eq);
        for (a, b) in state.amplitudes().iter().zip(&before) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn indexed_gates_skip_coinciding_pairs() {
        let layout = RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Qudit(2),
            RegisterKind::Qudit(2),
            RegisterKind::Element(5),
            RegisterKind::Element(5),
        ]);
        let mut state = QState::basis(layout, &[1, 0, 0, 2, 3]);
        state.apply_qft(&[2], false);
        let gate =
            ElementGate::indexed(ElementGateKind::Op, 0, 1, 2, vec![3, 4], vec![3, 4]);
        // W selects the source: j=0 aliases the target, j=1 adds.
        apply_element_gate(&mut state, &gate);
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(close(state.amplitude(&[1, 0, 0, 2, 3]), r));
        assert!(close(state.amplitude(&[1, 0, 1, 0, 3]), r));
    }

    #[test]
    fn classical_source_matches_a_register_source() {
        let mut base = QState::basis(group_layout(6), &[0, 2, 5]);
        base.apply_qft(&[0], false);

        let mut widened = base.clone();
        widened.append_register(RegisterKind::Element(6), 4);
        apply_element_gate(&mut widened, &ElementGate::basic(ElementGateKind::Op, 0, 1, 3));

        let mut classical = base;
        apply_element_gate_classical(&mut classical, ElementGateKind::Op, 0, 1, 4);
        for b in 0..2 {
            for x in 0..7 {
                assert!(close(
                    classical.amplitude(&[b, x, 5]),
                    widened.amplitude(&[b, x, 5, 4])
                ));
            }
        }
    }

    #[test]
    fn equality_flips_the_control_on_matching_values() {
        let gate = ElementGate::basic(ElementGateKind::Eq, 0, 1, 2);
        let mut state = QState::basis(group_layout(3), &[0, 1, 1]);
        apply_element_gate(&mut state, &gate);
        assert!(close(state.amplitude(&[1, 1, 1]), Complex64::ONE));
        let mut state = QState::basis(group_layout(3), &[0, 1, 2]);
        apply_element_gate(&mut state, &gate);
        assert!(close(state.amplitude(&[0, 1, 2]), Complex64::ONE));
    }

    fn ring_layout(n: u64) -> RegisterLayout {
        RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Ring(n),
            RegisterKind::Ring(n),
            RegisterKind::Ring(n),
        ])
    }

    #[test]
    fn prod_add_multiplies_into_the_target() {
        let mut state = QState::basis(ring_layout(15), &[1, 1, 2, 4]);
        apply_ring_gate(&mut state, RingGate::ProdAdd { b: 0, x: 1, y: 2, z: 3 });
        assert!(close(state.amplitude(&[1, 9, 2, 4]), Complex64::ONE));
    }

    #[test]
    fn test_inv_flips_only_on_units() {
        let mut state = QState::basis(ring_layout(15), &[0, 5, 0, 0]);
        apply_ring_gate(&mut state, RingGate::TestInv { x: 1, c: 0 });
        assert!(close(state.amplitude(&[0, 5, 0, 0]), Complex64::ONE));
        let mut state = QState::basis(ring_layout(15), &[0, 7, 0, 0]);
        apply_ring_gate(&mut state, RingGate::TestInv { x: 1, c: 0 });
        assert!(close(state.amplitude(&[1, 7, 0, 0]), Complex64::ONE));
        apply_ring_gate(&mut state, RingGate::TestInv { x: 1, c: 0 });
        assert!(close(state.amplitude(&[0, 7, 0, 0]), Complex64::ONE));
    }

    #[test]
    fn inv_add_divides_by_the_z_operand() {
        assert_eq!(inv_mod(2, 15), Some(8));
        let mut state = QState::basis(ring_layout(15), &[1, 0, 3, 2]);
        apply_ring_gate(&mut state, RingGate::InvAdd { b: 0, x: 1, y: 2, z: 3 });
        assert!(close(state.amplitude(&[1, 9, 3, 2]), Complex64::ONE));
        // Non-invertible z freezes every branch.
        let mut state = QState::basis(ring_layout(15), &[1, 0, 3, 6]);
        apply_ring_gate(&mut state, RingGate::InvAdd { b: 0, x: 1, y: 2, z: 3 });
        assert!(close(state.amplitude(&[1, 0, 3, 6]), Complex64::ONE));
    }

    #[test]
    fn classical_ring_operands_match_register_operands() {
        let mut by_register = QState::basis(ring_layout(15), &[0, 1, 2, 4]);
        by_register.apply_qft(&[0], false);
        let mut by_value = by_register.clone();
        apply_ring_gate(&mut by_register, RingGate::ProdAdd { b: 0, x: 1, y: 2, z: 3 });
        apply_prod_add_classical(&mut by_value, 0, 1, 2, 4);
        for (a, b) in by_value.amplitudes().iter().zip(by_register.amplitudes()) {
            assert!(close(*a, *b));
        }

        let mut by_register = QState::basis(ring_layout(15), &[0, 0, 3, 2]);
        by_register.apply_qft(&[0], false);
        let mut by_value = by_register.clone();
        apply_ring_gate(&mut by_register, RingGate::InvAdd { b: 0, x: 1, y: 2, z: 3 });
        apply_inv_add_classical(&mut by_value, 0, 1, 2, 2);
        for (a, b) in by_value.amplitudes().iter().zip(by_register.amplitudes()) {
            assert!(close(*a, *b));
        }
    }

    #[test]
    fn labeling_reads_bits_most_significant_first() {
        let layout = RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Qubit,
            RegisterKind::Qubit,
            RegisterKind::Qubit,
        ]);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut state = QState::basis(layout.clone(), &[0, 1, 1, 0]);
        let value =
            classical_label_measure(&mut state, &[0, 1, 2, 3], RegisterKind::Element(11), &mut rng);
        assert_eq!(value, 6);
        assert!(close(state.amplitude(&[0, 1, 1, 0, 6]), Complex64::ONE));

        let mut state = QState::basis(layout, &[1, 1, 1, 0]);
        let value =
            classical_label_measure(&mut state, &[0, 1, 2, 3], RegisterKind::Element(11), &mut rng);
        assert_eq!(value, 14);
        assert!(close(state.amplitude(&[1, 1, 1, 0, 11]), Complex64::ONE));
    }

    #[test]
    fn labeling_a_uniform_qubit_measures_both_values() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qubit]);
        let mut counts = [0u32; 2];
        for seed in 0..400 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut state = QState::basis(layout.clone(), &[0]);
            state.apply_qft(&[0], false);
            let value =
                classical_label_measure(&mut state, &[0], RegisterKind::Element(2), &mut rng);
            counts[value as usize] += 1;
            assert!(close(state.amplitude(&[value, value]), Complex64::ONE));
        }
        assert!(counts[0] >= 140 && counts[1] >= 140, "counts {counts:?}");
    }
}
