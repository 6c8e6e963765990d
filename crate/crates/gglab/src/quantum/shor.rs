//! Shor-style demonstrations at toy sizes: discrete log over a prime-order
//! group and order finding over a small ring, both with exact success
//! probabilities read off the final state.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::{ceil_log2, is_probable_prime, mul_mod, pow_mod};

use super::delegate::DelegationTally;
use super::gates::{
    apply_element_gate_classical, apply_inv_add_classical, apply_prod_add_classical,
    apply_ring_gate, ElementGateKind, RingGate,
};
use super::layout::{RegisterKind, RegisterLayout};
use super::state::QState;

/// Exact success probability of the discrete-log demo at order 17 with
/// x = 5, recorded from an oracle run (0.756902754…, floored a hair).
pub const SHOR_DL_17_FIXTURE: f64 = 0.7569;
/// Exact success probability of order finding at N = 15, a = 2: the order
/// divides the control width, so exactly half the peaks decode to 4.
pub const SHOR_ORDER_15_FIXTURE: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct ShorDlReport {
    pub order: u64,
    pub instance: u64,
    pub candidate: u64,
    pub success: f64,
    pub quantum_gates: u64,
    pub equality_gates: u64,
    pub classical_labels: u64,
    pub tally: DelegationTally,
    /// Probability of each (u, v) control outcome, u block first.
    pub outcome_distribution: Vec<f64>,
}

/// Maximum-likelihood post-processing table: outcome (u, v) of the two
/// Fourier-transformed control blocks goes to the candidate exponent whose
/// public outcome distribution puts the most mass there, smallest candidate
/// on ties.
fn dl_decode_table(order: u64, k: u32) -> Vec<u64> {
    let two_k = 1u64 << k;
    let pairs = (two_k * two_k) as usize;
    let omega: Vec<Complex64> = (0..two_k)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / two_k as f64))
        .collect();
    // class_sum[c][u] = Σ_{a ≡ c (mod order)} ω^{au} over a in [0, 2^k).
    let mut class_sum = vec![vec![Complex64::ZERO; two_k as usize]; order as usize];
    for u in 0..two_k {
        for a in 0..two_k {
            class_sum[(a % order) as usize][u as usize] += omega[(a * u % two_k) as usize];
        }
    }
    let mut best = vec![f64::NEG_INFINITY; pairs];
    let mut decode = vec![0u64; pairs];
    for candidate in 0..order {
        let neg = order - candidate;
        for u in 0..two_k {
            for v in 0..two_k {
                let mut score = 0.0;
                for e in 0..order {
                    let mut s = Complex64::ZERO;
                    for b in 0..two_k {
                        let class = ((e + b * neg) % order) as usize;
                        s += omega[(b * v % two_k) as usize] * class_sum[class][u as usize];
                    }
                    score += s.norm_sqr();
                }
                let idx = (u * two_k + v) as usize;
                if score > best[idx] * (1.0 + 1e-9) + 1e-9 {
                    best[idx] = score;
                    decode[idx] = candidate;
                }
            }
        }
    }
    decode
}

/// Discrete log in the group model: two k-qubit control blocks go through
/// a Fourier transform, k controlled operations fold g^(2^i) into the
/// accumulator and k more fold h^(2^i), a second transform exposes the
/// phases, and the measured pair is decoded by maximum likelihood. The
/// accumulator and the 2k ladder wires arrive through classical labeling,
/// so the quantum budget is exactly 2k element gates and never an equality.
pub fn shor_dl_qggm(order: u64, instance: u64, seed: u64) -> ShorDlReport {
    assert!((2..=64).contains(&order), "demo orders stop at 64");
    assert!(is_probable_prime(&order.into()), "the group order must be prime");
    assert!(instance < order, "instance exponent out of range");
    let k = ceil_log2(order);
    let kk = k as usize;

    let mut kinds = vec![RegisterKind::Qubit; 2 * kk];
    kinds.push(RegisterKind::Element(order));
    let layout = RegisterLayout::new(kinds);
    let mut state = QState::basis(layout, &vec![0; 2 * kk + 1]);

    let mut tally = DelegationTally::new(1, 1);
    for _ in 0..(2 * kk + 1) {
        tally.charge_classical(k);
    }

    let controls: Vec<usize> = (0..2 * kk).collect();
    state.apply_qft(&controls[..kk], false);
    state.apply_qft(&controls[kk..], false);

    let accumulator = 2 * kk;
    for i in 0..kk {
        let shift = pow_mod(2, (kk - 1 - i) as u64, order);
        apply_element_gate_classical(&mut state, ElementGateKind::Op, i, accumulator, shift);
        tally.charge_quantum();
        let shift = mul_mod(instance, shift, order);
        apply_element_gate_classical(&mut state, ElementGateKind::Op, kk + i, accumulator, shift);
        tally.charge_quantum();
    }

    state.apply_qft(&controls[..kk], false);
    state.apply_qft(&controls[kk..], false);

    let decode = dl_decode_table(order, k);
    let probs = state.distribution(&controls);
    let success = probs
        .iter()
        .zip(&decode)
        .filter(|&(_, &d)| d == instance)
        .map(|(p, _)| p)
        .sum();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let bits = state.measure(&controls, &mut rng);
    let outcome = bits.iter().fold(0u64, |acc, &b| acc * 2 + b);
    ShorDlReport {
        order,
        instance,
        candidate: decode[outcome as usize],
        success,
        quantum_gates: tally.quantum_gates,
        equality_gates: 0,
        classical_labels: 2 * kk as u64 + 1,
        tally,
        outcome_distribution: probs,
    }
}

#[derive(Clone, Debug)]
pub struct ShorOrderReport {
    pub modulus: u64,
    pub base: u64,
    pub candidate: u64,
    pub success: f64,
    pub quantum_gates: u64,
    pub classical_labels: u64,
    pub tally: DelegationTally,
    pub factor_witness: Option<(u64, u64)>,
    /// Probability of each phase outcome u of the control block.
    pub outcome_distribution: Vec<f64>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Largest continued-fraction denominator of u / 2^bits not exceeding the
/// modulus; the order candidate read from one phase sample.
fn cf_order_candidate(u: u64, bits: u32, modulus: u64) -> u64 {
    if u == 0 {
        return 1;
    }
    let (mut num, mut den) = (u, 1u64 << bits);
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut last = 1;
    while num != 0 {
        let a = den / num;
        (den, num) = (num, den % num);
        let q_next = a * q + q_prev;
        (q_prev, q) = (q, q_next);
        if q > modulus {
            break;
        }
        last = q;
    }
    last
}

/// Factoring audit on an even order candidate: Z = a^(r/2) − 1 in plain
/// integers. A witness is a Z whose gcd with the modulus is proper.
pub fn factor_witness(base: u64, modulus: u64, r: u64) -> Option<(u64, u64)> {
    if r == 0 || r % 2 != 0 {
        return None;
    }
    let z = base.checked_pow(u32::try_from(r / 2).ok()?)?.checked_sub(1)?;
    let g = gcd(z, modulus);
    (1 < g && g < modulus).then_some((z, g))
}

/// Order finding in the ring model. One control block of 2·⌈log₂N⌉ qubits
/// drives repeated squarings of the base; each controlled multiplication
/// by c = a^(2^i) costs four ring gates:
///
///   ProdAdd  t += b·c·y        (t picks up c·y)
///   InvAdd   y += b·t·(N−c)⁻¹  (clears y: c·y·(−c)⁻¹ = −y)
///   Add      y += b·t          (y becomes c·y)
///   Sub      t −= b·y          (t returns to zero)
///
/// A bare relabeling of the two registers would do the swap for an
/// uncontrolled multiplication, but under a control the idle branch must
/// keep y in place, so the move costs the Add/Sub pair. The scratch
/// register ends every step at zero in both branches.
pub fn shor_order_qgrm(modulus: u64, base: u64, seed: u64) -> ShorOrderReport {
    assert!((2..=21).contains(&modulus), "demo moduli stop at 21");
    assert!(base >= 1 && base < modulus, "base out of range");
    assert!(gcd(base, modulus) == 1, "the base must be invertible in the ring");
    let k = ceil_log2(modulus);
    let bits = 2 * k;
    let width = bits as usize;

    let mut kinds = vec![RegisterKind::Qubit; width];
    kinds.push(RegisterKind::Ring(modulus)); // work register y, starts at 1
    kinds.push(RegisterKind::Ring(modulus)); // scratch register t, starts at 0
    let layout = RegisterLayout::new(kinds);
    let mut digits = vec![0; width + 2];
    digits[width] = 1;
    let mut state = QState::basis(layout, &digits);

    let mut tally = DelegationTally::new(1, 1);
    tally.charge_classical(k);
    tally.charge_classical(k);

    let controls: Vec<usize> = (0..width).collect();
    let (work, scratch) = (width, width + 1);
    state.apply_qft(&controls, false);

    for i in 0..width {
        let c = pow_mod(base, 1 << (width - 1 - i), modulus);
        apply_prod_add_classical(&mut state, i, scratch, work, c);
        apply_inv_add_classical(&mut state, i, work, scratch, (modulus - c) % modulus);
        apply_ring_gate(&mut state, RingGate::Add { b: i, x: work, y: scratch });
        apply_ring_gate(&mut state, RingGate::Sub { b: i, x: scratch, y: work });
        for _ in 0..4 {
            tally.charge_quantum();
        }
    }

    state.apply_qft(&controls, true);

    let true_order = (1..modulus).find(|&r| pow_mod(base, r, modulus) == 1).unwrap();
    let probs = state.distribution(&controls);
    let success = probs
        .iter()
        .enumerate()
        .filter(|&(u, _)| cf_order_candidate(u as u64, bits, modulus) == true_order)
        .map(|(_, p)| p)
        .sum();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sample = state.measure(&controls, &mut rng);
    let u = sample.iter().fold(0u64, |acc, &b| acc * 2 + b);
    let candidate = cf_order_candidate(u, bits, modulus);

    ShorOrderReport {
        modulus,
        base,
        candidate,
        success,
        quantum_gates: tally.quantum_gates,
        classical_labels: 2,
        tally,
        factor_witness: factor_witness(base, modulus, candidate),
        outcome_distribution: probs,
    }
}
