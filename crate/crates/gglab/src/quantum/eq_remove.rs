//! Removing equality gates from classical preprocessing.
//!
//! A classical circuit over group wires is executed symbolically along its
//! generic branch: every wire carries a linear polynomial in the instance
//! exponents, and an equality gate whose operand difference is identically
//! zero always fires, so it survives as an unconditional bit flip. Every
//! other equality gate is dropped. The transformed circuit agrees with the
//! original on a uniform instance except when some dropped comparison
//! happens to land on a root, which a union bound caps at (C+m+1)²/(2p)
//! for C wire-creating gates, m instance wires, and p the smallest prime
//! dividing the group order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::algebra::{Factorization, LinPolyModN};
use crate::oracle::Sign;
use crate::stats::within_lower;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalStep {
    /// New wire holding a known exponent, blank when out of range.
    Label { value: u64 },
    /// New wire holding x ± y; with a control, the bit picks between the
    /// combination and a plain copy of x.
    Op { x: usize, y: usize, sign: Sign, control: Option<usize> },
    /// Flip `bit` when the two wires hold equal group elements.
    Equality { x: usize, y: usize, bit: usize },
    Not { bit: usize },
}

/// Straight-line classical program over group wires and output bits. Wire 0
/// is the generator; wires 1..=instances hold the instance exponents.
#[derive(Clone, Debug)]
pub struct ClassicalCircuit {
    pub order: u64,
    pub instances: usize,
    pub bits: usize,
    pub steps: Vec<ClassicalStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalRun {
    pub wires: Vec<Option<u64>>,
    pub bits: Vec<bool>,
}

impl ClassicalCircuit {
    /// Wire-creating gates: the C in the agreement bound.
    pub fn wire_gates(&self) -> u64 {
        self.steps
            .iter()
            .filter(|s| matches!(s, ClassicalStep::Label { .. } | ClassicalStep::Op { .. }))
            .count() as u64
    }

    pub fn equality_gates(&self) -> u64 {
        self.steps
            .iter()
            .filter(|s| matches!(s, ClassicalStep::Equality { .. }))
            .count() as u64
    }

    pub fn run(&self, xs: &[u64]) -> ClassicalRun {
        assert_eq!(xs.len(), self.instances, "instance width mismatch");
        let n = self.order;
        let mut wires: Vec<Option<u64>> = Vec::with_capacity(1 + self.instances);
        wires.push(Some(1 % n));
        for &x in xs {
            assert!(x < n, "instance exponent out of range");
            wires.push(Some(x));
        }
        let mut bits = vec![false; self.bits];
        for step in &self.steps {
            match *step {
                ClassicalStep::Label { value } => wires.push((value < n).then_some(value)),
                ClassicalStep::Op { x, y, sign, control } => {
                    let wire = if control.is_some_and(|b| !bits[b]) {
                        wires[x]
                    } else {
                        match (wires[x], wires[y]) {
                            (Some(a), Some(b)) => Some(match sign {
                                Sign::Add => (a + b) % n,
                                Sign::Sub => (a + (n - b)) % n,
                            }),
                            _ => None,
                        }
                    };
                    wires.push(wire);
                }
                ClassicalStep::Equality { x, y, bit } => {
                    if wires[x].is_some() && wires[x] == wires[y] {
                        bits[bit] ^= true;
                    }
                }
                ClassicalStep::Not { bit } => bits[bit] ^= true,
            }
        }
        ClassicalRun { wires, bits }
    }
}

#[derive(Clone, Debug)]
pub struct TransformedCircuit {
    pub circuit: ClassicalCircuit,
    pub removed: u64,
    pub kept_flips: u64,
}

/// Symbolic generic-branch pass: keeps identically-firing equalities as
/// plain bit flips and drops the rest.
pub fn remove_classical_equalities(circuit: &ClassicalCircuit) -> TransformedCircuit {
    let n = circuit.order;
    let m = circuit.instances;
    let mut polys: Vec<Option<LinPolyModN>> = Vec::new();
    polys.push(Some(LinPolyModN::constant(n, m, 1 % n)));
    for var in 0..m {
        polys.push(Some(LinPolyModN::variable(n, m, var)));
    }
    let mut generic_bits = vec![false; circuit.bits];
    let mut steps = Vec::with_capacity(circuit.steps.len());
    let mut removed = 0;
    let mut kept_flips = 0;

    for step in &circuit.steps {
        match *step {
            ClassicalStep::Label { value } => {
                polys.push((value < n).then(|| LinPolyModN::constant(n, m, value)));
                steps.push(*step);
            }
            ClassicalStep::Op { x, y, sign, control } => {
                let poly = if control.is_some_and(|b| !generic_bits[b]) {
                    polys[x].clone()
                } else {
                    match (&polys[x], &polys[y]) {
                        (Some(a), Some(b)) => Some(match sign {
                            Sign::Add => a.add(b),
                            Sign::Sub => a.sub(b),
                        }),
                        _ => None,
                    }
                };
                polys.push(poly);
                steps.push(*step);
            }
            ClassicalStep::Equality { x, y, bit } => {
                let always_fires = match (&polys[x], &polys[y]) {
                    (Some(a), Some(b)) => a.sub(b).is_zero(),
                    _ => false,
                };
                if always_fires {
                    kept_flips += 1;
                    generic_bits[bit] ^= true;
                    steps.push(ClassicalStep::Not { bit });
                } else {
                    removed += 1;
                }
            }
            ClassicalStep::Not { bit } => {
                generic_bits[bit] ^= true;
                steps.push(*step);
            }
        }
    }

    TransformedCircuit {
        circuit: ClassicalCircuit {
            order: n,
            instances: m,
            bits: circuit.bits,
            steps,
        },
        removed,
        kept_flips,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EqRemovalReport {
    pub trials: u64,
    pub agreements: u64,
    pub agreement_rate: f64,
    pub bound: f64,
    pub removed: u64,
    pub kept_flips: u64,
    pub wire_gates: u64,
}

/// Compares the circuit against its equality-free transform on uniform
/// instances and checks the measured agreement clears the union bound.
pub fn eq_removal_experiment(circuit: &ClassicalCircuit, trials: u64, seed: u64) -> EqRemovalReport {
    assert!(trials > 0, "the experiment needs at least one trial");
    let transformed = remove_classical_equalities(circuit);
    let smallest_prime = Factorization::of_u64(circuit.order)
        .prime_powers_u64()
        .iter()
        .map(|&(p, _)| p)
        .min()
        .expect("the group order has a prime factor");
    let total_wires = 1 + circuit.instances as u64 + circuit.wire_gates();
    let bound = 1.0 - (total_wires * total_wires) as f64 / (2 * smallest_prime) as f64;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut agreements = 0;
    for _ in 0..trials {
        let xs: Vec<u64> = (0..circuit.instances)
            .map(|_| rng.gen_range(0..circuit.order))
            .collect();
        if circuit.run(&xs) == transformed.circuit.run(&xs) {
            agreements += 1;
        }
    }
    let agreement_rate = agreements as f64 / trials as f64;
    assert!(
        within_lower(agreement_rate, bound, trials),
        "agreement {agreement_rate} fell below the removal bound {bound}"
    );
    EqRemovalReport {
        trials,
        agreements,
        agreement_rate,
        bound,
        removed: transformed.removed,
        kept_flips: transformed.kept_flips,
        wire_gates: circuit.wire_gates(),
    }
}

/// Probe circuit for composite orders: computes 103·X with nine additions,
/// labels the identity, and asks one equality. Over N = 101·103 the
/// comparison fires exactly when x ≡ 0 mod 101, so the transform loses a
/// 1/101 sliver while the wire budget sits at C = 10.
pub fn vanishing_multiple_probe(order: u64) -> ClassicalCircuit {
    let add = |x, y| ClassicalStep::Op { x, y, sign: Sign::Add, control: None };
    ClassicalCircuit {
        order,
        instances: 1,
        bits: 1,
        steps: vec![
            add(1, 1),  // wire 2 = 2X
            add(2, 1),  // wire 3 = 3X
            add(3, 2),  // wire 4 = 5X
            add(4, 4),  // wire 5 = 10X
            add(5, 5),  // wire 6 = 20X
            add(6, 6),  // wire 7 = 40X
            add(7, 5),  // wire 8 = 50X
            add(8, 8),  // wire 9 = 100X
            add(9, 3),  // wire 10 = 103X
            ClassicalStep::Label { value: 0 }, // wire 11
            ClassicalStep::Equality { x: 10, y: 11, bit: 0 },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_polynomials_survive_as_flips() {
        let circuit = ClassicalCircuit {
            order: 77,
            instances: 1,
            bits: 1,
            steps: vec![
                ClassicalStep::Op { x: 1, y: 0, sign: Sign::Add, control: None }, // X + g
                ClassicalStep::Op { x: 0, y: 1, sign: Sign::Add, control: None }, // g + X
                ClassicalStep::Equality { x: 2, y: 3, bit: 0 },
            ],
        };
        let transformed = remove_classical_equalities(&circuit);
        assert_eq!(transformed.kept_flips, 1);
        assert_eq!(transformed.removed, 0);
        let report = eq_removal_experiment(&circuit, 200, 4);
        assert_eq!(report.agreements, 200);
    }

    #[test]
    fn probe_loses_only_the_vanishing_sliver() {
        let circuit = vanishing_multiple_probe(101 * 103);
        assert_eq!(circuit.wire_gates(), 10);
        let report = eq_removal_experiment(&circuit, 5000, 7);
        assert_eq!(report.removed, 1);
        assert_eq!(report.kept_flips, 0);
        assert!((report.bound - (1.0 - 144.0 / 202.0)).abs() <= 1e-12);
        // True disagreement probability is 1/101; allow four sigmas.
        let expected = 1.0 - 1.0 / 101.0;
        let sigma = (expected * (1.0 - expected) / 5000.0_f64).sqrt();
        assert!((report.agreement_rate - expected).abs() <= 4.0 * sigma);
    }

    #[test]
    fn large_prime_orders_barely_disagree() {
        let circuit = ClassicalCircuit {
            order: 10007,
            instances: 1,
            bits: 1,
            steps: vec![
                ClassicalStep::Op { x: 1, y: 1, sign: Sign::Add, control: None }, // 2X
                ClassicalStep::Label { value: 0 },
                ClassicalStep::Equality { x: 2, y: 3, bit: 0 },
            ],
        };
        let report = eq_removal_experiment(&circuit, 300, 11);
        assert!(report.agreement_rate >= 0.99, "rate {}", report.agreement_rate);
        assert!(report.bound >= 0.998);
    }

    #[test]
    fn controlled_ops_spread_a_wrong_bit_into_the_wires() {
        let mut circuit = vanishing_multiple_probe(101 * 103);
        circuit.steps.push(ClassicalStep::Op {
            x: 1,
            y: 0,
            sign: Sign::Add,
            control: Some(0),
        });
        let transformed = remove_classical_equalities(&circuit);

        let fires = circuit.run(&[101]);
        assert!(fires.bits[0]);
        assert_eq!(*fires.wires.last().unwrap(), Some(102));
        let silent = transformed.circuit.run(&[101]);
        assert!(!silent.bits[0]);
        assert_eq!(*silent.wires.last().unwrap(), Some(101));

        assert_eq!(circuit.run(&[5]), transformed.circuit.run(&[5]));
    }

    #[test]
    fn blank_labels_never_fire() {
        let circuit = ClassicalCircuit {
            order: 21,
            instances: 1,
            bits: 1,
            steps: vec![
                ClassicalStep::Label { value: 25 },
                ClassicalStep::Equality { x: 1, y: 2, bit: 0 },
                ClassicalStep::Not { bit: 0 },
            ],
        };
        let transformed = remove_classical_equalities(&circuit);
        assert_eq!(transformed.removed, 1);
        let run = circuit.run(&[4]);
        assert_eq!(run.wires[2], None);
        assert!(run.bits[0]);
        assert_eq!(run, transformed.circuit.run(&[4]));
    }
}
