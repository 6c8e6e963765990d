//! Dense statevector over a mixed-radix register layout. Gates come in two
//! flavors: basis permutations (all the element and ring gates) and small
//! dense unitaries applied to a subset of registers (Fourier transforms).

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::layout::{RegisterKind, RegisterLayout};

const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct QState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl QState {
    /// |digits⟩ as a computational basis state.
    pub fn basis(layout: RegisterLayout, digits: &[u64]) -> Self {
        let index = layout.encode(digits) as usize;
        let mut amps = vec![Complex64::ZERO; layout.dim() as usize];
        amps[index] = Complex64::ONE;
        Self { layout, amps }
    }

    /// Haar-ish random state: independent complex entries, normalized.
    pub fn random(layout: RegisterLayout, rng: &mut ChaCha12Rng) -> Self {
        let mut amps: Vec<Complex64> = (0..layout.dim())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        let state = Self { layout, amps };
        state.assert_normalized();
        state
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[u64]) -> Complex64 {
        self.amps[self.layout.encode(digits) as usize]
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn assert_normalized(&self) {
        let norm = self.norm_squared();
        assert!(
            (norm - 1.0).abs() <= NORM_TOLERANCE,
            "state norm drifted to {norm}"
        );
    }

    /// Applies a basis permutation given digit-wise. The map must be a
    /// bijection on the joint basis; anything else shows up as norm drift.
    pub fn apply_permutation(&mut self, f: impl Fn(&mut [u64])) {
        let mut next = vec![Complex64::ZERO; self.amps.len()];
        let mut digits = vec![0u64; self.layout.len()];
        for (index, &amp) in self.amps.iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            for (r, d) in digits.iter_mut().enumerate() {
                *d = self.layout.digit(index as u64, r);
            }
            f(&mut digits);
            next[self.layout.encode(&digits) as usize] += amp;
        }
        self.amps = next;
        self.assert_normalized();
    }

    /// Applies a dense unitary to the joint space of the given registers,
    /// which need not be adjacent. `matrix` is row-major with the first
    /// listed register most significant.
    pub fn apply_joint_unitary(&mut self, registers: &[usize], matrix: &[Vec<Complex64>]) {
        let dims: Vec<u64> = registers.iter().map(|&r| self.layout.dim_of(r)).collect();
        let block: u64 = dims.iter().product();
        assert_eq!(matrix.len() as u64, block, "matrix does not fit the registers");

        let strides: Vec<u64> = registers.iter().map(|&r| self.layout.stride(r)).collect();
        let mut offsets = Vec::with_capacity(block as usize);
        for local in 0..block {
            let mut offset = 0;
            let mut rest = local;
            for k in (0..registers.len()).rev() {
                offset += (rest % dims[k]) * strides[k];
                rest /= dims[k];
            }
            offsets.push(offset as usize);
        }

        let mut gathered = vec![Complex64::ZERO; block as usize];
        for base in 0..self.amps.len() {
            let is_block_origin = registers
                .iter()
                .all(|&r| self.layout.digit(base as u64, r) == 0);
            if !is_block_origin {
                continue;
            }
            for (slot, &offset) in offsets.iter().enumerate() {
                gathered[slot] = self.amps[base + offset];
            }
            for (row, &offset) in offsets.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for (col, &g) in gathered.iter().enumerate() {
                    acc += matrix[row][col] * g;
                }
                self.amps[base + offset] = acc;
            }
        }
        self.assert_normalized();
    }

    /// Quantum Fourier transform over the joint space of the given registers,
    /// ω = exp(2πi/D) with D the product of their dimensions. Restricted to
    /// qubit and qudit registers.
    pub fn apply_qft(&mut self, registers: &[usize], inverse: bool) {
        for &r in registers {
            assert!(
                matches!(self.layout.kind(r), RegisterKind::Qubit | RegisterKind::Qudit(_)),
                "Fourier transforms act on qubit registers only"
            );
        }
        let block: u64 = registers.iter().map(|&r| self.layout.dim_of(r)).product();
        let matrix = fourier_matrix(block, inverse);
        self.apply_joint_unitary(registers, &matrix);
    }

    /// Probability of each outcome of the given registers, marginalizing the
    /// rest.
    pub fn distribution(&self, registers: &[usize]) -> Vec<f64> {
        let block: u64 = registers.iter().map(|&r| self.layout.dim_of(r)).product();
        let mut probs = vec![0.0; block as usize];
        for (index, amp) in self.amps.iter().enumerate() {
            if *amp == Complex64::ZERO {
                continue;
            }
            probs[self.outcome_of(index as u64, registers) as usize] += amp.norm_sqr();
        }
        probs
    }

    fn outcome_of(&self, basis: u64, registers: &[usize]) -> u64 {
        let mut outcome = 0;
        for &r in registers {
            outcome = outcome * self.layout.dim_of(r) + self.layout.digit(basis, r);
        }
        outcome
    }

    /// Measures the given registers in the computational basis, collapsing
    /// the state. Returns the measured digits.
    pub fn measure(&mut self, registers: &[usize], rng: &mut ChaCha12Rng) -> Vec<u64> {
        let probs = self.distribution(registers);
        let mut draw: f64 = rng.gen();
        let mut outcome = probs.len() - 1;
        for (o, &p) in probs.iter().enumerate() {
            if draw < p {
                outcome = o;
                break;
            }
            draw -= p;
        }
        let keep = probs[outcome];
        assert!(keep > 0.0, "measured an outcome of probability zero");

        let scale = 1.0 / keep.sqrt();
        for index in 0..self.amps.len() {
            if self.outcome_of(index as u64, registers) == outcome as u64 {
                self.amps[index] *= scale;
            } else {
                self.amps[index] = Complex64::ZERO;
            }
        }
        self.assert_normalized();

        let mut digits = Vec::with_capacity(registers.len());
        let mut rest = outcome as u64;
        for &r in registers.iter().rev() {
            digits.push(rest % self.layout.dim_of(r));
            rest /= self.layout.dim_of(r);
        }
        digits.reverse();
        digits
    }

    /// Tensors a fresh register in the basis state |digit⟩ onto the end of
    /// the layout.
    pub fn append_register(&mut self, kind: RegisterKind, digit: u64) {
        assert!(digit < kind.dim(), "digit out of range");
        let layout = self.layout.with_register(kind);
        let d = kind.dim() as usize;
        let mut amps = vec![Complex64::ZERO; layout.dim() as usize];
        for (index, &amp) in self.amps.iter().enumerate() {
            amps[index * d + digit as usize] = amp;
        }
        self.layout = layout;
        self.amps = amps;
    }
}

/// D×D Fourier matrix, rows/cols indexed by the joint digits.
pub fn fourier_matrix(dim: u64, inverse: bool) -> Vec<Vec<Complex64>> {
    let scale = 1.0 / (dim as f64).sqrt();
    let sign = if inverse { -1.0 } else { 1.0 };
    (0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| {
                    let angle = sign * TAU * ((j * k) % dim) as f64 / dim as f64;
                    Complex64::from_polar(scale, angle)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-9
    }

    #[test]
    fn permutations_move_amplitudes_without_mixing() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qubit, RegisterKind::Element(5)]);
        let mut state = QState::basis(layout, &[1, 2]);
        state.apply_permutation(|digits| {
            if digits[1] < 5 {
                digits[1] = (digits[1] + digits[0]) % 5;
            }
        });
        assert!(close(state.amplitude(&[1, 3]), Complex64::ONE));
    }

    #[test]
    #[should_panic(expected = "norm drifted")]
    fn non_bijective_maps_are_caught() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qudit(3)]);
        let mut state = QState::basis(layout, &[1]);
        state.apply_qft(&[0], false);
        state.apply_permutation(|digits| digits[0] = digits[0].min(1));
    }

    #[test]
    fn qft_then_inverse_is_identity() {
        let layout = RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Qudit(3),
            RegisterKind::Qubit,
        ]);
        let mut state = QState::basis(layout, &[1, 2, 0]);
        state.apply_qft(&[0, 2], false);
        state.apply_qft(&[0, 2], true);
        assert!(close(state.amplitude(&[1, 2, 0]), Complex64::ONE));
    }

    #[test]
    fn qft_on_a_basis_state_is_a_character() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qudit(4), RegisterKind::Qudit(5)]);
        let mut state = QState::basis(layout, &[3, 1]);
        state.apply_qft(&[0], false);
        for k in 0..4 {
            let expect = Complex64::from_polar(0.5, TAU * (3.0 * k as f64) / 4.0);
            assert!(close(state.amplitude(&[k, 1]), expect));
        }
    }

    #[test]
    fn joint_unitary_reaches_non_adjacent_registers() {
        let layout = RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Qudit(3),
            RegisterKind::Qubit,
        ]);
        let mut state = QState::basis(layout.clone(), &[0, 2, 1]);
        let mut swap = vec![vec![Complex64::ZERO; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                swap[(b * 2 + a) as usize][(a * 2 + b) as usize] = Complex64::ONE;
            }
        }
        state.apply_joint_unitary(&[0, 2], &swap);
        assert!(close(state.amplitude(&[1, 2, 0]), Complex64::ONE));
    }

    #[test]
    fn measurement_collapses_and_renormalizes() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qubit, RegisterKind::Qubit]);
        let mut state = QState::basis(layout, &[0, 0]);
        state.apply_qft(&[0], false);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let digits = state.measure(&[0], &mut rng);
        assert!(close(state.amplitude(&[digits[0], 0]), Complex64::ONE));
    }

    #[test]
    fn appended_registers_start_in_a_product_state() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qubit]);
        let mut state = QState::basis(layout, &[0]);
        state.apply_qft(&[0], false);
        state.append_register(RegisterKind::Element(3), 2);
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(close(state.amplitude(&[0, 2]), r));
        assert!(close(state.amplitude(&[1, 2]), r));
        assert!(close(state.amplitude(&[1, 1]), Complex64::ZERO));
    }
}
