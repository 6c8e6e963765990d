//! Mixed-radix register layouts for the statevector simulator. Element and
//! ring registers get one extra basis index for the invalid element, so a
//! register over Z_N has dimension N + 1 with index N playing the role of
//! the blank.

/// One register in a layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegisterKind {
    Qubit,
    Qudit(u64),
    Element(u64),
    Ring(u64),
}

impl RegisterKind {
    pub fn dim(&self) -> u64 {
        match *self {
            RegisterKind::Qubit => 2,
            RegisterKind::Qudit(d) => d,
            RegisterKind::Element(n) | RegisterKind::Ring(n) => n + 1,
        }
    }

    /// The basis index standing for the invalid element, if the kind has one.
    pub fn blank(&self) -> Option<u64> {
        match *self {
            RegisterKind::Element(n) | RegisterKind::Ring(n) => Some(n),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match *self {
            RegisterKind::Element(n) | RegisterKind::Ring(n) => Some(n),
            _ => None,
        }
    }
}

/// Ordered registers with register 0 most significant in the basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    kinds: Vec<RegisterKind>,
    strides: Vec<u64>,
    dim: u64,
}

impl RegisterLayout {
    pub const MAX_AMPLITUDES: u64 = 1 << 22;

    pub fn new(kinds: Vec<RegisterKind>) -> Self {
        assert!(!kinds.is_empty(), "a layout needs at least one register");
        let mut dim: u64 = 1;
        for kind in &kinds {
            assert!(kind.dim() >= 2, "registers need at least two basis states");
            dim = dim
                .checked_mul(kind.dim())
                .filter(|&d| d <= Self::MAX_AMPLITUDES)
                .expect("layout exceeds the amplitude cap");
        }
        let mut strides = vec![1u64; kinds.len()];
        for r in (0..kinds.len().saturating_sub(1)).rev() {
            strides[r] = strides[r + 1] * kinds[r + 1].dim();
        }
        Self { kinds, strides, dim }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kind(&self, register: usize) -> RegisterKind {
        self.kinds[register]
    }

    pub fn kinds(&self) -> &[RegisterKind] {
        &self.kinds
    }

    /// Total dimension of the joint basis.
    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn dim_of(&self, register: usize) -> u64 {
        self.kinds[register].dim()
    }

    pub fn stride(&self, register: usize) -> u64 {
        self.strides[register]
    }

    pub fn digit(&self, basis: u64, register: usize) -> u64 {
        (basis / self.strides[register]) % self.kinds[register].dim()
    }

    pub fn decode(&self, basis: u64) -> Vec<u64> {
        (0..self.len()).map(|r| self.digit(basis, r)).collect()
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        assert_eq!(digits.len(), self.len(), "digit width mismatch");
        digits
            .iter()
            .zip(&self.kinds)
            .zip(&self.strides)
            .map(|((&d, kind), &stride)| {
                assert!(d < kind.dim(), "digit out of range");
                d * stride
            })
            .sum()
    }

    /// The layout with one more register appended at the least significant
    /// position.
    pub fn with_register(&self, kind: RegisterKind) -> Self {
        let mut kinds = self.kinds.clone();
        kinds.push(kind);
        Self::new(kinds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_cover_the_mixed_radix_basis() {
        let layout = RegisterLayout::new(vec![
            RegisterKind::Qubit,
            RegisterKind::Element(5),
            RegisterKind::Qudit(3),
        ]);
        assert_eq!(layout.dim(), 2 * 6 * 3);
        assert_eq!(layout.stride(0), 18);
        assert_eq!(layout.stride(1), 3);
        assert_eq!(layout.stride(2), 1);
        for basis in 0..layout.dim() {
            let digits = layout.decode(basis);
            assert_eq!(layout.encode(&digits), basis);
        }
        assert_eq!(layout.kind(1).blank(), Some(5));
        assert_eq!(layout.kind(0).blank(), None);
    }

    #[test]
    fn appending_keeps_old_registers_most_significant() {
        let layout = RegisterLayout::new(vec![RegisterKind::Qubit, RegisterKind::Qubit]);
        let wider = layout.with_register(RegisterKind::Element(3));
        assert_eq!(wider.len(), 3);
        assert_eq!(wider.stride(0), 8);
        assert_eq!(wider.encode(&[1, 0, 2]), 10);
    }

    #[test]
    #[should_panic(expected = "amplitude cap")]
    fn oversized_layouts_are_rejected() {
        RegisterLayout::new(vec![RegisterKind::Element(1 << 22), RegisterKind::Qubit]);
    }
}
