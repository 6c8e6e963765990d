//! Linear polynomials in the hidden exponents.
//!
//! Every element wire a generic algorithm can build carries a polynomial
//! `b + a_1*X_1 + ... + a_t*X_t`: the constant comes from labeling gates, the
//! variable part from instance wires and challenge wires.  Known-order
//! sessions reduce coefficients mod N; unknown-order sessions keep them as
//! exact integers so collision differences can be factored later.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

use super::mul_mod;

/// Linear polynomial with coefficients in `Z_N`.
///
/// `coeffs[0]` is the constant term, `coeffs[1 + i]` the coefficient of
/// variable `i`.  Arithmetic requires matching modulus and width; a mismatch
/// is a caller bug and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinPolyModN {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl LinPolyModN {
    pub fn zero(modulus: u64, nvars: usize) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self { modulus, coeffs: vec![0; nvars + 1] }
    }

    pub fn constant(modulus: u64, nvars: usize, c: u64) -> Self {
        let mut p = Self::zero(modulus, nvars);
        p.coeffs[0] = c % modulus;
        p
    }

    pub fn variable(modulus: u64, nvars: usize, var: usize) -> Self {
        let mut p = Self::zero(modulus, nvars);
        assert!(var < nvars, "variable index out of range");
        p.coeffs[1 + var] = 1 % modulus;
        p
    }

    /// Build from raw `[constant, a_1, ..., a_t]` coefficients, reducing mod N.
    pub fn from_coeffs(modulus: u64, coeffs: Vec<u64>) -> Self {
        assert!(modulus > 0 && !coeffs.is_empty());
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Self { modulus, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> u64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, var: usize) -> u64 {
        self.coeffs[1 + var]
    }

    /// Raw layout `[constant, a_1, ..., a_t]`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mixed widths");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % self.modulus)
            .collect();
        Self { modulus: self.modulus, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + self.modulus - b) % self.modulus)
            .collect();
        Self { modulus: self.modulus, coeffs }
    }

    pub fn scale(&self, k: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, k, self.modulus)).collect();
        Self { modulus: self.modulus, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars(), "evaluation point width");
        let mut acc = self.coeffs[0];
        for (i, &x) in point.iter().enumerate() {
            acc = (acc + mul_mod(self.coeffs[1 + i], x % self.modulus, self.modulus))
                % self.modulus;
        }
        acc
    }
}

/// Linear polynomial with integer coefficients, for unknown-order groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinPolyInt {
    coeffs: Vec<BigInt>,
}

impl LinPolyInt {
    pub fn zero(nvars: usize) -> Self {
        Self { coeffs: vec![BigInt::zero(); nvars + 1] }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.coeffs[0] = c.into();
        p
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut p = Self::zero(nvars);
        assert!(var < nvars, "variable index out of range");
        p.coeffs[1 + var] = BigInt::from(1);
        p
    }

    /// Build from raw `[constant, a_1, ..., a_t]` coefficients.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn coeff(&self, var: usize) -> &BigInt {
        &self.coeffs[1 + var]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mixed widths");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mixed widths");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars(), "evaluation point width");
        let mut acc = self.coeffs[0].clone();
        for (i, x) in point.iter().enumerate() {
            acc += &self.coeffs[1 + i] * x;
        }
        acc
    }

    /// Largest absolute coefficient, for the `|coeff| <= 2^T` growth check.
    pub fn max_abs_coeff(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_biguint().expect("abs is non-negative"))
            .max()
            .unwrap_or_else(BigUint::zero)
    }

    /// The polynomial mod N, used when an unknown-order session is compared
    /// against the concrete group it secretly runs over.
    pub fn reduce_mod(&self, modulus: u64) -> LinPolyModN {
        let m = BigInt::from(modulus);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor_ref(&m);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect();
        LinPolyModN { modulus, coeffs }
    }
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.sign() == Sign::Minus {
            r + m
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_poly_arithmetic() {
        // X1 + 3 and 2*X1 + 10 over Z_11.
        let a = LinPolyModN::variable(11, 2, 0).add(&LinPolyModN::constant(11, 2, 3));
        let b = LinPolyModN::variable(11, 2, 0).scale(2).add(&LinPolyModN::constant(11, 2, 10));
        let diff = b.sub(&a);
        assert_eq!(diff.coeffs(), &[7, 1, 0]);
        assert_eq!(diff.eval(&[4, 9]), 0); // 4 + 7 = 11 = 0 mod 11
        assert!(!diff.is_zero());
    }

    #[test]
    fn int_poly_eval_and_growth() {
        let mut p = LinPolyInt::constant(1, 5);
        for _ in 0..10 {
            p = p.add(&p); // doubling: 5 * 2^10
        }
        assert_eq!(p.constant_term(), &BigInt::from(5 * 1024));
        assert_eq!(p.max_abs_coeff(), BigUint::from(5120u32));
        let q = p.sub(&LinPolyInt::variable(1, 0).add(&LinPolyInt::variable(1, 0)));
        assert_eq!(q.eval(&[BigInt::from(2560)]), BigInt::zero());
    }

    #[test]
    fn reduce_mod_handles_negatives() {
        let p = LinPolyInt::constant(1, -3).add(&LinPolyInt::variable(1, 0));
        let r = p.reduce_mod(7);
        assert_eq!(r.coeffs(), &[4, 1]);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_moduli_panic() {
        let a = LinPolyModN::zero(7, 1);
        let b = LinPolyModN::zero(11, 1);
        let _ = a.add(&b);
    }
}
