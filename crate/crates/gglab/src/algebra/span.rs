//! Span bases for the zero set of vanishing relations.
//!
//! Rows are stored variable-major, `[a_1, ..., a_t, b]`, so that pivots land
//! on variables first and the constant column last.  The mod-p basis is kept
//! in reduced row echelon form; the integer basis in Hermite normal form.
//! Membership in the integer basis means membership as an *integer*
//! combination: `[15]` spans `45` but not `10`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{inv_mod, mul_mod, LinPolyInt, LinPolyModN};
use crate::{Error, Result};

fn row_of_mod(p: &LinPolyModN) -> Vec<u64> {
    let mut row: Vec<u64> = p.coeffs()[1..].to_vec();
    row.push(p.constant_term());
    row
}

fn row_of_int(p: &LinPolyInt) -> Vec<BigInt> {
    let mut row: Vec<BigInt> = p.coeffs()[1..].to_vec();
    row.push(p.constant_term().clone());
    row
}

/// RREF basis for a subspace of relation vectors over `Z_p`.
#[derive(Debug, Clone)]
pub struct SpanBasisModP {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl SpanBasisModP {
    /// `p` must be prime: the reduction divides by pivots.
    pub fn new(p: u64, nvars: usize) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        Self { p, width: nvars + 1, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nvars(&self) -> usize {
        self.width - 1
    }

    /// Pivot variable indices, ascending.  A pivot on the constant column is
    /// possible only if a non-vanishing relation was inserted; it is not a
    /// variable and is not reported here.
    pub fn pivot_vars(&self) -> Vec<usize> {
        self.pivots.iter().copied().filter(|&c| c < self.width - 1).collect()
    }

    /// Variables that are not pivots: the positions a decoder must have
    /// revealed to solve the system for the rest.
    pub fn free_vars(&self) -> Vec<usize> {
        let pivots = self.pivot_vars();
        (0..self.nvars()).filter(|v| !pivots.contains(v)).collect()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = (*vi + (self.p - mul_mod(c, *ri, self.p))) % self.p;
                }
            }
        }
    }

    /// Is the relation in the span?  The zero polynomial always is.
    pub fn contains(&self, poly: &LinPolyModN) -> bool {
        assert_eq!(poly.modulus(), self.p, "mixed moduli");
        assert_eq!(poly.nvars(), self.width - 1, "mixed widths");
        let mut v = row_of_mod(poly);
        self.reduce(&mut v);
        v.iter().all(|&c| c == 0)
    }

    /// Insert a relation.  Returns true when the rank grows, i.e. the
    /// relation was informative; a spanned relation leaves the basis alone.
    pub fn insert(&mut self, poly: &LinPolyModN) -> bool {
        assert_eq!(poly.modulus(), self.p, "mixed moduli");
        assert_eq!(poly.nvars(), self.width - 1, "mixed widths");
        let mut v = row_of_mod(poly);
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = inv_mod(v[piv], self.p).expect("prime modulus");
        for c in v.iter_mut() {
            *c = mul_mod(*c, inv, self.p);
        }
        // Eliminate the new pivot from existing rows, then keep rows sorted
        // by pivot column so reduction stays triangular.
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (ri, vi) in row.iter_mut().zip(&v) {
                    *ri = (*ri + (self.p - mul_mod(c, *vi, self.p))) % self.p;
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > piv).unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, piv);
        true
    }

    /// Solve the recorded relations for all variables, requiring every
    /// variable to be a pivot.  Equations read `a.x + b = 0`.
    pub fn solve_all(&self) -> Result<Vec<u64>> {
        if self.pivot_vars().len() != self.nvars() {
            return Err(Error::SingularSystem { modulus: self.p });
        }
        let mut sol = vec![0u64; self.nvars()];
        // RREF with full variable rank: each row is X_piv + b = 0.
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if piv < self.nvars() {
                sol[piv] = (self.p - row[self.width - 1]) % self.p;
            }
        }
        Ok(sol)
    }
}

/// Hermite-normal-form basis for an integer lattice of relation vectors.
#[derive(Debug, Clone, Default)]
pub struct SpanBasisZ {
    width: usize,
    rows: Vec<Vec<BigInt>>,
}

impl SpanBasisZ {
    pub fn new(nvars: usize) -> Self {
        Self { width: nvars + 1, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Integer-combination membership via greedy reduction against the HNF.
    pub fn contains(&self, poly: &LinPolyInt) -> bool {
        assert_eq!(poly.nvars(), self.width - 1, "mixed widths");
        let mut v = row_of_int(poly);
        for row in &self.rows {
            let piv = row.iter().position(|c| !c.is_zero()).expect("no zero rows kept");
            if !(&v[piv] % &row[piv]).is_zero() {
                return false;
            }
            let q = &v[piv] / &row[piv];
            if !q.is_zero() {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi -= &q * ri;
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    /// Insert a relation vector; returns true when the lattice grows.
    pub fn insert(&mut self, poly: &LinPolyInt) -> bool {
        if self.contains(poly) {
            return false;
        }
        self.rows.push(row_of_int(poly));
        self.rehnf();
        true
    }

    /// Raw generator insert for callers that build moduli lattices directly.
    pub fn insert_row(&mut self, row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.width, "mixed widths");
        let mut probe = row.clone();
        probe.rotate_right(1); // contains() takes poly layout; build one
        let poly_coeffs = probe;
        let poly = LinPolyInt::from_coeffs(poly_coeffs);
        if self.contains(&poly) {
            return false;
        }
        self.rows.push(row);
        self.rehnf();
        true
    }

    fn rehnf(&mut self) {
        let width = self.width;
        let mut rows = std::mem::take(&mut self.rows);
        let mut out: Vec<Vec<BigInt>> = Vec::new();
        let mut col = 0;
        while col < width && !rows.is_empty() {
            loop {
                let mut live: Vec<usize> =
                    (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
                if live.is_empty() {
                    break;
                }
                if live.len() == 1 {
                    let r = rows.swap_remove(live[0]);
                    out.push(r);
                    break;
                }
                // Reduce all live rows by the one with smallest |entry|.
                live.sort_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
                let base = live[0];
                for &i in &live[1..] {
                    let q = &rows[i][col] / &rows[base][col];
                    for k in 0..width {
                        let sub = &q * &rows[base][k];
                        rows[i][k] -= sub;
                    }
                }
                rows.retain(|r| r.iter().any(|c| !c.is_zero()));
            }
            col += 1;
        }
        // Positive pivots, entries above each pivot reduced into [0, pivot).
        out.sort_by_key(|r| r.iter().position(|c| !c.is_zero()).unwrap_or(width));
        for i in 0..out.len() {
            let piv = out[i].iter().position(|c| !c.is_zero()).expect("nonzero row");
            if out[i][piv].is_negative() {
                for c in out[i].iter_mut() {
                    *c = -std::mem::take(c);
                }
            }
            let pivot_val = out[i][piv].clone();
            for j in 0..i {
                let q = out[j][piv].div_floor(&pivot_val);
                if !q.is_zero() {
                    for k in 0..self.width {
                        let sub = &q * &out[i][k];
                        out[j][k] -= sub;
                    }
                }
            }
        }
        self.rows = out;
    }
}

/// Solve `m` independent relations `a.x + b = 0` in `m` variables over `Z_p`.
///
/// Returns the unique solution or [`Error::SingularSystem`].
pub fn solve_square_system_mod(equations: &[LinPolyModN], p: u64) -> Result<Vec<u64>> {
    let m = equations.len();
    let mut aug: Vec<Vec<u64>> = equations
        .iter()
        .map(|eq| {
            assert_eq!(eq.modulus(), p, "mixed moduli");
            assert_eq!(eq.nvars(), m, "system must be square");
            let mut row: Vec<u64> = (0..m).map(|v| eq.coeff(v)).collect();
            row.push((p - eq.constant_term() % p) % p); // a.x = -b
            row
        })
        .collect();

    for col in 0..m {
        let Some(pivot_row) = (col..m).find(|&r| aug[r][col] != 0) else {
            return Err(Error::SingularSystem { modulus: p });
        };
        aug.swap(col, pivot_row);
        let inv = inv_mod(aug[col][col], p).expect("prime modulus");
        for c in aug[col].iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
        for r in 0..m {
            if r != col && aug[r][col] != 0 {
                let f = aug[r][col];
                let base = aug[col].clone();
                for (rc, bc) in aug[r].iter_mut().zip(&base) {
                    *rc = (*rc + (p - mul_mod(f, *bc, p))) % p;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[m]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn poly(p: u64, coeffs: &[u64]) -> LinPolyModN {
        LinPolyModN::from_coeffs(p, coeffs.to_vec())
    }

    fn ipoly(coeffs: &[i64]) -> LinPolyInt {
        LinPolyInt::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn span_membership_mod_p() {
        // Span of {X1 - 3} over Z_7: contains 2*X1 - 6, not X1 + 1.
        let mut basis = SpanBasisModP::new(7, 1);
        assert!(basis.insert(&poly(7, &[4, 1]))); // X1 + 4 = X1 - 3
        assert!(basis.contains(&poly(7, &[1, 2]))); // 2X1 + 1 = 2(X1 - 3)
        assert!(!basis.contains(&poly(7, &[1, 1])));
        assert!(basis.contains(&poly(7, &[0, 0])));
        assert!(!basis.insert(&poly(7, &[1, 2])));
        assert_eq!(basis.rank(), 1);
    }

    #[test]
    fn pivots_and_free_vars() {
        let mut basis = SpanBasisModP::new(11, 3);
        basis.insert(&poly(11, &[5, 1, 2, 0]));
        basis.insert(&poly(11, &[1, 0, 3, 0]));
        assert_eq!(basis.pivot_vars(), vec![0, 1]);
        assert_eq!(basis.free_vars(), vec![2]);
    }

    #[test]
    fn z_span_is_integer_combination() {
        let mut basis = SpanBasisZ::new(0);
        basis.insert(&ipoly(&[15]));
        assert!(basis.contains(&ipoly(&[45])));
        assert!(!basis.contains(&ipoly(&[10])));
        // gcd via HNF: {6, 10} spans exactly the multiples of 2.
        let mut b2 = SpanBasisZ::new(0);
        b2.insert(&ipoly(&[6]));
        b2.insert(&ipoly(&[10]));
        assert!(b2.contains(&ipoly(&[4])));
        assert!(!b2.contains(&ipoly(&[3])));
        assert_eq!(b2.rank(), 1);
    }

    #[test]
    fn z_span_two_vars() {
        let mut basis = SpanBasisZ::new(2);
        basis.insert(&ipoly(&[0, 2, 0]));
        basis.insert(&ipoly(&[0, 0, 3]));
        assert!(basis.contains(&ipoly(&[0, 4, 3])));
        assert!(!basis.contains(&ipoly(&[0, 1, 3])));
        assert!(!basis.contains(&ipoly(&[1, 2, 3])));
    }

    #[test]
    fn solve_unique_system() {
        // X1 + 2*X2 = 5, 3*X2 = 9 over Z_11: X2 = 3, X1 = 10.
        let eqs = vec![poly(11, &[6, 1, 2]), poly(11, &[2, 0, 3])];
        assert_eq!(solve_square_system_mod(&eqs, 11).unwrap(), vec![10, 3]);
    }

    #[test]
    fn solve_rejects_singular() {
        let eqs = vec![poly(11, &[1, 1, 2]), poly(11, &[2, 2, 4])];
        assert!(matches!(
            solve_square_system_mod(&eqs, 11),
            Err(crate::Error::SingularSystem { modulus: 11 })
        ));
    }
}
