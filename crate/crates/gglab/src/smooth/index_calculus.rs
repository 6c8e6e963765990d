//! Plain index calculus on a concrete smooth session: collect random smooth
//! relations g^r h^e, solve the linear system per prime-power factor of the
//! group order, and verify the candidate in-model before returning it.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::{crt, Factorization};
use crate::oracle::{Sign, WireId};
use crate::{Error, Result};

use super::{eliminate_mod_prime_power, SmoothSession};

fn scalar(session: &mut SmoothSession, w: WireId, k: u64) -> WireId {
    if k == 0 {
        return session.label(0);
    }
    let bits = 64 - k.leading_zeros();
    let mut acc = w;
    for bit in (0..bits - 1).rev() {
        acc = session.group_op(acc, acc, Sign::Add);
        if (k >> bit) & 1 == 1 {
            acc = session.group_op(acc, w, Sign::Add);
        }
    }
    acc
}

fn solve(rows: &[Vec<u64>], unknowns: usize, factors: &[(u64, u64)]) -> Option<u64> {
    let mut parts = Vec::with_capacity(factors.len());
    for &(p, pk) in factors {
        let mut local: Vec<Vec<u64>> =
            rows.iter().map(|row| row.iter().map(|&v| v % pk).collect()).collect();
        let pivots = eliminate_mod_prime_power(&mut local, unknowns, pk, p);
        if pivots.len() < unknowns {
            return None;
        }
        parts.push((local[0][unknowns], pk));
    }
    Some(crt(&parts))
}

/// Finds x with g^x = h. Each relation draw multiplies random powers g^r h^e
/// and asks the smoothing gate; a hit contributes the equation
/// r + e x = c_1 z_1 + ... + c_b z_b over the unknowns (x, z_1..z_b). Once the
/// system determines them modulo every prime-power factor of the order, the
/// CRT-combined candidate is checked with an equality gate. Fails when the
/// relation budget runs out before a verified solution appears.
pub fn index_calculus_dl(
    session: &mut SmoothSession,
    g: WireId,
    h: WireId,
    budget: u64,
    rng: &mut ChaCha12Rng,
) -> Result<u64> {
    assert!(session.is_concrete(), "index calculus needs canonical representatives");
    let n = session.order();
    let unknowns = 1 + session.base().size();
    let factors: Vec<(u64, u64)> = Factorization::of_u64(n)
        .prime_powers_u64()
        .into_iter()
        .map(|(p, k)| (p, p.pow(k)))
        .collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for _ in 0..budget {
        let r = rng.gen_range(0..n);
        let e = rng.gen_range(0..n);
        let lhs = scalar(session, g, r);
        let rhs = scalar(session, h, e);
        let w = session.group_op(lhs, rhs, Sign::Add);
        let Some(c) = session.smoothing(w) else { continue };
        let mut row = Vec::with_capacity(unknowns + 1);
        row.push(e);
        row.extend(c.iter().map(|&ci| (n - ci % n) % n));
        row.push((n - r) % n);
        rows.push(row);
        if rows.len() <= session.base().size() {
            continue;
        }
        if let Some(x) = solve(&rows, unknowns, &factors) {
            let candidate = scalar(session, g, x);
            if session.equality(candidate, h) {
                return Ok(x);
            }
        }
    }
    Err(Error::SingularSystem { modulus: n })
}
