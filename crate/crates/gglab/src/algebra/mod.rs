//! Exact arithmetic under the trackers: linear polynomials in the hidden
//! exponents, span bases over prime fields and over the integers, and
//! deterministic integer factoring for the unknown-order encoders.

mod factor;
mod poly;
mod span;

pub use factor::{factor_integer, is_probable_prime, nbit_prime_divisors, Factorization};
pub use poly::{LinPolyInt, LinPolyModN};
pub use span::{solve_square_system_mod, SpanBasisModP, SpanBasisZ};

/// Bits needed to address `n` values: `ceil(log2(n))`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n > 0);
    64 - (n - 1).leading_zeros()
}

/// `a * b mod n` without overflow for any `u64` inputs.
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// `base^exp mod n` by square and multiply.
pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Extended gcd: returns `(g, s, t)` with `a*s + b*t = g`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), if a < 0 { -1 } else { 1 }, 0)
    } else {
        let (g, s, t) = egcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// Multiplicative inverse of `a` mod `n`, when `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (g, s, _) = egcd(a as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(n as i128) as u64)
}

/// Combine residues by the Chinese remainder theorem.
///
/// Moduli must be pairwise coprime and their product must fit in `u64`.
pub fn crt(parts: &[(u64, u64)]) -> u64 {
    let mut r: u128 = 0;
    let mut m: u128 = 1;
    for &(ri, mi) in parts {
        let mi = mi as u128;
        let ri = ri as u128 % mi;
        // Solve r + m*k = ri (mod mi).
        let m_red = (m % mi) as u64;
        let inv = inv_mod(m_red, mi as u64).expect("crt moduli must be coprime") as u128;
        let diff = (ri + mi - r % mi) % mi;
        let k = (diff * inv) % mi;
        r += m * k;
        m *= mi;
    }
    r as u64
}
