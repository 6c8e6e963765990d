//! Deterministic integer factoring at desk scale.
//!
//! Unknown-order encoders factor collision differences to index the prime
//! divisor that carries the group order.  Encoder and decoder must agree on
//! the factor list, so everything here is deterministic: trial division by a
//! fixed sieve, Miller-Rabin with a fixed base set (deterministic below
//! 3.3e24, comfortably past the intended <= 2^96 inputs), and Brent's rho
//! with a fixed constant schedule.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const TRIAL_BOUND: u64 = 10_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Prime factorization `p_1^e_1 * ... * p_k^e_k` with primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Factorization of a `u64`, convenience for known-order group setup.
    pub fn of_u64(n: u64) -> Self {
        factor_integer(&BigUint::from(n))
    }

    pub fn prime_powers_u64(&self) -> Vec<(u64, u32)> {
        self.factors
            .iter()
            .map(|(p, e)| {
                let digits = p.to_u64_digits();
                assert!(digits.len() <= 1, "prime exceeds u64");
                (digits.first().copied().unwrap_or(0), *e)
            })
            .collect()
    }
}

/// Factor `n > 0`.  `n = 1` yields the empty factorization.
pub fn factor_integer(n: &BigUint) -> Factorization {
    assert!(!n.is_zero(), "factor_integer(0) is a contract violation");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();

    let push = |p: BigUint, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };

    let mut d = 2u64;
    while d < TRIAL_BOUND && rest > BigUint::one() {
        let db = BigUint::from(d);
        while (&rest % &db).is_zero() {
            rest /= &db;
            push(db.clone(), &mut factors);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut factors);
            continue;
        }
        let d = rho_split(&m);
        stack.push(&m / &d);
        stack.push(d);
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization { factors }
}

/// Miller-Rabin over the fixed base set.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        if *n == BigUint::from(b) {
            return true;
        }
        if (n % BigUint::from(b)).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'base: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding rho with a deterministic constant schedule.
/// Precondition: `m` is odd, composite, and has no factor below the trial
/// bound, so a split always exists.
fn rho_split(m: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % m;
        let mut y = BigUint::from(2u32);
        let mut g = one.clone();
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut r: u64 = 1;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let chunk = 128.min(r - k);
                for _ in 0..chunk {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % m;
                }
                g = q.gcd(m);
                k += chunk;
            }
            r *= 2;
        }
        if g == *m {
            // Backtrack one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(m);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *m {
            return g;
        }
    }
    unreachable!("rho exhausted its constant schedule")
}

/// Prime divisors of `|x|` that are exactly `n` bits wide, ascending.
pub fn nbit_prime_divisors(x: &BigInt, n: u64) -> Vec<BigUint> {
    let mag = x.abs().to_biguint().expect("abs is non-negative");
    assert!(!mag.is_zero(), "zero has no prime divisors to index");
    factor_integer(&mag)
        .primes()
        .filter(|p| p.bits() == n)
        .cloned()
        .collect()
}
