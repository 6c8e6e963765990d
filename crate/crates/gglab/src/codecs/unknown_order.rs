//! Codec for the unknown-order games: order finding, RSA order finding,
//! root extraction, and repeated squaring.
//!
//! Any informative relation here is an integer identity that the hidden
//! order divides, so the gcd of its coefficients is a nonzero multiple of
//! N (or of one prime factor, in the RSA games).  The encoder points at
//! the first informative collision whose gcd actually exposes the hidden
//! primes and says which n-bit prime divisor(s) to take; the decoder
//! replays up to that collision, recomputes the gcd, factors it, and reads
//! the primes back off the sorted divisor list.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::encoding::Encoding;
use crate::algebra::{is_probable_prime, nbit_prime_divisors, LinPolyInt};
use crate::error::Error;
use crate::oracle::{Algorithm, Transcript};
use crate::tracker::{replay_without_oracle, Poly, RelationData, ReplaySpec, Tracker};
use crate::Result;

/// Hidden order drawn by an unknown-order experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderMessage {
    /// A uniform n-bit prime.
    Prime(u64),
    /// A product of two distinct n-bit primes, stored ascending.
    Rsa(u64, u64),
}

impl OrderMessage {
    pub fn order(&self) -> u64 {
        match *self {
            OrderMessage::Prime(n) => n,
            OrderMessage::Rsa(p, q) => p * q,
        }
    }
}

/// Which message space the codeword addresses and how many collisions the
/// RSA variant spends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVariant {
    Prime,
    /// Both prime factors read off one collision's divisor list.
    RsaOneCollision,
    /// One factor from each of the first two informative collisions.
    RsaTwoCollisions,
}

fn int_coeff_gcd(poly: &LinPolyInt) -> Option<BigInt> {
    let mut g = BigInt::zero();
    for c in poly.coeffs() {
        g = g.gcd(c);
    }
    (!g.is_zero()).then_some(g)
}

fn relation_gcd(rel: &RelationData) -> Option<BigInt> {
    match rel {
        RelationData::Linear(Poly::Int(poly)) => int_coeff_gcd(poly),
        _ => None,
    }
}

fn divisor_list(g: &BigInt, n_bits: u32) -> Vec<u64> {
    nbit_prime_divisors(g, n_bits as u64)
        .iter()
        .map(|d| d.to_u64().expect("n-bit divisor fits in u64"))
        .collect()
}

/// First (position pair, 1-based) whose product is `n`, scanning `a` outer.
fn pair_with_product(a: &[u64], b: &[u64], n: u64) -> Option<(u64, u64)> {
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            if p.checked_mul(q) == Some(n) {
                return Some((i as u64 + 1, j as u64 + 1));
            }
        }
    }
    None
}

/// Point at the informative collision(s) that expose the hidden order.
///
/// `n_bits` is the advertised prime width.  Collisions whose coefficient
/// gcd misses the hidden prime(s) are skipped; if none works the run is
/// unencodable and the codeword is `Bot`.
pub fn encode_unknown_order(
    t: &Transcript,
    variant: OrderVariant,
    n_bits: u32,
    truth: &OrderMessage,
) -> Encoding {
    let tracker = Tracker::from_transcript(t);
    let events: Vec<(u64, Option<BigInt>)> = tracker
        .informative_events()
        .map(|e| (e.ordinal, relation_gcd(&e.relation)))
        .collect();
    match (variant, truth) {
        (OrderVariant::Prime, OrderMessage::Prime(n)) => {
            for (ordinal, g) in &events {
                let Some(g) = g else { continue };
                if let Some(pos) = divisor_list(g, n_bits).iter().position(|d| d == n) {
                    return Encoding::Order { ordinal: *ordinal, divisor_index: pos as u64 + 1 };
                }
            }
            Encoding::Bot
        }
        (OrderVariant::RsaOneCollision, OrderMessage::Rsa(p, q)) => {
            for (ordinal, g) in &events {
                let Some(g) = g else { continue };
                let list = divisor_list(g, n_bits);
                if let Some(indices) = pair_with_product(&list, &list, p * q) {
                    return Encoding::RsaOrder { ordinals: vec![*ordinal], divisor_indices: indices };
                }
            }
            Encoding::Bot
        }
        (OrderVariant::RsaTwoCollisions, OrderMessage::Rsa(p, q)) => {
            // This variant is hard-wired to the first two collisions; there
            // is no scanning past an unusable pair.
            let Some([(o1, g1), (o2, g2)]) = events.first_chunk::<2>() else {
                return Encoding::Bot;
            };
            let (Some(g1), Some(g2)) = (g1, g2) else { return Encoding::Bot };
            let (l1, l2) = (divisor_list(g1, n_bits), divisor_list(g2, n_bits));
            match pair_with_product(&l1, &l2, p * q) {
                Some(indices) => {
                    Encoding::RsaOrder { ordinals: vec![*o1, *o2], divisor_indices: indices }
                }
                None => Encoding::Bot,
            }
        }
        _ => panic!("order codec variant does not match the message"),
    }
}

fn nth_divisor(g: &BigInt, n_bits: u32, index: u64) -> Result<u64> {
    let list = divisor_list(g, n_bits);
    list.get(index as usize - 1)
        .copied()
        .ok_or_else(|| Error::DecodeFailure("divisor index out of range".into()))
}

fn try_decode<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    spec: &ReplaySpec,
    n_bits: u32,
) -> Result<u64> {
    match enc {
        Encoding::Order { ordinal, divisor_index } => {
            let run = replay_without_oracle(alg, seed, spec, &[*ordinal], &[])?;
            let cut = run.cut.ok_or(Error::DecodeFailure("replay never hit the cut".into()))?;
            let g = relation_gcd(&cut.relation)
                .ok_or(Error::DecodeFailure("cut relation has no integer gcd".into()))?;
            nth_divisor(&g, n_bits, *divisor_index)
        }
        Encoding::RsaOrder { ordinals, divisor_indices: (i1, i2) } => {
            let run = replay_without_oracle(alg, seed, spec, ordinals, &[])?;
            let cut = run.cut.ok_or(Error::DecodeFailure("replay never hit the cut".into()))?;
            let g_last = relation_gcd(&cut.relation)
                .ok_or(Error::DecodeFailure("cut relation has no integer gcd".into()))?;
            let (p, q) = match ordinals.len() {
                1 => (nth_divisor(&g_last, n_bits, *i1)?, nth_divisor(&g_last, n_bits, *i2)?),
                2 => {
                    // The cut snapshots the second directive; the first
                    // directive's relation is the earliest zero-set row.
                    let first = cut
                        .zero
                        .int_polys()
                        .first()
                        .and_then(int_coeff_gcd)
                        .ok_or(Error::DecodeFailure("first collision missing from replay".into()))?;
                    (nth_divisor(&first, n_bits, *i1)?, nth_divisor(&g_last, n_bits, *i2)?)
                }
                _ => return Err(Error::DecodeFailure("unsupported collision count".into())),
            };
            Ok(p * q)
        }
        _ => Err(Error::DecodeFailure("not an order codeword".into())),
    }
}

/// All primes of exactly `n` bits, ascending.
pub fn nbit_primes(n: u32) -> Vec<u64> {
    assert!((2..=24).contains(&n), "prime width out of range");
    let lo = 1u64 << (n - 1);
    (lo..lo << 1).filter(|&v| is_probable_prime(&BigUint::from(v))).collect()
}

fn sample_message(variant: OrderVariant, n_bits: u32, rng: &mut ChaCha12Rng) -> u64 {
    let primes = nbit_primes(n_bits);
    match variant {
        OrderVariant::Prime => primes[rng.gen_range(0..primes.len())],
        OrderVariant::RsaOneCollision | OrderVariant::RsaTwoCollisions => {
            assert!(primes.len() >= 2, "no n-bit prime pair exists");
            let i = rng.gen_range(0..primes.len());
            let mut j = rng.gen_range(0..primes.len() - 1);
            if j >= i {
                j += 1;
            }
            primes[i] * primes[j]
        }
    }
}

/// Recover the hidden order, falling back to a uniform draw from the
/// message space when the codeword is `Bot` or the replay fails.
pub fn decode_unknown_order<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    spec: &ReplaySpec,
    variant: OrderVariant,
    n_bits: u32,
    fallback: &mut ChaCha12Rng,
) -> u64 {
    match enc {
        Encoding::Bot => sample_message(variant, n_bits, fallback),
        other => try_decode(other, alg, seed, spec, n_bits)
            .unwrap_or_else(|_| sample_message(variant, n_bits, fallback)),
    }
}
