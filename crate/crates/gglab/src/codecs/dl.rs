//! Discrete log codec: a winning run is compressed to the index of its
//! first informative collision; the decoder replays the algorithm without
//! the oracle, forces that one answer, and reads the exponent off the
//! captured relation.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::encoding::Encoding;
use crate::algebra::{ceil_log2, inv_mod, mul_mod};
use crate::error::Error;
use crate::oracle::{Algorithm, ProblemKind, Transcript};
use crate::tracker::{replay_without_oracle, RelationData, ReplaySpec, Tracker};
use crate::Result;

/// Index of the first informative collision, or ⊥ for a run without one.
pub fn encode_dl(t: &Transcript) -> Encoding {
    let tracker = Tracker::from_transcript(t);
    let first = tracker.informative_events().next().map(|e| e.ordinal);
    match first {
        Some(ordinal) => Encoding::Dl { ordinal },
        None => Encoding::Bot,
    }
}

pub(crate) fn dl_replay_spec(problem: ProblemKind, p: u64) -> ReplaySpec {
    let nvars = match problem {
        ProblemKind::Dl | ProblemKind::GapDl => 1,
        ProblemKind::GapCdh => 2,
        ProblemKind::Mdl { m } => m,
        _ => panic!("not a fixed-instance known-order problem"),
    };
    ReplaySpec { problem, modulus: Some(p), bit_length: ceil_log2(p), nvars }
}

/// Root of a linear relation aX + b ≡ 0 mod p.
pub(crate) fn linear_root(a: u64, b: u64, p: u64) -> Result<u64> {
    let inv = inv_mod(a, p).ok_or_else(|| {
        Error::DecodeFailure("constant relation cannot determine the exponent".into())
    })?;
    Ok(mul_mod((p - b) % p, inv, p))
}

fn try_decode_dl<A: Algorithm>(enc: &Encoding, alg: &A, seed: u64, p: u64) -> Result<u64> {
    let Encoding::Dl { ordinal } = enc else {
        return Err(Error::DecodeFailure("not a discrete log codeword".into()));
    };
    let spec = dl_replay_spec(ProblemKind::Dl, p);
    let run = replay_without_oracle(alg, seed, &spec, &[*ordinal], &[])?;
    let cut = run.cut.expect("replay with a fired directive always cuts");
    let RelationData::Linear(diff) = cut.relation else {
        return Err(Error::DecodeFailure("expected a linear relation".into()));
    };
    let d = diff.as_mod();
    linear_root(d.coeff(0), d.constant_term(), p)
}

/// Replays `alg` under the same seed the encoder saw and solves the forced
/// collision; ⊥ and decode failures fall back to a uniform guess from the
/// shared stream.
pub fn decode_dl<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
    fallback: &mut ChaCha12Rng,
) -> u64 {
    try_decode_dl(enc, alg, seed, p).unwrap_or_else(|_| fallback.gen_range(0..p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::BsgsDl;
    use crate::codecs::games::CheckedDl;
    use crate::oracle::{run_algorithm, GroupOracle, GroupSpec, Problem, Session};
    use rand::SeedableRng;

    fn checked_bsgs_run(p: u64, x: u64, budget: u64, seed: u64) -> (Option<u64>, Transcript) {
        let mut s = Session::new(
            GroupSpec::known(p),
            Problem::Dl { x },
            ChaCha12Rng::seed_from_u64(seed),
        );
        let alg = CheckedDl { inner: BsgsDl { ops_budget: budget } };
        let out = run_algorithm(&alg, &mut s, seed);
        (out, s.finish())
    }

    #[test]
    fn round_trip_bsgs_win() {
        let (out, t) = checked_bsgs_run(11, 7, 8, 3);
        assert_eq!(out, Some(7));
        let enc = encode_dl(&t);
        assert!(!enc.is_bot());
        let alg = CheckedDl { inner: BsgsDl { ops_budget: 8 } };
        let mut fb = ChaCha12Rng::seed_from_u64(99);
        assert_eq!(decode_dl(&enc, &alg, 3, 11, &mut fb), 7);
    }

    #[test]
    fn round_trip_every_residue() {
        for x in 0..11 {
            let (out, t) = checked_bsgs_run(11, x, 8, 3);
            assert_eq!(out, Some(x));
            let enc = encode_dl(&t);
            let alg = CheckedDl { inner: BsgsDl { ops_budget: 8 } };
            let mut fb = ChaCha12Rng::seed_from_u64(0);
            assert_eq!(decode_dl(&enc, &alg, 3, 11, &mut fb), x, "x={x}");
        }
    }

    #[test]
    fn failing_run_encodes_bot_and_falls_back() {
        let (out, t) = checked_bsgs_run(101, 99, 8, 3);
        assert_eq!(out, None);
        let enc = encode_dl(&t);
        assert_eq!(enc, Encoding::Bot);
        let alg = CheckedDl { inner: BsgsDl { ops_budget: 8 } };
        let mut fb = ChaCha12Rng::seed_from_u64(42);
        let decoded = decode_dl(&enc, &alg, 3, 101, &mut fb);
        let mut expect = ChaCha12Rng::seed_from_u64(42);
        assert_eq!(decoded, expect.gen_range(0..101));
    }

    #[test]
    fn immediate_check_decodes_zero() {
        struct ZeroGuess;
        impl Algorithm for ZeroGuess {
            type Output = Option<u64>;
            fn run(&self, _: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<u64> {
                Some(0)
            }
        }
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 0 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedDl { inner: ZeroGuess };
        assert_eq!(run_algorithm(&alg, &mut s, 0), Some(0));
        let t = s.finish();
        let enc = encode_dl(&t);
        assert_eq!(enc, Encoding::Dl { ordinal: 0 });
        let mut fb = ChaCha12Rng::seed_from_u64(0);
        assert_eq!(decode_dl(&enc, &alg, 0, 11, &mut fb), 0);
    }
}
