//! Multi-target discrete log codec: the first m informative collision
//! indices.  Decode replays them all as directives and solves the resulting
//! m-by-m system.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::dl::dl_replay_spec;
use super::encoding::Encoding;
use crate::error::Error;
use crate::oracle::{Algorithm, ProblemKind, Transcript};
use crate::tracker::{replay_without_oracle, solve_mdl, Tracker};
use crate::Result;

/// First m informative collision indices; ⊥ when the run produced fewer.
pub fn encode_mdl(t: &Transcript, m: usize) -> Encoding {
    let tracker = Tracker::from_transcript(t);
    let ordinals: Vec<u64> = tracker.informative_events().take(m).map(|e| e.ordinal).collect();
    if ordinals.len() < m {
        Encoding::Bot
    } else {
        Encoding::Mdl { ordinals }
    }
}

fn try_decode_mdl<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
    m: usize,
) -> Result<Vec<u64>> {
    let Encoding::Mdl { ordinals } = enc else {
        return Err(Error::DecodeFailure("not a multi-target codeword".into()));
    };
    let spec = dl_replay_spec(ProblemKind::Mdl { m }, p);
    let run = replay_without_oracle(alg, seed, &spec, ordinals, &[])?;
    solve_mdl(&run.zero, m, p)
}

/// Replay-and-solve; ⊥ and failures fall back to a uniform vector.
pub fn decode_mdl<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
    m: usize,
    fallback: &mut ChaCha12Rng,
) -> Vec<u64> {
    try_decode_mdl(enc, alg, seed, p, m)
        .unwrap_or_else(|_| (0..m).map(|_| fallback.gen_range(0..p)).collect())
}
