//! Gap codecs: collisions here include positive DDH answers, so a forced
//! answer pins a quadratic rather than a linear relation.  Gap discrete log
//! carries one extra bit to choose among the at most two roots; gap CDH
//! additionally reveals the one exponent the collision cannot eliminate.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::dl::{dl_replay_spec, linear_root};
use super::encoding::Encoding;
use crate::algebra::{mul_mod, LinPolyModN};
use crate::error::Error;
use crate::oracle::{Algorithm, ProblemKind, Transcript};
use crate::tracker::{replay_without_oracle, RelationData, Tracker};
use crate::Result;

/// Quadratic in the hidden exponents induced by a forced collision:
/// P_a·P_b − P_c for a DDH answer, or the linear relation itself.  Stored
/// dense over two variables; single-variable games leave the Y entries 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CollisionQuad {
    p: u64,
    xx: u64,
    xy: u64,
    yy: u64,
    x: u64,
    y: u64,
    c: u64,
}

impl CollisionQuad {
    pub(crate) fn from_relation(rel: &RelationData) -> Self {
        match rel {
            RelationData::Linear(poly) => {
                let d = poly.as_mod();
                let p = d.modulus();
                let y = if d.nvars() > 1 { d.coeff(1) } else { 0 };
                Self { p, xx: 0, xy: 0, yy: 0, x: d.coeff(0), y, c: d.constant_term() }
            }
            RelationData::Quadratic { a, b, c } => {
                let p = a.modulus();
                let coeff = |q: &LinPolyModN, var: usize| if q.nvars() > var { q.coeff(var) } else { 0 };
                let (a0, a1, a2) = (a.constant_term(), coeff(a, 0), coeff(a, 1));
                let (b0, b1, b2) = (b.constant_term(), coeff(b, 0), coeff(b, 1));
                let (c0, c1, c2) = (c.constant_term(), coeff(c, 0), coeff(c, 1));
                Self {
                    p,
                    xx: mul_mod(a1, b1, p),
                    xy: (mul_mod(a1, b2, p) + mul_mod(a2, b1, p)) % p,
                    yy: mul_mod(a2, b2, p),
                    x: (mul_mod(a0, b1, p) + mul_mod(b0, a1, p) + p - c1) % p,
                    y: (mul_mod(a0, b2, p) + mul_mod(b0, a2, p) + p - c2) % p,
                    c: (mul_mod(a0, b0, p) + p - c0) % p,
                }
            }
        }
    }

    /// Does the relation constrain X at all?
    pub(crate) fn mentions_x(&self) -> bool {
        self.xx != 0 || self.xy != 0 || self.x != 0
    }

    /// Coefficients (q2, q1, q0) of the univariate in X after fixing Y = y.
    pub(crate) fn in_x(&self, y: u64) -> (u64, u64, u64) {
        let p = self.p;
        let q1 = (mul_mod(self.xy, y, p) + self.x) % p;
        let q0 = (mul_mod(mul_mod(self.yy, y, p), y, p) + mul_mod(self.y, y, p) + self.c) % p;
        (self.xx, q1, q0)
    }

    /// Coefficients of the univariate in Y after fixing X = x.
    pub(crate) fn in_y(&self, x: u64) -> (u64, u64, u64) {
        let p = self.p;
        let q1 = (mul_mod(self.xy, x, p) + self.y) % p;
        let q0 = (mul_mod(mul_mod(self.xx, x, p), x, p) + mul_mod(self.x, x, p) + self.c) % p;
        (self.yy, q1, q0)
    }
}

/// Roots of q2·v² + q1·v + q0 ≡ 0 mod p in increasing order; a nonzero
/// polynomial has at most two.  Identically zero returns an empty list so
/// callers treat the relation as unusable.
pub(crate) fn quad_roots(p: u64, (q2, q1, q0): (u64, u64, u64)) -> Vec<u64> {
    if q2 == 0 && q1 == 0 {
        return Vec::new();
    }
    if q2 == 0 {
        return linear_root(q1, q0, p).into_iter().collect();
    }
    (0..p)
        .filter(|&v| {
            let vv = mul_mod(v, v, p);
            (mul_mod(q2, vv, p) + mul_mod(q1, v, p) + q0) % p == 0
        })
        .collect()
}

/// First informative collision whose induced quadratic in X has the hidden
/// exponent among its roots, plus the bit selecting that root.
pub fn encode_gap_dl(t: &Transcript, x: u64) -> Encoding {
    let tracker = Tracker::from_transcript(t);
    for e in tracker.informative_events() {
        let quad = CollisionQuad::from_relation(&e.relation);
        let roots = quad_roots(quad.p, quad.in_x(0));
        if let Some(pos) = roots.iter().position(|&r| r == x) {
            return Encoding::GapDl { ordinal: e.ordinal, root_bit: pos == 1 };
        }
    }
    Encoding::Bot
}

fn try_decode_gap_dl<A: Algorithm>(enc: &Encoding, alg: &A, seed: u64, p: u64) -> Result<u64> {
    let Encoding::GapDl { ordinal, root_bit } = enc else {
        return Err(Error::DecodeFailure("not a gap discrete log codeword".into()));
    };
    let spec = dl_replay_spec(ProblemKind::GapDl, p);
    let run = replay_without_oracle(alg, seed, &spec, &[*ordinal], &[])?;
    let cut = run.cut.expect("replay with a fired directive always cuts");
    let quad = CollisionQuad::from_relation(&cut.relation);
    let roots = quad_roots(p, quad.in_x(0));
    if roots.is_empty() {
        return Err(Error::DecodeFailure("forced collision has no root".into()));
    }
    Ok(roots[(*root_bit as usize).min(roots.len() - 1)])
}

pub fn decode_gap_dl<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
    fallback: &mut ChaCha12Rng,
) -> u64 {
    try_decode_gap_dl(enc, alg, seed, p).unwrap_or_else(|_| fallback.gen_range(0..p))
}

/// Reveal rule shared by encoder and decoder: a collision mentioning X can
/// eliminate X once Y is known, so Y is the exponent that must be revealed;
/// otherwise the collision only constrains Y and X is revealed.
fn cdh_usable(quad: &CollisionQuad, x: u64, y: u64) -> Option<(u64, bool)> {
    let (revealed, target, coeffs) =
        if quad.mentions_x() { (y, x, quad.in_x(y)) } else { (x, y, quad.in_y(x)) };
    let roots = quad_roots(quad.p, coeffs);
    let pos = roots.iter().position(|&r| r == target)?;
    Some((revealed, pos == 1))
}

/// First informative collision that, given one revealed exponent, pins the
/// other down to at most two candidates.
pub fn encode_gap_cdh(t: &Transcript, x: u64, y: u64) -> Encoding {
    let tracker = Tracker::from_transcript(t);
    for e in tracker.informative_events() {
        let quad = CollisionQuad::from_relation(&e.relation);
        if let Some((revealed, guess_bit)) = cdh_usable(&quad, x, y) {
            return Encoding::GapCdh { ordinal: e.ordinal, revealed, guess_bit };
        }
    }
    Encoding::Bot
}

fn try_decode_gap_cdh<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
) -> Result<(u64, u64)> {
    let Encoding::GapCdh { ordinal, revealed, guess_bit } = enc else {
        return Err(Error::DecodeFailure("not a gap CDH codeword".into()));
    };
    let spec = dl_replay_spec(ProblemKind::GapCdh, p);
    let run = replay_without_oracle(alg, seed, &spec, &[*ordinal], &[])?;
    let cut = run.cut.expect("replay with a fired directive always cuts");
    let quad = CollisionQuad::from_relation(&cut.relation);
    let coeffs = if quad.mentions_x() { quad.in_x(*revealed) } else { quad.in_y(*revealed) };
    let roots = quad_roots(p, coeffs);
    if roots.is_empty() {
        return Err(Error::DecodeFailure("forced collision has no root".into()));
    }
    let solved = roots[(*guess_bit as usize).min(roots.len() - 1)];
    Ok(if quad.mentions_x() { (solved, *revealed) } else { (*revealed, solved) })
}

/// Recovers the full instance pair (x, y); ⊥ and failures fall back to a
/// uniform pair.
pub fn decode_gap_cdh<A: Algorithm>(
    enc: &Encoding,
    alg: &A,
    seed: u64,
    p: u64,
    fallback: &mut ChaCha12Rng,
) -> (u64, u64) {
    try_decode_gap_cdh(enc, alg, seed, p)
        .unwrap_or_else(|_| (fallback.gen_range(0..p), fallback.gen_range(0..p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{GapCdhBsgs, GapDlSquareScan};
    use crate::codecs::games::{CheckedGapCdh, CheckedGapDl};
    use crate::oracle::{run_algorithm, GroupOracle, GroupSpec, Problem, Session};
    use crate::tracker::EventKind;
    use rand::SeedableRng;

    #[test]
    fn square_collision_roots_mod_7() {
        // DDH(g^X, g^X, g^4) = 1 pins X^2 = 4: roots {2, 5}, bit picks 2.
        let mut s = Session::new(
            GroupSpec::known(7),
            Problem::GapDl { x: 2 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedGapDl { inner: GapDlSquareScan { scan_cap: 7 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), Some(2));
        let t = s.finish();

        let tracker = Tracker::from_transcript(&t);
        let first = tracker.informative_events().next().unwrap();
        assert_eq!(first.kind, EventKind::Ddh);
        let quad = CollisionQuad::from_relation(&first.relation);
        assert_eq!(quad_roots(7, quad.in_x(0)), vec![2, 5]);

        let enc = encode_gap_dl(&t, 2);
        assert_eq!(enc, Encoding::GapDl { ordinal: first.ordinal, root_bit: false });
        let mut fb = ChaCha12Rng::seed_from_u64(0);
        assert_eq!(decode_gap_dl(&enc, &alg, 0, 7, &mut fb), 2);
    }

    #[test]
    fn gap_dl_round_trips_every_residue() {
        for p in [7u64, 11, 101] {
            for x in 0..p.min(25) {
                let mut s = Session::new(
                    GroupSpec::known(p),
                    Problem::GapDl { x },
                    ChaCha12Rng::seed_from_u64(x),
                );
                let alg = CheckedGapDl { inner: GapDlSquareScan { scan_cap: p } };
                assert_eq!(run_algorithm(&alg, &mut s, x), Some(x));
                let enc = encode_gap_dl(&s.finish(), x);
                let mut fb = ChaCha12Rng::seed_from_u64(1);
                assert_eq!(decode_gap_dl(&enc, &alg, x, p, &mut fb), x, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn linear_collision_ignores_the_choice_bit() {
        struct Probe;
        impl Algorithm for Probe {
            type Output = Option<u64>;
            fn run(&self, o: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<u64> {
                let h = o.instance_wires()[0];
                let w = o.label(4);
                o.equality(w, h).then_some(4)
            }
        }
        let mut s = Session::new(
            GroupSpec::known(7),
            Problem::GapDl { x: 4 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&Probe, &mut s, 0), Some(4));
        let t = s.finish();
        let enc = encode_gap_dl(&t, 4);
        let Encoding::GapDl { ordinal, root_bit } = enc else { panic!("expected a codeword") };
        assert!(!root_bit);
        let flipped = Encoding::GapDl { ordinal, root_bit: true };
        let mut fb = ChaCha12Rng::seed_from_u64(0);
        assert_eq!(decode_gap_dl(&flipped, &Probe, 0, 7, &mut fb), 4);
    }

    #[test]
    fn cdh_reveals_y_and_substitutes() {
        // Collision 2X - 6 mod 7 mentions X, so y is revealed and the
        // decoder solves for x; checked by brute force over the full square.
        struct TwoXSixProbe;
        impl Algorithm for TwoXSixProbe {
            type Output = Option<usize>;
            fn run(&self, o: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<usize> {
                let hx = o.instance_wires()[0];
                let two_x = o.group_op(hx, hx, crate::oracle::Sign::Add);
                let w6 = o.label(6);
                o.equality(two_x, w6).then_some(0)
            }
        }
        for x in 0..7u64 {
            for y in 0..7u64 {
                let mut s = Session::new(
                    GroupSpec::known(7),
                    Problem::GapCdh { x, y },
                    ChaCha12Rng::seed_from_u64(0),
                );
                let won = run_algorithm(&TwoXSixProbe, &mut s, 0).is_some();
                let t = s.finish();
                assert_eq!(won, 2 * x % 7 == 6, "x={x}");
                let enc = encode_gap_cdh(&t, x, y);
                if !won {
                    assert_eq!(enc, Encoding::Bot);
                    continue;
                }
                match enc {
                    Encoding::GapCdh { revealed, .. } => assert_eq!(revealed, y),
                    _ => panic!("expected a codeword"),
                }
                let mut fb = ChaCha12Rng::seed_from_u64(0);
                assert_eq!(decode_gap_cdh(&enc, &TwoXSixProbe, 0, 7, &mut fb), (x, y));
            }
        }
    }

    #[test]
    fn cdh_bsgs_round_trips() {
        for (x, y) in [(5u64, 9u64), (0, 3), (10, 0), (7, 7), (3, 1)] {
            let mut s = Session::new(
                GroupSpec::known(11),
                Problem::GapCdh { x, y },
                ChaCha12Rng::seed_from_u64(2),
            );
            let alg = CheckedGapCdh { inner: GapCdhBsgs { ops_budget: 22 } };
            assert!(run_algorithm(&alg, &mut s, 2).is_some());
            let enc = encode_gap_cdh(&s.finish(), x, y);
            let mut fb = ChaCha12Rng::seed_from_u64(3);
            assert_eq!(decode_gap_cdh(&enc, &alg, 2, 11, &mut fb), (x, y), "x={x} y={y}");
        }
    }

    #[test]
    fn cdh_y_only_collision_reveals_x() {
        struct YProbe;
        impl Algorithm for YProbe {
            type Output = Option<usize>;
            fn run(&self, o: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<usize> {
                let hy = o.instance_wires()[1];
                let w3 = o.label(3);
                o.equality(w3, hy).then_some(0)
            }
        }
        let (x, y) = (6, 3);
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::GapCdh { x, y },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert!(run_algorithm(&YProbe, &mut s, 0).is_some());
        let enc = encode_gap_cdh(&s.finish(), x, y);
        match enc {
            Encoding::GapCdh { revealed, .. } => assert_eq!(revealed, x),
            _ => panic!("expected a codeword"),
        }
        let mut fb = ChaCha12Rng::seed_from_u64(0);
        assert_eq!(decode_gap_cdh(&enc, &YProbe, 0, 11, &mut fb), (x, y));
    }
}
