//! Checked game wrappers.  Each one runs an inner adversary, then verifies
//! its claimed output through the oracle itself, inside the same metered
//! run.  A verified win therefore always leaves a gate the encoder can
//! point at, and the claimed answer is correct by construction: the
//! verification gates compare true hidden exponents.
//!
//! Budget convention: wrappers spend gates for their checks (one labeling
//! per claimed exponent, a short ladder in unknown-order groups); callers
//! size the inner algorithm's budget so the sum stays within the configured
//! total.

use rand_chacha::ChaCha12Rng;

use crate::algorithms::scalar_mul;
use crate::oracle::{Algorithm, GroupOracle, Sign, WireId};

/// Discrete log with an appended output check: label the claim, compare it
/// to the instance.  Costs one labeling and one equality.
#[derive(Debug, Clone, Copy)]
pub struct CheckedDl<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Option<u64>>> Algorithm for CheckedDl<A> {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<u64> {
        let z = self.inner.run(oracle, rng)?;
        let h = oracle.instance_wires()[0];
        let wz = oracle.label(z);
        oracle.equality(wz, h).then_some(z)
    }
}

/// Multi-target discrete log, all-or-nothing: every claimed exponent is
/// labeled and compared to its target.  Costs m labelings and m equalities.
#[derive(Debug, Clone, Copy)]
pub struct CheckedMdl<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Vec<Option<u64>>>> Algorithm for CheckedMdl<A> {
    type Output = Option<Vec<u64>>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<Vec<u64>> {
        let claims = self.inner.run(oracle, rng);
        let targets = oracle.instance_wires();
        if claims.len() != targets.len() {
            return None;
        }
        let mut out = Vec::with_capacity(claims.len());
        for (claim, h) in claims.into_iter().zip(targets) {
            let z = claim?;
            let wz = oracle.label(z);
            if !oracle.equality(wz, h) {
                return None;
            }
            out.push(z);
        }
        Some(out)
    }
}

/// Gap discrete log: same check as plain DL.  The winning equality is a
/// linear fallback for encoders even when the solver's own evidence was a
/// DDH answer.
#[derive(Debug, Clone, Copy)]
pub struct CheckedGapDl<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Option<u64>>> Algorithm for CheckedGapDl<A> {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<u64> {
        let z = self.inner.run(oracle, rng)?;
        let h = oracle.instance_wires()[0];
        let wz = oracle.label(z);
        oracle.equality(wz, h).then_some(z)
    }
}

/// Gap CDH: the winning wire is checked with one DDH query against the two
/// instance wires, costing no element gates at all.
#[derive(Debug, Clone, Copy)]
pub struct CheckedGapCdh<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Option<WireId>>> Algorithm for CheckedGapCdh<A> {
    type Output = Option<WireId>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<WireId> {
        let w = self.inner.run(oracle, rng)?;
        let inst = oracle.instance_wires();
        oracle.ddh(inst[0], inst[1], w).then_some(w)
    }
}

/// Forwarding shim that remembers which wires came out of the challenge
/// oracle, so the wrapper can verify answers against them afterwards.
struct ChalRecorder<'a> {
    inner: &'a mut dyn GroupOracle,
    chals: Vec<WireId>,
}

impl GroupOracle for ChalRecorder<'_> {
    fn order_bits(&self) -> u32 {
        self.inner.order_bits()
    }

    fn published_order(&self) -> Option<u64> {
        self.inner.published_order()
    }

    fn generator(&self) -> WireId {
        self.inner.generator()
    }

    fn instance_wires(&self) -> Vec<WireId> {
        self.inner.instance_wires()
    }

    fn label(&mut self, value: u64) -> WireId {
        self.inner.label(value)
    }

    fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId {
        self.inner.group_op(a, b, sign)
    }

    fn equality(&mut self, a: WireId, b: WireId) -> bool {
        self.inner.equality(a, b)
    }

    fn ddh(&mut self, a: WireId, b: WireId, c: WireId) -> bool {
        self.inner.ddh(a, b, c)
    }

    fn dl(&mut self, a: WireId) -> Option<u64> {
        self.inner.dl(a)
    }

    fn chal(&mut self) -> WireId {
        let w = self.inner.chal();
        self.chals.push(w);
        w
    }
}

/// One-more discrete log: every drawn challenge must come back with a
/// verified exponent.  Costs one labeling and one equality per challenge.
#[derive(Debug, Clone, Copy)]
pub struct CheckedOmdl<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Vec<Option<u64>>>> Algorithm for CheckedOmdl<A> {
    type Output = Option<Vec<u64>>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<Vec<u64>> {
        let (claims, chal_wires) = {
            let mut shim = ChalRecorder { inner: oracle, chals: Vec::new() };
            let claims = self.inner.run(&mut shim, rng);
            (claims, shim.chals)
        };
        if claims.len() != chal_wires.len() {
            return None;
        }
        let mut out = Vec::with_capacity(claims.len());
        for (claim, c) in claims.into_iter().zip(chal_wires) {
            let z = claim?;
            let wz = oracle.label(z);
            if !oracle.equality(wz, c) {
                return None;
            }
            out.push(z);
        }
        Some(out)
    }
}

/// Order claim in an unknown-order group.  The labeling gate is disabled
/// there, so the check builds the identity as g - g and ladders g up to the
/// claim: about 2 log z group operations plus one equality.  Accepts any
/// nonzero multiple of the order, which is still enough for the codecs:
/// the claim itself is what gets verified against ground truth outside.
#[derive(Debug, Clone, Copy)]
pub struct CheckedOrderClaim<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Option<u64>>> Algorithm for CheckedOrderClaim<A> {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<u64> {
        let z = self.inner.run(oracle, rng)?;
        if z == 0 {
            return None;
        }
        let g = oracle.generator();
        let identity = oracle.group_op(g, g, Sign::Sub);
        let wz = scalar_mul(oracle, g, z);
        oracle.equality(wz, identity).then_some(z)
    }
}

/// Root claim (e, w): verified by laddering w up to e-fold and comparing
/// with the instance.  Costs about 2 log e group operations plus one
/// equality.
#[derive(Debug, Clone, Copy)]
pub struct CheckedRoot<A> {
    pub inner: A,
}

impl<A: Algorithm<Output = Option<(u64, WireId)>>> Algorithm for CheckedRoot<A> {
    type Output = Option<(u64, WireId)>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<(u64, WireId)> {
        let (e, w) = self.inner.run(oracle, rng)?;
        if e < 2 {
            return None;
        }
        let h = oracle.instance_wires()[0];
        let we = scalar_mul(oracle, w, e);
        oracle.equality(we, h).then_some((e, w))
    }
}

/// Repeated-squaring claim: the verifier squares the generator t times and
/// compares.  The chain costs t group operations, charged to the verifier
/// side of the wire count, and the comparison is where a fast prover's
/// reduced exponent collides informatively with the full power.
#[derive(Debug, Clone, Copy)]
pub struct CheckedRepeatSq<A> {
    pub inner: A,
    pub t: u32,
}

impl<A: Algorithm<Output = Option<WireId>>> Algorithm for CheckedRepeatSq<A> {
    type Output = Option<WireId>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<WireId> {
        let w = self.inner.run(oracle, rng)?;
        let mut acc = oracle.generator();
        for _ in 0..self.t {
            acc = oracle.group_op(acc, acc, Sign::Add);
        }
        oracle.equality(w, acc).then_some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{
        BsgsDl, ChainSquarer, GapCdhBsgs, GenericOrderFind, MdlPerInstanceBsgs, OmdlAdversary,
        RepeatSqProver, RootExtractor, TrivialRootClaimer,
    };
    use crate::oracle::{run_algorithm, GroupSpec, Problem, Session};
    use rand::SeedableRng;

    #[test]
    fn checked_dl_verifies_within_one_extra_op() {
        let mut s = Session::new(
            GroupSpec::known(1009),
            Problem::Dl { x: 700 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedDl { inner: BsgsDl { ops_budget: 64 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), Some(700));
        assert!(s.tallies().element_ops() <= 64);
    }

    #[test]
    fn checked_dl_rejects_wrong_claims() {
        struct Guess(u64);
        impl Algorithm for Guess {
            type Output = Option<u64>;
            fn run(&self, _: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<u64> {
                Some(self.0)
            }
        }
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&CheckedDl { inner: Guess(6) }, &mut s, 0), None);
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&CheckedDl { inner: Guess(7) }, &mut s, 0), Some(7));
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&CheckedDl { inner: Guess(18) }, &mut s, 0), None);
    }

    #[test]
    fn checked_mdl_is_all_or_nothing() {
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Mdl { xs: vec![7, 3] },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedMdl { inner: MdlPerInstanceBsgs { ops_budget: 12 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), Some(vec![7, 3]));
        assert!(s.tallies().element_ops() <= 14);

        let mut s = Session::new(
            GroupSpec::known(31),
            Problem::Mdl { xs: vec![2, 30] },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedMdl { inner: MdlPerInstanceBsgs { ops_budget: 8 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), None);
    }

    #[test]
    fn checked_cdh_accepts_only_the_product() {
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::GapCdh { x: 5, y: 9 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedGapCdh { inner: GapCdhBsgs { ops_budget: 22 } };
        let w = run_algorithm(&alg, &mut s, 0).unwrap();
        assert_eq!(s.exponent_of(w), Some(1));

        struct EchoY;
        impl Algorithm for EchoY {
            type Output = Option<WireId>;
            fn run(&self, o: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<WireId> {
                Some(o.instance_wires()[1])
            }
        }
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::GapCdh { x: 5, y: 9 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&CheckedGapCdh { inner: EchoY }, &mut s, 0), None);
    }

    #[test]
    fn checked_omdl_needs_every_challenge_right() {
        let mut s = Session::new(
            GroupSpec::known(101),
            Problem::OmDl { q: 1 },
            ChaCha12Rng::seed_from_u64(5),
        );
        let alg = CheckedOmdl { inner: OmdlAdversary { q: 1, n: 1, m: 1, bsgs_budget: 22 } };
        let out = run_algorithm(&alg, &mut s, 0).unwrap();
        assert_eq!(out, s.challenges().to_vec());
        assert!(!s.invalid());

        let mut s = Session::new(
            GroupSpec::known(101),
            Problem::OmDl { q: 1 },
            ChaCha12Rng::seed_from_u64(5),
        );
        let alg = CheckedOmdl { inner: OmdlAdversary { q: 1, n: 0, m: 1, bsgs_budget: 0 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), None);
    }

    #[test]
    fn checked_order_accepts_multiples_only() {
        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::OrderFind,
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedOrderClaim { inner: GenericOrderFind { bit_length: 4, ops_budget: 6 } };
        assert_eq!(run_algorithm(&alg, &mut s, 0), Some(11));

        struct Claim(u64);
        impl Algorithm for Claim {
            type Output = Option<u64>;
            fn run(&self, _: &mut dyn GroupOracle, _: &mut ChaCha12Rng) -> Option<u64> {
                Some(self.0)
            }
        }
        for (claim, want) in [(22, Some(22)), (10, None), (0, None), (1, None)] {
            let mut s = Session::new(
                GroupSpec::unknown(11),
                Problem::OrderFind,
                ChaCha12Rng::seed_from_u64(0),
            );
            assert_eq!(run_algorithm(&CheckedOrderClaim { inner: Claim(claim) }, &mut s, 0), want);
        }
    }

    #[test]
    fn checked_root_verifies_the_ladder() {
        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::RootExt { y: 6 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedRoot { inner: RootExtractor { bit_length: 4, ops_budget: 16 } };
        let (e, w) = run_algorithm(&alg, &mut s, 0).unwrap();
        assert_eq!(e, 2);
        assert_eq!(s.exponent_of(w), Some(3));

        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::RootExt { y: 6 },
            ChaCha12Rng::seed_from_u64(0),
        );
        assert_eq!(run_algorithm(&CheckedRoot { inner: TrivialRootClaimer }, &mut s, 0), None);

        // 2x = x holds exactly at x = 0, where the trivial claim squeaks by.
        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::RootExt { y: 0 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let out = run_algorithm(&CheckedRoot { inner: TrivialRootClaimer }, &mut s, 0);
        assert_eq!(out.map(|(e, _)| e), Some(2));
    }

    #[test]
    fn checked_repeat_sq_couples_prover_and_chain() {
        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::RepeatSq { t: 6 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedRepeatSq { inner: RepeatSqProver { bit_length: 4, ops_budget: 14, t: 6 }, t: 6 };
        let w = run_algorithm(&alg, &mut s, 0).unwrap();
        assert_eq!(s.exponent_of(w), Some(9));

        // A chain one squaring short claims g^32; 2^6 - 2^5 = 32 is not a
        // multiple of 11, so the verifier rejects.
        let mut s = Session::new(
            GroupSpec::unknown(11),
            Problem::RepeatSq { t: 6 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let alg = CheckedRepeatSq { inner: ChainSquarer { squarings: 5 }, t: 6 };
        assert_eq!(run_algorithm(&alg, &mut s, 0), None);
    }
}
