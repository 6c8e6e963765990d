//! The type-safe generic group oracle.
//!
//! Algorithms see the [`GroupOracle`] trait only: wire ids in, wire ids and
//! bits out.  Hidden exponents live inside [`Session`] and are reachable
//! solely by the experiment layer that created the session (it sampled the
//! instance, so nothing leaks).  Every gate is recorded; the transcript is
//! what encoders consume.

mod session;
mod transcript;

pub use session::{run_algorithm, Session};
pub use transcript::{GateKind, GateRecord, InstanceDesc, Sign, Tallies, Transcript, WireInit};

use crate::algebra::Factorization;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

pub type WireId = usize;

/// Public problem selector.  Hidden instance data lives in [`Problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Dl,
    Mdl { m: usize },
    GapDl,
    GapCdh,
    OmDl { q: usize },
    OrderFind,
    RsaOrder,
    RootExt,
    RepeatSq { t: u32 },
}

/// A problem instance, including its hidden scalars.
#[derive(Debug, Clone)]
pub enum Problem {
    /// Find x from g^x.
    Dl { x: u64 },
    /// Find all x_i from g^{x_1}..g^{x_m}.
    Mdl { xs: Vec<u64> },
    /// DL with a DDH oracle.
    GapDl { x: u64 },
    /// Compute g^{xy} from (g^x, g^y) with a DDH oracle.
    GapCdh { x: u64, y: u64 },
    /// Challenges drawn lazily on request, at most q DL-oracle answers.
    OmDl { q: usize },
    /// Unknown-order: recover N itself.
    OrderFind,
    /// Unknown-order with N = pq: recover N.
    RsaOrder,
    /// Unknown-order: given g^y output (e >= 2, w) with e*exp(w) = y.
    RootExt { y: u64 },
    /// Unknown-order: output g^{2^t} in fewer than t operations.
    RepeatSq { t: u32 },
}

impl Problem {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Problem::Dl { .. } => ProblemKind::Dl,
            Problem::Mdl { xs } => ProblemKind::Mdl { m: xs.len() },
            Problem::GapDl { .. } => ProblemKind::GapDl,
            Problem::GapCdh { .. } => ProblemKind::GapCdh,
            Problem::OmDl { q } => ProblemKind::OmDl { q: *q },
            Problem::OrderFind => ProblemKind::OrderFind,
            Problem::RsaOrder => ProblemKind::RsaOrder,
            Problem::RootExt { .. } => ProblemKind::RootExt,
            Problem::RepeatSq { t } => ProblemKind::RepeatSq { t: *t },
        }
    }

    /// Does this problem run in an unknown-order session?
    pub fn unknown_order(&self) -> bool {
        matches!(
            self,
            Problem::OrderFind | Problem::RsaOrder | Problem::RootExt { .. } | Problem::RepeatSq { .. }
        )
    }
}

/// Group description owned by the oracle.  `known_order = false` hides N
/// from transcripts and disables the labeling gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub order: u64,
    pub known_order: bool,
    pub factorization: Option<Factorization>,
}

impl GroupSpec {
    pub fn known(order: u64) -> Self {
        assert!(order >= 2);
        Self { order, known_order: true, factorization: Some(Factorization::of_u64(order)) }
    }

    pub fn unknown(order: u64) -> Self {
        assert!(order >= 2);
        Self { order, known_order: false, factorization: None }
    }

    /// Width of the labeling gate's input in bits.
    pub fn bit_length(&self) -> u32 {
        crate::algebra::ceil_log2(self.order)
    }
}

/// The algorithm-facing interface.  Both the live session and the
/// oracle-free replay implement it, which is what lets a decoder re-execute
/// an algorithm without knowing the instance (Lemma 3.1 made executable).
pub trait GroupOracle {
    /// Public bit bound on the order.
    fn order_bits(&self) -> u32;
    /// The order when the session publishes it, None in unknown-order mode.
    fn published_order(&self) -> Option<u64>;
    /// Wire 0: the generator.
    fn generator(&self) -> WireId;
    /// Instance wires in problem order (g^x, then g^y, ...).
    fn instance_wires(&self) -> Vec<WireId>;
    fn label(&mut self, value: u64) -> WireId;
    fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId;
    fn equality(&mut self, a: WireId, b: WireId) -> bool;
    fn ddh(&mut self, a: WireId, b: WireId, c: WireId) -> bool;
    /// DL oracle; None when the query budget is exhausted.
    fn dl(&mut self, a: WireId) -> Option<u64>;
    /// Challenge oracle: fresh wire with a fresh hidden exponent.
    fn chal(&mut self) -> WireId;
}

/// A generic algorithm: deterministic given its RNG stream and the oracle's
/// answers.  Replays feed the same seed to reproduce the run.
pub trait Algorithm {
    type Output;
    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Self::Output;
}

impl<A: Algorithm + ?Sized> Algorithm for &A {
    type Output = A::Output;
    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Self::Output {
        (**self).run(oracle, rng)
    }
}

/// Helpers shared by oracle implementations.
pub(crate) fn normalize_pair(a: WireId, b: WireId) -> (WireId, WireId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
