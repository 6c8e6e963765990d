use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::{
    normalize_pair, GateKind, GateRecord, GroupOracle, GroupSpec, InstanceDesc, Problem, Sign,
    Tallies, Transcript, WireInit, WireId,
};
use crate::algebra::mul_mod;

/// A live oracle session.  Owns the hidden exponents; the algorithm only
/// ever sees `WireId`s and bits.  Accessors that expose hidden data are for
/// the experiment layer that sampled the instance in the first place.
pub struct Session {
    spec: GroupSpec,
    problem: Problem,
    rng: ChaCha12Rng,
    wires: Vec<Option<u64>>,
    inputs: Vec<WireInit>,
    records: Vec<GateRecord>,
    eq_seen: HashSet<(WireId, WireId)>,
    tallies: Tallies,
    ops_budget: Option<u64>,
    truncated: bool,
    invalid: bool,
    dl_used: usize,
    challenges: Vec<u64>,
    output: Option<serde_json::Value>,
}

impl Session {
    /// `rng` is the instance substream; OM-DL challenge exponents are drawn
    /// from it lazily, so an encoder holding the same stream can recover
    /// them.
    pub fn new(spec: GroupSpec, problem: Problem, rng: ChaCha12Rng) -> Self {
        assert_eq!(
            spec.known_order,
            !problem.unknown_order(),
            "contract violation: problem kind and order visibility disagree"
        );
        let n = spec.order;
        let mut wires = vec![Some(1 % n)];
        let mut inputs = vec![WireInit::One];
        let mut push = |exp: u64, var: usize| {
            wires.push(Some(exp % n));
            inputs.push(WireInit::Var(var));
        };
        match &problem {
            Problem::Dl { x } | Problem::GapDl { x } => push(*x, 0),
            Problem::Mdl { xs } => {
                for (i, x) in xs.iter().enumerate() {
                    push(*x, i);
                }
            }
            Problem::GapCdh { x, y } => {
                push(*x, 0);
                push(*y, 1);
            }
            Problem::RootExt { y } => push(*y, 0),
            Problem::OmDl { .. }
            | Problem::OrderFind
            | Problem::RsaOrder
            | Problem::RepeatSq { .. } => {}
        }
        Self {
            spec,
            problem,
            rng,
            wires,
            inputs,
            records: Vec::new(),
            eq_seen: HashSet::new(),
            tallies: Tallies::default(),
            ops_budget: None,
            truncated: false,
            invalid: false,
            dl_used: 0,
            challenges: Vec::new(),
            output: None,
        }
    }

    /// Flag the run as truncated once labelings + group ops exceed `t`.
    pub fn with_ops_budget(mut self, t: u64) -> Self {
        self.ops_budget = Some(t);
        self
    }

    fn fresh_wire(&mut self, exp: Option<u64>) -> WireId {
        self.wires.push(exp);
        self.wires.len() - 1
    }

    fn record(&mut self, kind: GateKind, inputs: Vec<u64>, sign: Option<Sign>, output: Option<WireId>, answer: Option<u64>) {
        let seq = self.records.len() as u64;
        self.records.push(GateRecord { seq, kind, inputs, sign, output, answer });
    }

    fn meter_element_op(&mut self) {
        if let Some(t) = self.ops_budget {
            if self.tallies.element_ops() > t {
                self.truncated = true;
            }
        }
    }

    fn exp(&self, w: WireId) -> Option<u64> {
        self.wires[w]
    }

    // ---- experiment-side accessors -------------------------------------

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    /// Hidden exponent of a wire (None for the invalid element).
    pub fn exponent_of(&self, w: WireId) -> Option<u64> {
        self.wires[w]
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn records(&self) -> &[GateRecord] {
        &self.records
    }

    pub fn tallies(&self) -> &Tallies {
        &self.tallies
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn invalid(&self) -> bool {
        self.invalid
    }

    /// Challenge exponents drawn so far, in draw order.
    pub fn challenges(&self) -> &[u64] {
        &self.challenges
    }

    pub fn set_output(&mut self, out: serde_json::Value) {
        self.output = Some(out);
    }

    pub fn finish(self) -> Transcript {
        let nvars = match &self.problem {
            Problem::Dl { .. } | Problem::GapDl { .. } | Problem::RootExt { .. } => 1,
            Problem::Mdl { xs } => xs.len(),
            Problem::GapCdh { .. } => 2,
            Problem::OmDl { .. } => self.challenges.len(),
            Problem::OrderFind | Problem::RsaOrder | Problem::RepeatSq { .. } => 0,
        };
        Transcript {
            instance: InstanceDesc {
                problem: self.problem.kind(),
                modulus: self.spec.known_order.then_some(self.spec.order),
                bit_length: self.spec.bit_length(),
                nvars,
                inputs: self.inputs,
            },
            records: self.records,
            tallies: self.tallies,
            wire_count: self.wires.len(),
            truncated: self.truncated,
            invalid: self.invalid,
            output: self.output,
        }
    }
}

impl GroupOracle for Session {
    fn order_bits(&self) -> u32 {
        self.spec.bit_length()
    }

    fn published_order(&self) -> Option<u64> {
        self.spec.known_order.then_some(self.spec.order)
    }

    fn generator(&self) -> WireId {
        0
    }

    fn instance_wires(&self) -> Vec<WireId> {
        (1..self.inputs.len()).collect()
    }

    fn label(&mut self, value: u64) -> WireId {
        assert!(
            self.spec.known_order,
            "contract violation: labeling gate is disabled in unknown-order sessions"
        );
        self.tallies.labelings += 1;
        self.meter_element_op();
        let exp = (value < self.spec.order).then_some(value);
        let w = self.fresh_wire(exp);
        self.record(GateKind::Label, vec![value], None, Some(w), None);
        w
    }

    fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId {
        self.tallies.group_ops += 1;
        self.meter_element_op();
        let n = self.spec.order;
        let exp = match (self.exp(a), self.exp(b)) {
            (Some(x), Some(y)) => Some(match sign {
                Sign::Add => (x + y) % n,
                Sign::Sub => (x + n - y) % n,
            }),
            _ => None,
        };
        let w = self.fresh_wire(exp);
        self.record(GateKind::GroupOp, vec![a as u64, b as u64], Some(sign), Some(w), None);
        w
    }

    fn equality(&mut self, a: WireId, b: WireId) -> bool {
        assert!(
            self.eq_seen.insert(normalize_pair(a, b)),
            "contract violation: repeated equality pair ({a}, {b})"
        );
        self.tallies.equalities += 1;
        let ans = matches!((self.exp(a), self.exp(b)), (Some(x), Some(y)) if x == y);
        self.record(GateKind::Equality, vec![a as u64, b as u64], None, None, Some(ans as u64));
        ans
    }

    fn ddh(&mut self, a: WireId, b: WireId, c: WireId) -> bool {
        assert!(
            matches!(self.problem, Problem::GapDl { .. } | Problem::GapCdh { .. }),
            "contract violation: DDH oracle not enabled for this problem"
        );
        self.tallies.ddh_queries += 1;
        let n = self.spec.order;
        let ans = match (self.exp(a), self.exp(b), self.exp(c)) {
            (Some(x), Some(y), Some(z)) => mul_mod(x, y, n) == z,
            _ => false,
        };
        self.record(GateKind::Ddh, vec![a as u64, b as u64, c as u64], None, None, Some(ans as u64));
        ans
    }

    fn dl(&mut self, a: WireId) -> Option<u64> {
        let q = match self.problem {
            Problem::OmDl { q } => q,
            _ => panic!("contract violation: DL oracle not enabled for this problem"),
        };
        self.tallies.dl_queries += 1;
        if self.dl_used == q {
            self.invalid = true;
            self.record(GateKind::Dl, vec![a as u64], None, None, None);
            return None;
        }
        self.dl_used += 1;
        let x = self.exp(a).expect("contract violation: DL query on an invalid element");
        self.record(GateKind::Dl, vec![a as u64], None, None, Some(x));
        Some(x)
    }

    fn chal(&mut self) -> WireId {
        assert!(
            matches!(self.problem, Problem::OmDl { .. }),
            "contract violation: challenge oracle not enabled for this problem"
        );
        self.tallies.chal_queries += 1;
        let x = self.rng.gen_range(0..self.spec.order);
        self.challenges.push(x);
        let w = self.fresh_wire(Some(x));
        self.record(GateKind::Chal, vec![], None, Some(w), None);
        w
    }
}

/// Run a deterministic callback algorithm against a session, seeding its
/// private coin stream.  Rerunning with the same seed reproduces the
/// transcript bit for bit.
pub fn run_algorithm<A: super::Algorithm>(
    alg: &A,
    session: &mut Session,
    seed: u64,
) -> A::Output {
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    alg.run(session, &mut rng)
}
