use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::{Poly, PolyList, RelationData, TrackState, ZeroSet};
use crate::error::Error;
use crate::oracle::{
    normalize_pair, Algorithm, GateKind, GateRecord, GroupOracle, ProblemKind, Sign, Transcript,
    WireId, WireInit,
};
use crate::Result;

/// Public instance description a decoder has: problem kind, the order when
/// it is public, the bit bound, and how many hidden variables the run will
/// touch (for OM-DL, the challenge count the encoding was built for).
#[derive(Debug, Clone, Copy)]
pub struct ReplaySpec {
    pub problem: ProblemKind,
    pub modulus: Option<u64>,
    pub bit_length: u32,
    pub nvars: usize,
}

impl ReplaySpec {
    pub fn for_transcript(t: &Transcript) -> Self {
        Self {
            problem: t.instance.problem,
            modulus: t.instance.modulus,
            bit_length: t.instance.bit_length,
            nvars: t.instance.nvars,
        }
    }

    fn inputs(&self) -> Vec<WireInit> {
        let mut inputs = vec![WireInit::One];
        let vars = match self.problem {
            ProblemKind::Dl | ProblemKind::GapDl | ProblemKind::RootExt => 1,
            ProblemKind::GapCdh => 2,
            ProblemKind::Mdl { m } => m,
            ProblemKind::OmDl { .. }
            | ProblemKind::OrderFind
            | ProblemKind::RsaOrder
            | ProblemKind::RepeatSq { .. } => 0,
        };
        inputs.extend((0..vars).map(WireInit::Var));
        inputs
    }
}

/// Tracker state frozen right after the final directive fired.
#[derive(Debug, Clone)]
pub struct ReplayCut {
    pub list: PolyList,
    pub zero: ZeroSet,
    pub relation: RelationData,
    pub ordinal: u64,
}

#[derive(Debug)]
pub struct ReplayRun<O> {
    pub output: O,
    pub records: Vec<GateRecord>,
    pub list: PolyList,
    pub zero: ZeroSet,
    pub cut: Option<ReplayCut>,
    pub candidates: u64,
}

struct ReplaySession<'a> {
    spec: &'a ReplaySpec,
    state: TrackState,
    records: Vec<GateRecord>,
    eq_seen: HashSet<(WireId, WireId)>,
    directives: &'a [u64],
    next_directive: usize,
    dl_answers: &'a [u64],
    dl_used: usize,
    candidates: u64,
    cut: Option<ReplayCut>,
    fault: Option<String>,
}

impl<'a> ReplaySession<'a> {
    fn new(spec: &'a ReplaySpec, directives: &'a [u64], dl_answers: &'a [u64]) -> Self {
        let inputs = spec.inputs();
        Self {
            spec,
            state: TrackState::new(spec.modulus, spec.nvars, &inputs),
            records: Vec::new(),
            eq_seen: HashSet::new(),
            directives,
            next_directive: 0,
            dl_answers,
            dl_used: 0,
            candidates: 0,
            cut: None,
            fault: None,
        }
    }

    fn record(&mut self, kind: GateKind, inputs: Vec<u64>, sign: Option<Sign>, output: Option<WireId>, answer: Option<u64>) {
        let seq = self.records.len() as u64;
        self.records.push(GateRecord { seq, kind, inputs, sign, output, answer });
    }

    fn fault(&mut self, msg: String) {
        if self.fault.is_none() {
            self.fault = Some(msg);
        }
    }

    /// True when this candidate ordinal must be answered 1-as-informative.
    fn directive_fires(&mut self, ordinal: u64) -> bool {
        if self.directives.get(self.next_directive) == Some(&ordinal) {
            self.next_directive += 1;
            true
        } else {
            false
        }
    }

    fn snapshot_if_last(&mut self, relation: RelationData, ordinal: u64) {
        if self.next_directive == self.directives.len() && self.cut.is_none() {
            self.cut = Some(ReplayCut {
                list: self.state.list().clone(),
                zero: self.state.zero().clone(),
                relation,
                ordinal,
            });
        }
    }
}

impl GroupOracle for ReplaySession<'_> {
    fn order_bits(&self) -> u32 {
        self.spec.bit_length
    }

    fn published_order(&self) -> Option<u64> {
        self.spec.modulus
    }

    fn generator(&self) -> WireId {
        0
    }

    fn instance_wires(&self) -> Vec<WireId> {
        (1..self.spec.inputs().len()).collect()
    }

    fn label(&mut self, value: u64) -> WireId {
        let w = self.state.label(value);
        self.record(GateKind::Label, vec![value], None, Some(w), None);
        w
    }

    fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId {
        let w = self.state.group_op(a, b, sign);
        self.record(GateKind::GroupOp, vec![a as u64, b as u64], Some(sign), Some(w), None);
        w
    }

    fn equality(&mut self, a: WireId, b: WireId) -> bool {
        assert!(
            self.eq_seen.insert(normalize_pair(a, b)),
            "contract violation: repeated equality pair ({a}, {b})"
        );
        let ordinal = self.candidates;
        self.candidates += 1;
        let relation = self.state.relation(a, b);
        let ans = if self.directive_fires(ordinal) {
            match relation {
                Some(diff) => {
                    self.state.insert_relation(&diff);
                    self.snapshot_if_last(RelationData::Linear(diff), ordinal);
                }
                None => self.fault(format!(
                    "directive {ordinal} names an equality on invalid elements"
                )),
            }
            true
        } else {
            relation.map_or(false, |diff| self.state.in_span(&diff))
        };
        self.record(GateKind::Equality, vec![a as u64, b as u64], None, None, Some(ans as u64));
        ans
    }

    fn ddh(&mut self, a: WireId, b: WireId, c: WireId) -> bool {
        let ordinal = self.candidates;
        self.candidates += 1;
        let polys = {
            let list = self.state.list();
            match (list.get(a), list.get(b), list.get(c)) {
                (Some(pa), Some(pb), Some(pc)) => {
                    Some((pa.as_mod().clone(), pb.as_mod().clone(), pc.as_mod().clone()))
                }
                _ => None,
            }
        };
        let ans = if self.directive_fires(ordinal) {
            match polys {
                Some((pa, pb, pc)) => {
                    self.snapshot_if_last(RelationData::Quadratic { a: pa, b: pb, c: pc }, ordinal);
                }
                None => self.fault(format!("directive {ordinal} names a DDH on invalid elements")),
            }
            true
        } else {
            self.state.ddh_satisfied(a, b, c)
        };
        self.record(GateKind::Ddh, vec![a as u64, b as u64, c as u64], None, None, Some(ans as u64));
        ans
    }

    fn dl(&mut self, a: WireId) -> Option<u64> {
        let q = match self.spec.problem {
            ProblemKind::OmDl { q } => q,
            _ => panic!("contract violation: DL oracle not enabled for this problem"),
        };
        let ordinal = self.candidates;
        self.candidates += 1;
        if self.directives.get(self.next_directive) == Some(&ordinal) {
            self.fault(format!("directive {ordinal} names a DL query, not an equality"));
        }
        if self.dl_used == q {
            self.record(GateKind::Dl, vec![a as u64], None, None, None);
            return None;
        }
        let Some(&z) = self.dl_answers.get(self.dl_used) else {
            self.fault(format!("no carried answer for DL query {}", self.dl_used));
            self.record(GateKind::Dl, vec![a as u64], None, None, None);
            return None;
        };
        self.dl_used += 1;
        match self.state.list().get(a).cloned() {
            Some(pw) => {
                let p = self.spec.modulus.expect("DL oracle in unknown-order mode");
                let diff = pw.sub(&Poly::Mod(crate::algebra::LinPolyModN::constant(
                    p,
                    self.state.nvars(),
                    z,
                )));
                self.state.insert_relation(&diff);
            }
            None => self.fault("DL query on an invalid element".into()),
        }
        self.record(GateKind::Dl, vec![a as u64], None, None, Some(z));
        Some(z)
    }

    fn chal(&mut self) -> WireId {
        let w = self.state.chal();
        self.record(GateKind::Chal, vec![], None, Some(w), None);
        w
    }
}

/// Re-execute `alg` with no oracle behind it.  Equality and DDH queries are
/// answered from polynomial identity and zero-set span membership; the
/// ordinals in `directives` (indices into the merged equality/DDH/DL query
/// sequence) are instead answered 1 and their relations join the zero set.
/// DL queries consume `dl_answers` in order.  The tracker state is
/// snapshotted when the last directive fires.
pub fn replay_without_oracle<A: Algorithm>(
    alg: &A,
    seed: u64,
    spec: &ReplaySpec,
    directives: &[u64],
    dl_answers: &[u64],
) -> Result<ReplayRun<A::Output>> {
    if !directives.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::DecodeFailure("directives not strictly increasing".into()));
    }
    let mut session = ReplaySession::new(spec, directives, dl_answers);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let output = alg.run(&mut session, &mut rng);
    if let Some(msg) = session.fault {
        return Err(Error::DecodeFailure(msg));
    }
    if session.next_directive < directives.len() {
        return Err(Error::DecodeFailure(format!(
            "directive {} never reached ({} candidates seen)",
            directives[session.next_directive], session.candidates
        )));
    }
    Ok(ReplayRun {
        output,
        records: session.records,
        list: session.state.list().clone(),
        zero: session.state.zero().clone(),
        cut: session.cut,
        candidates: session.candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{run_algorithm, GroupSpec, Problem, Session};
    use crate::tracker::{CollisionClass, Tracker};

    /// Sweep labels 0..cap and compare each against the instance wire.
    struct SweepDl {
        cap: u64,
    }

    impl Algorithm for SweepDl {
        type Output = Option<u64>;
        fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
            let target = oracle.instance_wires()[0];
            for v in 0..self.cap {
                let w = oracle.label(v);
                if oracle.equality(w, target) {
                    return Some(v);
                }
            }
            None
        }
    }

    fn live_run(n: u64, x: u64, cap: u64) -> (Option<u64>, Transcript) {
        let mut s = Session::new(
            GroupSpec::known(n),
            Problem::Dl { x },
            ChaCha12Rng::seed_from_u64(5),
        );
        let out = run_algorithm(&SweepDl { cap }, &mut s, 5);
        (out, s.finish())
    }

    #[test]
    fn replay_reproduces_live_run() {
        let (out, t) = live_run(11, 7, 11);
        assert_eq!(out, Some(7));
        let tracker = Tracker::from_transcript(&t);
        let directives: Vec<u64> = tracker
            .informative_events()
            .map(|e| e.ordinal)
            .collect();
        assert_eq!(directives.len(), 1);
        let spec = ReplaySpec::for_transcript(&t);
        let run = replay_without_oracle(&SweepDl { cap: 11 }, 5, &spec, &directives, &[]).unwrap();
        assert_eq!(run.output, Some(7));
        assert_eq!(run.records, t.records);
        assert_eq!(run.list, *tracker.list());
        let cut = run.cut.unwrap();
        assert_eq!(cut.ordinal, directives[0]);
        match cut.relation {
            RelationData::Linear(ref d) => {
                let d = d.as_mod();
                assert_eq!((d.constant_term(), d.coeff(0)), (7, 10));
            }
            _ => panic!("expected linear relation"),
        }
    }

    #[test]
    fn empty_directives_on_collision_free_run() {
        let (out, t) = live_run(11, 9, 5);
        assert_eq!(out, None);
        let tracker = Tracker::from_transcript(&t);
        assert_eq!(tracker.informative_events().count(), 0);
        let spec = ReplaySpec::for_transcript(&t);
        let run = replay_without_oracle(&SweepDl { cap: 5 }, 5, &spec, &[], &[]).unwrap();
        assert_eq!(run.output, None);
        assert_eq!(run.records, t.records);
        assert!(run.cut.is_none());
        assert_eq!(run.zero.rank(), 0);
    }

    #[test]
    fn misdirected_directive_is_a_decode_failure() {
        let (_, t) = live_run(11, 7, 11);
        let spec = ReplaySpec::for_transcript(&t);
        // Ordinal past every equality the algorithm makes: never fires.
        let err = replay_without_oracle(&SweepDl { cap: 11 }, 5, &spec, &[40], &[]).unwrap_err();
        assert!(matches!(err, Error::DecodeFailure(_)));
        let err =
            replay_without_oracle(&SweepDl { cap: 11 }, 5, &spec, &[3, 3], &[]).unwrap_err();
        assert!(matches!(err, Error::DecodeFailure(_)));
    }

    #[test]
    fn predictable_collisions_answered_from_span() {
        /// Checks the target twice via two different wire routes; the
        /// second hit must be answered from the span, not a directive.
        struct DoubleCheck;
        impl Algorithm for DoubleCheck {
            type Output = (bool, bool);
            fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> (bool, bool) {
                let target = oracle.instance_wires()[0];
                let w7 = oracle.label(7);
                let first = oracle.equality(w7, target);
                let g = oracle.generator();
                let w8 = oracle.group_op(w7, g, Sign::Add);
                let t8 = oracle.group_op(target, g, Sign::Add);
                let second = oracle.equality(w8, t8);
                (first, second)
            }
        }
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(1),
        );
        let out = run_algorithm(&DoubleCheck, &mut s, 1);
        assert_eq!(out, (true, true));
        let t = s.finish();
        let tracker = Tracker::from_transcript(&t);
        let classes: Vec<_> = tracker.events().iter().map(|e| e.class).collect();
        assert_eq!(classes, vec![CollisionClass::Informative, CollisionClass::Predictable]);
        let spec = ReplaySpec::for_transcript(&t);
        let run = replay_without_oracle(&DoubleCheck, 1, &spec, &[0], &[]).unwrap();
        assert_eq!(run.output, (true, true));
        assert_eq!(run.records, t.records);
    }
}
