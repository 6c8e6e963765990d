//! Polynomial bookkeeping for transcripts: every element wire gets the
//! linear polynomial (in the hidden exponents) that produced it, collisions
//! are classified against a growing zero set, and the whole machinery can
//! re-execute an algorithm without the oracle, answering equality queries
//! from span membership alone.

mod replay;

pub use replay::{replay_without_oracle, ReplayCut, ReplayRun, ReplaySpec};

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{mul_mod, LinPolyInt, LinPolyModN, SpanBasisModP, SpanBasisZ};
use crate::error::Error;
use crate::oracle::{
    GateKind, GateRecord, InstanceDesc, Sign, Transcript, WireId, WireInit,
};
use crate::Result;

/// Wire polynomial in either arithmetic: residues mod a known order, or
/// honest integers when the order is hidden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poly {
    Mod(LinPolyModN),
    Int(LinPolyInt),
}

impl Poly {
    pub fn add(&self, other: &Poly) -> Poly {
        match (self, other) {
            (Poly::Mod(a), Poly::Mod(b)) => Poly::Mod(a.add(b)),
            (Poly::Int(a), Poly::Int(b)) => Poly::Int(a.add(b)),
            _ => panic!("mixed poly modes"),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        match (self, other) {
            (Poly::Mod(a), Poly::Mod(b)) => Poly::Mod(a.sub(b)),
            (Poly::Int(a), Poly::Int(b)) => Poly::Int(a.sub(b)),
            _ => panic!("mixed poly modes"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Poly::Mod(p) => p.is_zero(),
            Poly::Int(p) => p.is_zero(),
        }
    }

    pub fn as_mod(&self) -> &LinPolyModN {
        match self {
            Poly::Mod(p) => p,
            Poly::Int(_) => panic!("expected residue polynomial"),
        }
    }

    pub fn as_int(&self) -> &LinPolyInt {
        match self {
            Poly::Int(p) => p,
            Poly::Mod(_) => panic!("expected integer polynomial"),
        }
    }
}

/// One polynomial per wire, indexed by wire id; `None` marks the invalid
/// element.  Chal wires get fresh variables and count as input rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyList {
    rows: Vec<Option<Poly>>,
}

impl PolyList {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, w: WireId) -> Option<&Poly> {
        assert!(w < self.rows.len(), "contract violation: unknown wire id {w}");
        self.rows[w].as_ref()
    }

    pub fn rows(&self) -> impl Iterator<Item = (WireId, Option<&Poly>)> {
        self.rows.iter().enumerate().map(|(w, p)| (w, p.as_ref()))
    }

    fn push(&mut self, p: Option<Poly>) -> WireId {
        self.rows.push(p);
        self.rows.len() - 1
    }
}

/// Collision polynomials in arrival order plus the span they generate.
/// Residue mode keeps a reduced basis mod a prime; integer mode keeps a
/// Hermite-form lattice basis.
#[derive(Debug, Clone)]
pub enum ZeroSet {
    ModPrime { basis: SpanBasisModP, polys: Vec<LinPolyModN> },
    Integer { basis: SpanBasisZ, polys: Vec<LinPolyInt> },
}

impl ZeroSet {
    pub fn new_mod(p: u64, nvars: usize) -> Self {
        ZeroSet::ModPrime { basis: SpanBasisModP::new(p, nvars), polys: Vec::new() }
    }

    pub fn new_int(nvars: usize) -> Self {
        ZeroSet::Integer { basis: SpanBasisZ::new(nvars), polys: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        match self {
            ZeroSet::ModPrime { basis, .. } => basis.rank(),
            ZeroSet::Integer { basis, .. } => basis.rank(),
        }
    }

    pub fn contains(&self, p: &Poly) -> bool {
        match (self, p) {
            (ZeroSet::ModPrime { basis, .. }, Poly::Mod(q)) => basis.contains(q),
            (ZeroSet::Integer { basis, .. }, Poly::Int(q)) => basis.contains(q),
            _ => panic!("mixed poly modes"),
        }
    }

    /// Insert if outside the span; true iff the rank grew.
    pub fn insert(&mut self, p: &Poly) -> bool {
        match (self, p) {
            (ZeroSet::ModPrime { basis, polys }, Poly::Mod(q)) => {
                let grew = basis.insert(q);
                if grew {
                    polys.push(q.clone());
                }
                grew
            }
            (ZeroSet::Integer { basis, polys }, Poly::Int(q)) => {
                let grew = basis.insert(q);
                if grew {
                    polys.push(q.clone());
                }
                grew
            }
            _ => panic!("mixed poly modes"),
        }
    }

    pub fn mod_basis(&self) -> &SpanBasisModP {
        match self {
            ZeroSet::ModPrime { basis, .. } => basis,
            _ => panic!("expected residue zero set"),
        }
    }

    pub fn mod_polys(&self) -> &[LinPolyModN] {
        match self {
            ZeroSet::ModPrime { polys, .. } => polys,
            _ => panic!("expected residue zero set"),
        }
    }

    pub fn int_polys(&self) -> &[LinPolyInt] {
        match self {
            ZeroSet::Integer { polys, .. } => polys,
            _ => panic!("expected integer zero set"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionClass {
    Trivial,
    Predictable,
    Informative,
}

/// What a positive answer pins down: a linear relation (equality, DL
/// answer) or the quadratic from a satisfied DDH triple.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationData {
    Linear(Poly),
    Quadratic { a: LinPolyModN, b: LinPolyModN, c: LinPolyModN },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Equality,
    Ddh,
    DlAnswer,
}

/// A classified positive answer.  `ordinal` counts equality, DDH and DL
/// records in transcript order; encodings index this sequence because live
/// run and replay agree on it gate for gate.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionEvent {
    pub ordinal: u64,
    pub seq: u64,
    pub kind: EventKind,
    pub class: CollisionClass,
    pub relation: RelationData,
}

/// Shared wire-polynomial state used by both the transcript tracker and the
/// oracle-free replay.
#[derive(Debug, Clone)]
pub struct TrackState {
    modulus: Option<u64>,
    nvars: usize,
    chal_base: usize,
    chal_count: usize,
    list: PolyList,
    zero: ZeroSet,
}

impl TrackState {
    pub fn new(modulus: Option<u64>, nvars: usize, inputs: &[WireInit]) -> Self {
        let zero = match modulus {
            Some(p) => ZeroSet::new_mod(p, nvars),
            None => ZeroSet::new_int(nvars),
        };
        let mut st = Self {
            modulus,
            nvars,
            chal_base: inputs
                .iter()
                .filter(|w| matches!(w, WireInit::Var(_)))
                .count(),
            chal_count: 0,
            list: PolyList::default(),
            zero,
        };
        for init in inputs {
            let poly = match (init, modulus) {
                (WireInit::One, Some(p)) => Poly::Mod(LinPolyModN::constant(p, nvars, 1)),
                (WireInit::One, None) => Poly::Int(LinPolyInt::constant(nvars, 1)),
                (WireInit::Var(i), Some(p)) => Poly::Mod(LinPolyModN::variable(p, nvars, *i)),
                (WireInit::Var(i), None) => Poly::Int(LinPolyInt::variable(nvars, *i)),
            };
            st.list.push(Some(poly));
        }
        st
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn list(&self) -> &PolyList {
        &self.list
    }

    pub fn zero(&self) -> &ZeroSet {
        &self.zero
    }

    pub fn label(&mut self, value: u64) -> WireId {
        let p = self
            .modulus
            .expect("contract violation: labeling gate is disabled in unknown-order sessions");
        let poly = (value < p).then(|| Poly::Mod(LinPolyModN::constant(p, self.nvars, value)));
        self.list.push(poly)
    }

    pub fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId {
        let poly = match (self.list.get(a), self.list.get(b)) {
            (Some(pa), Some(pb)) => Some(match sign {
                Sign::Add => pa.add(pb),
                Sign::Sub => pa.sub(pb),
            }),
            _ => None,
        };
        self.list.push(poly)
    }

    pub fn chal(&mut self) -> WireId {
        let var = self.chal_base + self.chal_count;
        assert!(var < self.nvars, "contract violation: more challenges than planned variables");
        self.chal_count += 1;
        let poly = match self.modulus {
            Some(p) => Poly::Mod(LinPolyModN::variable(p, self.nvars, var)),
            None => Poly::Int(LinPolyInt::variable(self.nvars, var)),
        };
        self.list.push(Some(poly))
    }

    /// P_a - P_b, or None when either side is the invalid element.
    pub fn relation(&self, a: WireId, b: WireId) -> Option<Poly> {
        match (self.list.get(a), self.list.get(b)) {
            (Some(pa), Some(pb)) => Some(pa.sub(pb)),
            _ => None,
        }
    }

    /// Identically zero counts as in-span.
    pub fn in_span(&self, diff: &Poly) -> bool {
        diff.is_zero() || self.zero.contains(diff)
    }

    pub fn classify(&mut self, diff: &Poly) -> CollisionClass {
        if diff.is_zero() {
            CollisionClass::Trivial
        } else if self.zero.contains(diff) {
            CollisionClass::Predictable
        } else {
            self.zero.insert(diff);
            CollisionClass::Informative
        }
    }

    pub fn insert_relation(&mut self, diff: &Poly) -> bool {
        !diff.is_zero() && self.zero.insert(diff)
    }

    /// Is P_a * P_b = P_c as polynomials?  False whenever an input is the
    /// invalid element.
    pub fn ddh_satisfied(&self, a: WireId, b: WireId, c: WireId) -> bool {
        let (pa, pb, pc) = match (self.list.get(a), self.list.get(b), self.list.get(c)) {
            (Some(Poly::Mod(pa)), Some(Poly::Mod(pb)), Some(Poly::Mod(pc))) => (pa, pb, pc),
            (None, _, _) | (_, None, _) | (_, _, None) => return false,
            _ => panic!("DDH tracking requires residue polynomials"),
        };
        let p = pa.modulus();
        let (ac, bc, cc) = (pa.coeffs(), pb.coeffs(), pc.coeffs());
        if mul_mod(ac[0], bc[0], p) != cc[0] {
            return false;
        }
        for i in 1..=self.nvars {
            let lin = (mul_mod(ac[0], bc[i], p) + mul_mod(bc[0], ac[i], p)) % p;
            if lin != cc[i] {
                return false;
            }
            for j in i..=self.nvars {
                let quad = if i == j {
                    mul_mod(ac[i], bc[i], p)
                } else {
                    (mul_mod(ac[i], bc[j], p) + mul_mod(ac[j], bc[i], p)) % p
                };
                if quad != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Largest |coefficient| across all live rows (integer mode).
    pub fn max_abs_coeff(&self) -> BigUint {
        let mut max = BigUint::from(0u32);
        for (_, poly) in self.list.rows() {
            if let Some(Poly::Int(p)) = poly {
                max = max.max(p.max_abs_coeff());
            }
        }
        max
    }
}

/// Consumes a finished transcript record by record, classifying every
/// positive equality/DDH answer and absorbing DL answers as known
/// relations.
#[derive(Debug, Clone)]
pub struct Tracker {
    state: TrackState,
    candidates: u64,
    events: Vec<CollisionEvent>,
}

impl Tracker {
    pub fn new(instance: &InstanceDesc) -> Self {
        Self {
            state: TrackState::new(instance.modulus, instance.nvars, &instance.inputs),
            candidates: 0,
            events: Vec::new(),
        }
    }

    pub fn from_transcript(t: &Transcript) -> Self {
        let mut tr = Self::new(&t.instance);
        for rec in &t.records {
            tr.track_gate(rec);
        }
        tr
    }

    pub fn track_gate(&mut self, rec: &GateRecord) {
        match rec.kind {
            GateKind::Label => {
                self.state.label(rec.inputs[0]);
            }
            GateKind::GroupOp => {
                let (a, b) = (rec.inputs[0] as WireId, rec.inputs[1] as WireId);
                self.state.group_op(a, b, rec.sign.expect("group op without sign"));
            }
            GateKind::Chal => {
                self.state.chal();
            }
            GateKind::Equality => {
                let ordinal = self.candidates;
                self.candidates += 1;
                if rec.answer == Some(1) {
                    let (a, b) = (rec.inputs[0] as WireId, rec.inputs[1] as WireId);
                    let diff = self
                        .state
                        .relation(a, b)
                        .expect("positive equality on invalid elements");
                    let class = self.state.classify(&diff);
                    self.events.push(CollisionEvent {
                        ordinal,
                        seq: rec.seq,
                        kind: EventKind::Equality,
                        class,
                        relation: RelationData::Linear(diff),
                    });
                }
            }
            GateKind::Ddh => {
                let ordinal = self.candidates;
                self.candidates += 1;
                if rec.answer == Some(1) {
                    let (a, b, c) =
                        (rec.inputs[0] as WireId, rec.inputs[1] as WireId, rec.inputs[2] as WireId);
                    let class = if self.state.ddh_satisfied(a, b, c) {
                        CollisionClass::Trivial
                    } else {
                        CollisionClass::Informative
                    };
                    let grab = |w: WireId| self.state.list.get(w).unwrap().as_mod().clone();
                    let (pa, pb, pc) = (grab(a), grab(b), grab(c));
                    self.events.push(CollisionEvent {
                        ordinal,
                        seq: rec.seq,
                        kind: EventKind::Ddh,
                        class,
                        relation: RelationData::Quadratic { a: pa, b: pb, c: pc },
                    });
                }
            }
            GateKind::Dl => {
                let ordinal = self.candidates;
                self.candidates += 1;
                if let Some(z) = rec.answer {
                    let w = rec.inputs[0] as WireId;
                    let pw = self.state.list.get(w).expect("DL answer on invalid element");
                    let p = self.state.modulus.expect("DL oracle in unknown-order mode");
                    let diff = pw.sub(&Poly::Mod(LinPolyModN::constant(p, self.state.nvars, z)));
                    let class = if self.state.insert_relation(&diff) {
                        CollisionClass::Informative
                    } else {
                        CollisionClass::Predictable
                    };
                    self.events.push(CollisionEvent {
                        ordinal,
                        seq: rec.seq,
                        kind: EventKind::DlAnswer,
                        class,
                        relation: RelationData::Linear(diff),
                    });
                }
            }
        }
    }

    pub fn state(&self) -> &TrackState {
        &self.state
    }

    pub fn list(&self) -> &PolyList {
        &self.state.list
    }

    pub fn zero(&self) -> &ZeroSet {
        &self.state.zero
    }

    /// Count of equality + DDH + DL records seen.
    pub fn candidate_count(&self) -> u64 {
        self.candidates
    }

    pub fn events(&self) -> &[CollisionEvent] {
        &self.events
    }

    pub fn informative_events(&self) -> impl Iterator<Item = &CollisionEvent> {
        self.events.iter().filter(|e| e.class == CollisionClass::Informative)
    }
}

/// Unique assignment annihilating the zero set's rows.
pub fn solve_mdl(zs: &ZeroSet, m: usize, p: u64) -> Result<Vec<u64>> {
    if zs.rank() < m {
        return Err(Error::SingularSystem { modulus: p });
    }
    crate::algebra::solve_square_system_mod(zs.mod_polys(), p)
}

/// Variable indices NOT pinned by the zero set: fixing these to arbitrary
/// values keeps the stored rows independent, so revealing them closes the
/// system.
pub fn reveal_indices(zs: &ZeroSet, total_vars: usize) -> Vec<usize> {
    let basis = zs.mod_basis();
    assert_eq!(basis.nvars(), total_vars, "contract violation: variable count mismatch");
    basis.free_vars()
}

#[derive(Debug, Clone, Copy)]
pub struct InformativeStatsConfig {
    pub p: u64,
    pub nvars: usize,
    pub queries_per_trial: u64,
    pub trials: u64,
    /// m in Pr[C >= m].
    pub threshold: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStat {
    pub trial: u64,
    pub queries: u64,
    pub informative_count: u64,
}

#[derive(Debug, Clone)]
pub struct InformativeStats {
    pub per_trial: Vec<TrialStat>,
    pub total_queries: u64,
    pub total_informative: u64,
    /// Per-query informative frequency.
    pub rate: f64,
    /// Fraction of trials with C >= threshold.
    pub tail_rate: f64,
}

/// Monte Carlo for the collision-probability lemma: per trial, hide a
/// uniform assignment, then repeatedly draw a uniform relation OUTSIDE the
/// current span and see whether it vanishes on the hidden point.  Each hit
/// is an informative collision and joins the span.
pub fn informative_rate_stats(cfg: &InformativeStatsConfig) -> InformativeStats {
    let per_trial: Vec<TrialStat> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = crate::harness::streams::trial_stream(cfg.seed, "informative-stats", trial);
            let xs: Vec<u64> = (0..cfg.nvars).map(|_| rng.gen_range(0..cfg.p)).collect();
            let mut basis = SpanBasisModP::new(cfg.p, cfg.nvars);
            let mut hits = 0u64;
            for _ in 0..cfg.queries_per_trial {
                let query = loop {
                    let coeffs: Vec<u64> =
                        (0..=cfg.nvars).map(|_| rng.gen_range(0..cfg.p)).collect();
                    let poly = LinPolyModN::from_coeffs(cfg.p, coeffs);
                    if !basis.contains(&poly) {
                        break poly;
                    }
                };
                if query.eval(&xs) == 0 {
                    basis.insert(&query);
                    hits += 1;
                }
            }
            TrialStat { trial, queries: cfg.queries_per_trial, informative_count: hits }
        })
        .collect();
    let total_queries: u64 = per_trial.iter().map(|t| t.queries).sum();
    let total_informative: u64 = per_trial.iter().map(|t| t.informative_count).sum();
    let tail_hits = per_trial.iter().filter(|t| t.informative_count >= cfg.threshold).count();
    InformativeStats {
        rate: total_informative as f64 / total_queries.max(1) as f64,
        tail_rate: tail_hits as f64 / cfg.trials.max(1) as f64,
        per_trial,
        total_queries,
        total_informative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{GroupOracle, GroupSpec, Problem, Session};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn mod_poly(p: u64, coeffs: &[u64]) -> Poly {
        Poly::Mod(LinPolyModN::from_coeffs(p, coeffs.to_vec()))
    }

    #[test]
    fn track_gate_appends_expected_polys() {
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let g = s.generator();
        let gx = s.instance_wires()[0];
        let w7 = s.label(7);
        let sum = s.group_op(gx, w7, Sign::Add);
        let zero = s.group_op(gx, gx, Sign::Sub);
        let _ = s.equality(sum, zero);
        let t = s.finish();
        let tr = Tracker::from_transcript(&t);
        assert_eq!(tr.list().len(), 5);
        assert_eq!(tr.list().get(g), Some(&mod_poly(11, &[1, 0])));
        assert_eq!(tr.list().get(gx), Some(&mod_poly(11, &[0, 1])));
        assert_eq!(tr.list().get(w7), Some(&mod_poly(11, &[7, 0])));
        assert_eq!(tr.list().get(sum), Some(&mod_poly(11, &[7, 1])));
        assert_eq!(tr.list().get(zero), Some(&mod_poly(11, &[0, 0])));
    }

    #[test]
    fn bot_label_has_no_polynomial() {
        let mut s = Session::new(
            GroupSpec::known(11),
            Problem::Dl { x: 7 },
            ChaCha12Rng::seed_from_u64(0),
        );
        let bot = s.label(12);
        let g = s.generator();
        let prop = s.group_op(bot, g, Sign::Add);
        let t = s.finish();
        let tr = Tracker::from_transcript(&t);
        assert_eq!(tr.list().get(bot), None);
        assert_eq!(tr.list().get(prop), None);
    }

    #[test]
    fn collision_classes() {
        let inputs = vec![WireInit::One, WireInit::Var(0)];
        let mut st = TrackState::new(Some(11), 1, &inputs);
        assert_eq!(st.classify(&mod_poly(11, &[0, 0])), CollisionClass::Trivial);
        assert_eq!(st.classify(&mod_poly(11, &[4, 10])), CollisionClass::Informative);
        assert_eq!(st.classify(&mod_poly(11, &[8, 9])), CollisionClass::Predictable);
        assert_eq!(st.zero().rank(), 1);
        assert_eq!(st.classify(&mod_poly(11, &[5, 0])), CollisionClass::Informative);
        assert_eq!(st.zero().rank(), 2);
    }

    #[test]
    fn informative_count_matches_rank() {
        let mut s = Session::new(
            GroupSpec::known(101),
            Problem::Mdl { xs: vec![17, 63] },
            ChaCha12Rng::seed_from_u64(0),
        );
        let [w1, w2]: [usize; 2] = s.instance_wires().try_into().unwrap();
        let a = s.label(17);
        let b = s.label(63);
        let _ = s.equality(w1, a);
        let _ = s.equality(w2, b);
        let c = s.group_op(w1, a, Sign::Sub);
        let d = s.group_op(w2, b, Sign::Sub);
        let _ = s.equality(c, d);
        let t = s.finish();
        let tr = Tracker::from_transcript(&t);
        let informative = tr.informative_events().count();
        assert_eq!(informative, 2);
        assert_eq!(tr.zero().rank(), informative);
        assert_eq!(tr.candidate_count(), 3);
        let classes: Vec<_> = tr.events().iter().map(|e| e.class).collect();
        assert_eq!(
            classes,
            vec![
                CollisionClass::Informative,
                CollisionClass::Informative,
                CollisionClass::Predictable
            ]
        );
    }

    #[test]
    fn ddh_identity_check() {
        let inputs = vec![WireInit::One, WireInit::Var(0)];
        let mut st = TrackState::new(Some(7), 1, &inputs);
        let w2 = st.label(2);
        let w3 = st.label(3);
        let w6 = st.label(6);
        assert!(st.ddh_satisfied(w2, w3, w6));
        assert!(!st.ddh_satisfied(w2, w3, 0));
        let x = 1;
        assert!(!st.ddh_satisfied(x, x, w6));
        let twice = st.group_op(x, x, Sign::Add);
        assert!(!st.ddh_satisfied(w2, x, w6));
        assert!(st.ddh_satisfied(w2, x, twice));
    }

    #[test]
    fn solve_mdl_recovers_assignment() {
        let inputs = vec![WireInit::One, WireInit::Var(0), WireInit::Var(1)];
        let mut st = TrackState::new(Some(31), 2, &inputs);
        let diff1 = mod_poly(31, &[31 - 5, 1, 0]);
        let diff2 = mod_poly(31, &[31 - 9, 0, 1]);
        assert_eq!(st.classify(&diff1), CollisionClass::Informative);
        assert_eq!(st.classify(&diff2), CollisionClass::Informative);
        assert_eq!(solve_mdl(st.zero(), 2, 31).unwrap(), vec![5, 9]);
        let rank_deficient = TrackState::new(Some(31), 2, &inputs);
        assert!(solve_mdl(rank_deficient.zero(), 2, 31).is_err());
    }

    #[test]
    fn reveal_complements_pivots() {
        let inputs = vec![WireInit::One, WireInit::Var(0), WireInit::Var(1)];
        let mut st = TrackState::new(Some(11), 2, &inputs);
        st.classify(&mod_poly(11, &[6, 1, 1]));
        assert_eq!(reveal_indices(st.zero(), 2), vec![1]);

        let inputs3 = vec![WireInit::One, WireInit::Var(0), WireInit::Var(1), WireInit::Var(2)];
        let mut st = TrackState::new(Some(11), 3, &inputs3);
        st.classify(&mod_poly(11, &[4, 1, 0, 0]));
        st.classify(&mod_poly(11, &[8, 0, 1, 0]));
        assert_eq!(reveal_indices(st.zero(), 3), vec![2]);

        let mut st = TrackState::new(Some(7), 2, &inputs);
        st.classify(&mod_poly(7, &[0, 1, 1]));
        st.classify(&mod_poly(7, &[0, 1, 6]));
        assert_eq!(reveal_indices(st.zero(), 2), Vec::<usize>::new());
    }

    #[test]
    fn integer_mode_tracks_big_coefficients() {
        let inputs = vec![WireInit::One];
        let mut st = TrackState::new(None, 0, &inputs);
        let mut w = 0;
        for _ in 0..20 {
            w = st.group_op(w, w, Sign::Add);
        }
        let expected = num_bigint::BigInt::from(1u64 << 20);
        assert_eq!(st.list().get(w).unwrap().as_int().constant_term(), &expected);
        assert!(st.max_abs_coeff() <= BigUint::from(1u32) << 20);
    }

    #[test]
    fn stats_rate_bounded_by_inverse_p() {
        let cfg = InformativeStatsConfig {
            p: 101,
            nvars: 2,
            queries_per_trial: 200,
            trials: 50,
            threshold: 2,
            seed: 9,
        };
        let stats = informative_rate_stats(&cfg);
        assert_eq!(stats.total_queries, 10_000);
        let sigma = crate::stats::binomial_sigma(1.0 / 101.0, stats.total_queries);
        assert!(stats.rate <= 1.0 / 101.0 + 3.0 * sigma, "rate {} too high", stats.rate);
        assert!(stats.per_trial.iter().all(|t| t.informative_count <= 2));
        let rerun = informative_rate_stats(&cfg);
        assert_eq!(stats.per_trial, rerun.per_trial);
    }
}
