//! Random-representation (label-string) group oracle and the translation
//! to wire-based algorithms, in both the faithful and the general form.
//!
//! Labels are fixed-width uniform bit strings.  The translator keeps a
//! wire <-> label table and realizes each labeling or group-operation
//! query with exactly one element gate, plus at most `retries` extra
//! labelings per unseen label, so translated gate tallies stay pinned to
//! the query tallies they came from.  Fresh labels and unseen-label
//! resolutions come from a dedicated stream: running the same algorithm
//! natively and translated on that shared stream makes the two runs agree
//! bit for bit until (at worst) a resampler gives up.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::oracle::{Algorithm, GroupOracle, Problem, Sign, WireId};

/// Group-element handle in the random-representation model: a uniformly
/// drawn fixed-width bit string.  The raw bits are public; algorithms may
/// branch on them, which is exactly what this model permits and the
/// wire-based one does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label(pub u128);

/// Geometry of the public label set S: strings of `width_bits` bits.
#[derive(Debug, Clone, Copy)]
pub struct LabelSpec {
    pub order: u64,
    pub width_bits: u32,
}

impl LabelSpec {
    pub const DEFAULT_SLACK: u32 = 64;

    pub fn new(order: u64, width_bits: u32) -> Self {
        assert!(order >= 2, "contract violation: the group needs at least two elements");
        assert!(
            (1..=127).contains(&width_bits),
            "contract violation: label width must fit a 128-bit draw"
        );
        let spec = Self { order, width_bits };
        assert!(
            spec.set_size() >= order as u128,
            "configuration error: label set smaller than the group"
        );
        spec
    }

    /// Width ceil(log2 order) + slack.
    pub fn with_slack(order: u64, slack_bits: u32) -> Self {
        let base = 64 - (order - 1).leading_zeros();
        Self::new(order, base + slack_bits)
    }

    pub fn default_for(order: u64) -> Self {
        Self::with_slack(order, Self::DEFAULT_SLACK)
    }

    pub fn set_size(&self) -> u128 {
        1u128 << self.width_bits
    }
}

/// What a Shoup-style algorithm may do: look up labels of chosen exponents
/// and combine labels.  There is no equality query because comparing
/// strings needs no oracle.
pub trait RrOracle {
    fn order(&self) -> u64;
    fn label_width(&self) -> u32;
    /// Generator label first, then one label per hidden instance value.
    fn instance_labels(&self) -> Vec<Label>;
    fn label_query(&mut self, x: u64) -> Label;
    fn group_op_query(&mut self, a: Label, b: Label, sign: Sign) -> Option<Label>;
}

pub trait RrAlgorithm {
    type Output;
    fn run(&self, oracle: &mut dyn RrOracle, rng: &mut ChaCha12Rng) -> Self::Output;
}

impl<A: RrAlgorithm + ?Sized> RrAlgorithm for &A {
    type Output = A::Output;
    fn run(&self, oracle: &mut dyn RrOracle, rng: &mut ChaCha12Rng) -> Self::Output {
        (**self).run(oracle, rng)
    }
}

/// Ground-truth oracle with the random injection sampled lazily.  Valid
/// and known-invalid strings share one table so the conditional draws stay
/// exact: a string never seen before is an image with probability
/// (N - m) / (|S| - |T|), decided in integer arithmetic, and its preimage
/// is then rejection-sampled so a translator consuming the same stream
/// picks the same exponent.
pub struct RrSession {
    labels: LabelSpec,
    by_exp: HashMap<u64, Label>,
    by_label: HashMap<Label, Option<u64>>,
    label_rng: ChaCha12Rng,
    instance: Vec<Label>,
    queries: u64,
    unseen: u64,
}

impl RrSession {
    pub fn new(labels: LabelSpec, problem: &Problem, label_rng: ChaCha12Rng) -> Self {
        assert!(!problem.unknown_order(), "contract violation: this oracle publishes the order");
        let mut session = Self {
            labels,
            by_exp: HashMap::new(),
            by_label: HashMap::new(),
            label_rng,
            instance: Vec::new(),
            queries: 0,
            unseen: 0,
        };
        let mut exponents = vec![1];
        match problem {
            Problem::Dl { x } | Problem::GapDl { x } => exponents.push(*x),
            Problem::Mdl { xs } => exponents.extend(xs.iter().copied()),
            Problem::GapCdh { x, y } => exponents.extend([*x, *y]),
            _ => {}
        }
        for x in exponents {
            let l = session.label_of(x % labels.order);
            session.instance.push(l);
        }
        session
    }

    fn label_of(&mut self, x: u64) -> Label {
        if let Some(&l) = self.by_exp.get(&x) {
            return l;
        }
        loop {
            let l = Label(self.label_rng.gen_range(0..self.labels.set_size()));
            if !self.by_label.contains_key(&l) {
                self.by_exp.insert(x, l);
                self.by_label.insert(l, Some(x));
                return l;
            }
        }
    }

    /// Decide what a presented string denotes, fixing the injection on it
    /// the first time it appears.
    fn resolve(&mut self, l: Label) -> Option<u64> {
        if let Some(&v) = self.by_label.get(&l) {
            return v;
        }
        self.unseen += 1;
        let n = self.labels.order;
        let m = self.by_exp.len() as u128;
        let free = self.labels.set_size() - self.by_label.len() as u128;
        let coin = self.label_rng.gen_range(0..free);
        if coin < n as u128 - m {
            loop {
                let x = self.label_rng.gen_range(0..n);
                if !self.by_exp.contains_key(&x) {
                    self.by_exp.insert(x, l);
                    self.by_label.insert(l, Some(x));
                    return Some(x);
                }
            }
        }
        self.by_label.insert(l, None);
        None
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Distinct strings presented without ever having been issued.
    pub fn unseen_labels(&self) -> u64 {
        self.unseen
    }

    /// Hidden exponent behind a label, for the experiment layer.
    pub fn exponent_of(&self, l: Label) -> Option<u64> {
        self.by_label.get(&l).copied().flatten()
    }
}

impl RrOracle for RrSession {
    fn order(&self) -> u64 {
        self.labels.order
    }

    fn label_width(&self) -> u32 {
        self.labels.width_bits
    }

    fn instance_labels(&self) -> Vec<Label> {
        self.instance.clone()
    }

    fn label_query(&mut self, x: u64) -> Label {
        assert!(x < self.labels.order, "contract violation: exponent outside the group");
        self.queries += 1;
        self.label_of(x)
    }

    fn group_op_query(&mut self, a: Label, b: Label, sign: Sign) -> Option<Label> {
        self.queries += 1;
        let xa = self.resolve(a);
        let xb = self.resolve(b);
        let (xa, xb) = (xa?, xb?);
        let n = self.labels.order;
        let x = match sign {
            Sign::Add => (xa + xb) % n,
            Sign::Sub => (xa + n - xb) % n,
        };
        Some(self.label_of(x))
    }
}

/// Mirror of `run_algorithm` for the label model.
pub fn run_rr<A: RrAlgorithm>(alg: &A, session: &mut RrSession, seed: u64) -> A::Output {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    alg.run(session, &mut rng)
}

#[derive(Clone, Copy)]
enum Payload {
    Element(WireId),
    /// The string resolved as a non-image.
    Invalid,
    /// The resampler gave up on a string that may be an image: the
    /// accounted translation failure.
    Failed,
}

struct Bridge<'a> {
    ts: &'a mut dyn GroupOracle,
    labels: LabelSpec,
    table: Vec<(Payload, Label)>,
    index: HashMap<Label, usize>,
    elements: u64,
    label_rng: ChaCha12Rng,
    retries: Option<u32>,
    unfaithful: Option<u128>,
    instance: Vec<Label>,
}

impl<'a> Bridge<'a> {
    fn new(
        ts: &'a mut dyn GroupOracle,
        labels: LabelSpec,
        label_rng: ChaCha12Rng,
        retries: Option<u32>,
    ) -> Self {
        assert_eq!(
            ts.published_order(),
            Some(labels.order),
            "contract violation: label spec and session order disagree"
        );
        let mut bridge = Self {
            ts,
            labels,
            table: Vec::new(),
            index: HashMap::new(),
            elements: 0,
            label_rng,
            retries,
            unfaithful: None,
            instance: Vec::new(),
        };
        let gen = bridge.ts.generator();
        let mut given = vec![bridge.find_label(gen)];
        for w in bridge.ts.instance_wires() {
            given.push(bridge.find_label(w));
        }
        bridge.instance = given;
        bridge
    }

    fn insert(&mut self, payload: Payload, l: Label) {
        if matches!(payload, Payload::Element(_)) {
            self.elements += 1;
        }
        self.index.insert(l, self.table.len());
        self.table.push((payload, l));
    }

    /// Table search by equality gates; a miss mints a fresh label.
    fn find_label(&mut self, h: WireId) -> Label {
        for i in 0..self.table.len() {
            if let (Payload::Element(w), l) = self.table[i] {
                if self.ts.equality(h, w) {
                    return l;
                }
            }
        }
        loop {
            let l = Label(self.label_rng.gen_range(0..self.labels.set_size()));
            if !self.index.contains_key(&l) {
                self.insert(Payload::Element(h), l);
                return l;
            }
        }
    }

    /// Table lookup by string; an unseen string resolves per the configured
    /// mode.
    fn find_element(&mut self, l: Label) -> Payload {
        if let Some(&i) = self.index.get(&l) {
            return self.table[i].0;
        }
        let Some(retries) = self.retries else {
            // No unseen-label story in faithful mode; flag the run so the
            // caller can discard it.
            self.unfaithful.get_or_insert(l.0);
            self.insert(Payload::Invalid, l);
            return Payload::Invalid;
        };
        let n = self.labels.order;
        let free = self.labels.set_size() - self.table.len() as u128;
        let coin = self.label_rng.gen_range(0..free);
        if coin >= n as u128 - self.elements as u128 {
            self.insert(Payload::Invalid, l);
            return Payload::Invalid;
        }
        for _ in 0..retries {
            let x = self.label_rng.gen_range(0..n);
            let w = self.ts.label(x);
            let mut seen = false;
            for i in 0..self.table.len() {
                if let (Payload::Element(other), _) = self.table[i] {
                    if self.ts.equality(w, other) {
                        seen = true;
                        break;
                    }
                }
            }
            if !seen {
                self.insert(Payload::Element(w), l);
                return Payload::Element(w);
            }
        }
        self.insert(Payload::Failed, l);
        Payload::Failed
    }
}

impl RrOracle for Bridge<'_> {
    fn order(&self) -> u64 {
        self.labels.order
    }

    fn label_width(&self) -> u32 {
        self.labels.width_bits
    }

    fn instance_labels(&self) -> Vec<Label> {
        self.instance.clone()
    }

    fn label_query(&mut self, x: u64) -> Label {
        assert!(x < self.labels.order, "contract violation: exponent outside the group");
        let w = self.ts.label(x);
        self.find_label(w)
    }

    fn group_op_query(&mut self, a: Label, b: Label, sign: Sign) -> Option<Label> {
        let pa = self.find_element(a);
        let pb = self.find_element(b);
        match (pa, pb) {
            (Payload::Element(wa), Payload::Element(wb)) => {
                let w = self.ts.group_op(wa, wb, sign);
                Some(self.find_label(w))
            }
            _ => {
                // The query still costs its one element gate even though
                // the answer is already known to be invalid.
                let g = self.ts.generator();
                self.ts.group_op(g, g, sign);
                None
            }
        }
    }
}

/// Runs a label-model algorithm against a wire session, refusing unseen
/// strings.  `Err` means the algorithm was not faithful and belongs in
/// `translate_general`.
pub struct TranslatedFaithful<A> {
    inner: A,
    labels: LabelSpec,
    label_seed: u64,
}

impl<A: RrAlgorithm> Algorithm for TranslatedFaithful<A> {
    type Output = crate::Result<A::Output>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Self::Output {
        let stream = ChaCha12Rng::seed_from_u64(self.label_seed);
        let mut bridge = Bridge::new(oracle, self.labels, stream, None);
        let out = self.inner.run(&mut bridge, rng);
        match bridge.unfaithful {
            Some(l) => Err(Error::UnfaithfulQuery(l)),
            None => Ok(out),
        }
    }
}

pub fn translate_faithful<A: RrAlgorithm>(
    inner: A,
    labels: LabelSpec,
    label_seed: u64,
) -> TranslatedFaithful<A> {
    TranslatedFaithful { inner, labels, label_seed }
}

/// Runs a label-model algorithm against a wire session, resolving unseen
/// strings by the probabilistic resampler with at most `retries` rounds,
/// each costing one labeling gate.
pub struct TranslatedGeneral<A> {
    inner: A,
    labels: LabelSpec,
    label_seed: u64,
    retries: u32,
}

impl<A: RrAlgorithm> Algorithm for TranslatedGeneral<A> {
    type Output = A::Output;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Self::Output {
        let stream = ChaCha12Rng::seed_from_u64(self.label_seed);
        let mut bridge = Bridge::new(oracle, self.labels, stream, Some(self.retries));
        self.inner.run(&mut bridge, rng)
    }
}

pub fn translate_general<A: RrAlgorithm>(
    inner: A,
    labels: LabelSpec,
    label_seed: u64,
    retries: u32,
) -> TranslatedGeneral<A> {
    assert!(retries >= 1, "contract violation: the resampler needs at least one round");
    TranslatedGeneral { inner, labels, label_seed, retries }
}

/// Success-probability deficit r * (T/N)^r charged by the general
/// translation.  At or above 1 the bound says nothing; callers should flag
/// such configurations as degenerate.
pub fn translation_deficit(retries: u32, queries: u64, order: u64) -> f64 {
    retries as f64 * (queries as f64 / order as f64).powi(retries as i32)
}

/// Baby-step giant-step in the label model: same gate discipline as the
/// wire version (s = budget/2, 2s-1 queries, covers exponents below s*s),
/// but the table is a plain string map and matching costs nothing.
#[derive(Debug, Clone, Copy)]
pub struct RrBsgsDl {
    pub ops_budget: u64,
}

impl RrAlgorithm for RrBsgsDl {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn RrOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
        assert!(self.ops_budget >= 2, "contract violation: BSGS needs a budget of at least 2");
        let n = oracle.order();
        let s = self.ops_budget / 2;
        let inst = oracle.instance_labels();
        let (lg, lx) = (inst[0], inst[1]);
        let mut baby = HashMap::new();
        baby.insert(oracle.label_query(0), 0u64);
        let mut last = lg;
        for j in 1..s {
            if j > 1 {
                last = oracle.group_op_query(last, lg, Sign::Add)?;
            }
            baby.insert(last, j);
        }
        let stride =
            if s == 1 { lg } else { oracle.group_op_query(last, lg, Sign::Add)? };
        let mut w = lx;
        for i in 0..s {
            if i > 0 {
                w = oracle.group_op_query(w, stride, Sign::Sub)?;
            }
            if let Some(&j) = baby.get(&w) {
                return Some((i * s + j) % n);
            }
        }
        None
    }
}
