//! Group sessions with smoothness gates: a factor base of small primes, a
//! smooth-test gate, and a smoothing gate that answers with exponent vectors
//! over the base. Two backings share the interface. The concrete one works in
//! the multiplicative group mod a prime q, where smoothness means the
//! canonical representative factors over the base and the hidden exponents
//! are true discrete logs. The idealized one replaces the smooth set by a
//! random set of configured density, which is the setting the rate bounds
//! are stated in.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::algebra::{
    inv_mod, is_probable_prime, mul_mod, pow_mod, Factorization, LinPolyModN, SpanBasisModP,
};
use crate::oracle::{normalize_pair, Sign, WireId};
use crate::stats::within_upper;

mod index_calculus;

pub use index_calculus::index_calculus_dl;

/// Tuning constants for the smooth-count envelopes.
#[derive(Clone, Copy, Debug)]
pub struct SmoothConstants {
    pub c_base: f64,
    pub c_smooth: f64,
    pub d_smooth: f64,
}

impl Default for SmoothConstants {
    fn default() -> Self {
        Self { c_base: 1.0, c_smooth: 1.0, d_smooth: 1.0 }
    }
}

fn rho_envelope(u: f64, constants: SmoothConstants) -> f64 {
    if u <= 1.0 {
        return 1.0;
    }
    let base = constants.d_smooth / (u * u.ln());
    (constants.c_smooth * base.powf(u)).min(1.0)
}

/// Heuristic density of `bound`-smooth values below `order`:
/// c * (d / (u ln u))^u at u = ln N / ln B. Report-only.
pub fn smoothness_envelope(order: u64, bound: u64, constants: SmoothConstants) -> f64 {
    assert!(order >= 2 && bound >= 2);
    let u = (order as f64).ln() / (bound as f64).ln();
    rho_envelope(u, constants)
}

/// Envelope for a rank-c affine space of exponent vectors: inverts
/// c = c_base * C / ln C for the implied smoothness bound C, then applies the
/// density envelope at v = ln N / ln C.
pub fn envelope_for_rank(order: u64, rank: usize, constants: SmoothConstants) -> f64 {
    assert!(order >= 2);
    let t = rank as f64 / constants.c_base;
    if t <= std::f64::consts::E {
        return 1.0;
    }
    let mut c = t * t.ln();
    for _ in 0..64 {
        c = t * c.ln();
    }
    if c >= order as f64 {
        return 1.0;
    }
    rho_envelope((order as f64).ln() / c.ln(), constants)
}

/// The primes the smoothing gate answers over, plus the hidden per-prime
/// exponents those answers are measured against.
pub struct FactorBase {
    bound: u64,
    primes: Vec<u64>,
    exponents: Vec<u64>,
    constants: SmoothConstants,
}

impl FactorBase {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn size(&self) -> usize {
        self.primes.len()
    }

    /// True discrete logs in the concrete backing, uniform draws otherwise.
    pub fn hidden_exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn constants(&self) -> SmoothConstants {
        self.constants
    }

    pub fn dump_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bound": self.bound,
            "primes": self.primes,
            "hidden_exponents": self.exponents,
            "constants": {
                "c_base": self.constants.c_base,
                "c_smooth": self.constants.c_smooth,
                "d_smooth": self.constants.d_smooth,
            },
        })
    }
}

enum Mode {
    Concrete {
        q: u64,
        generator: u64,
    },
    Idealized {
        density: f64,
        membership: HashMap<u64, Option<Vec<u64>>>,
        draws: ChaCha12Rng,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SmoothTallies {
    pub labelings: u64,
    pub group_ops: u64,
    pub equalities: u64,
    pub smooth_tests: u64,
    pub smoothings: u64,
    pub smooth_hits: u64,
    pub informative: u64,
}

impl SmoothTallies {
    pub fn element_ops(&self) -> u64 {
        self.labelings + self.group_ops + self.smooth_tests + self.smoothings
    }
}

/// A group session extended with smoothness gates. Wire 0 is the generator,
/// wire 1 the discrete-log instance; wires carry exponents together with
/// affine polynomials in the instance variable, and every smoothing hit is
/// folded into a zero set over (instance variable, Z_1..Z_b).
pub struct SmoothSession {
    mode: Mode,
    base: FactorBase,
    order: u64,
    span_modulus: u64,
    x: u64,
    wires: Vec<Option<u64>>,
    polys: Vec<Option<LinPolyModN>>,
    span: SpanBasisModP,
    eq_seen: HashSet<(WireId, WireId)>,
    tallies: SmoothTallies,
}

impl SmoothSession {
    /// Discrete-log instance x over the smallest primitive root mod q;
    /// smoothness of a wire means its canonical representative is
    /// `bound`-smooth.
    pub fn concrete(q: u64, bound: u64, x: u64) -> Self {
        assert!(is_probable_prime(&q.into()), "concrete backing needs a prime modulus");
        assert!(bound >= 2 && bound < q, "factor base must sit inside the group");
        let order = q - 1;
        let generator = primitive_root(q);
        let mut dlog = HashMap::with_capacity(order as usize);
        let mut acc = 1u64;
        for k in 0..order {
            dlog.insert(acc, k);
            acc = mul_mod(acc, generator, q);
        }
        let primes = primes_up_to(bound);
        let exponents = primes.iter().map(|p| dlog[p]).collect();
        let base =
            FactorBase { bound, primes, exponents, constants: SmoothConstants::default() };
        Self::build(Mode::Concrete { q, generator }, base, order, x)
    }

    /// Random smooth set of the given density over a prime-order group. The
    /// hidden exponents are uniform, and answer vectors come from factoring
    /// uniform `bound`-smooth integers drawn from [1, order].
    pub fn idealized(order: u64, bound: u64, density: f64, x: u64, seed: u64) -> Self {
        assert!(is_probable_prime(&order.into()), "idealized backing needs a prime order");
        assert!(bound >= 2);
        assert!((0.0..=1.0).contains(&density));
        let mut draws = ChaCha12Rng::seed_from_u64(seed);
        let primes = primes_up_to(bound);
        let exponents = primes.iter().map(|_| draws.gen_range(0..order)).collect();
        let base =
            FactorBase { bound, primes, exponents, constants: SmoothConstants::default() };
        Self::build(Mode::Idealized { density, membership: HashMap::new(), draws }, base, order, x)
    }

    fn build(mode: Mode, base: FactorBase, order: u64, x: u64) -> Self {
        let span_modulus = Factorization::of_u64(order)
            .prime_powers_u64()
            .iter()
            .map(|&(p, _)| p)
            .max()
            .expect("group order has a prime factor");
        let nvars = 1 + base.size();
        let mut session = Self {
            mode,
            base,
            order,
            span_modulus,
            x: x % order,
            wires: Vec::new(),
            polys: Vec::new(),
            span: SpanBasisModP::new(span_modulus, nvars),
            eq_seen: HashSet::new(),
            tallies: SmoothTallies::default(),
        };
        session.push_wire(Some(1), Some(LinPolyModN::constant(order, 1, 1)));
        let x = session.x;
        session.push_wire(Some(x), Some(LinPolyModN::variable(order, 1, 0)));
        session
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> &FactorBase {
        &self.base
    }

    pub fn generator(&self) -> WireId {
        0
    }

    pub fn instance(&self) -> WireId {
        1
    }

    pub fn hidden_x(&self) -> u64 {
        self.x
    }

    pub fn tallies(&self) -> SmoothTallies {
        self.tallies
    }

    pub fn span_rank(&self) -> usize {
        self.span.rank()
    }

    /// Prime the zero set is tracked over: the order itself when prime, its
    /// largest prime factor otherwise.
    pub fn span_modulus(&self) -> u64 {
        self.span_modulus
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self.mode, Mode::Concrete { .. })
    }

    pub fn modulus(&self) -> u64 {
        match self.mode {
            Mode::Concrete { q, .. } => q,
            Mode::Idealized { .. } => panic!("no ambient modulus in the idealized backing"),
        }
    }

    pub fn generator_residue(&self) -> u64 {
        match self.mode {
            Mode::Concrete { generator, .. } => generator,
            Mode::Idealized { .. } => panic!("no representatives in the idealized backing"),
        }
    }

    /// Canonical representative of a concrete wire.
    pub fn representative(&self, w: WireId) -> Option<u64> {
        match self.mode {
            Mode::Concrete { q, generator } => self.wires[w].map(|v| pow_mod(generator, v, q)),
            Mode::Idealized { .. } => panic!("no representatives in the idealized backing"),
        }
    }

    /// Smooth-set density: configured in the idealized backing, exhaustively
    /// counted in the concrete one.
    pub fn density(&self) -> f64 {
        match &self.mode {
            Mode::Idealized { density, .. } => *density,
            Mode::Concrete { .. } => {
                self.exhaustive_smooth_count() as f64 / self.order as f64
            }
        }
    }

    /// Number of base-smooth residues in the concrete group.
    pub fn exhaustive_smooth_count(&self) -> u64 {
        let Mode::Concrete { q, .. } = self.mode else {
            panic!("exhaustive counting needs the concrete backing");
        };
        let primes = &self.base.primes;
        (1..q).into_par_iter().filter(|&r| factor_over_base(r, primes).is_some()).count() as u64
    }

    /// Number of smooth residues whose exponent vector lies in `space`.
    pub fn exhaustive_subspace_count(&self, space: &AffineSpace) -> u64 {
        let Mode::Concrete { q, .. } = self.mode else {
            panic!("exhaustive counting needs the concrete backing");
        };
        let primes = &self.base.primes;
        (1..q)
            .into_par_iter()
            .filter_map(|r| factor_over_base(r, primes))
            .filter(|c| space.contains(c, self.order))
            .count() as u64
    }

    pub fn label(&mut self, value: u64) -> WireId {
        self.tallies.labelings += 1;
        if value < self.order {
            let poly = LinPolyModN::constant(self.order, 1, value);
            self.push_wire(Some(value), Some(poly))
        } else {
            self.push_wire(None, None)
        }
    }

    pub fn group_op(&mut self, a: WireId, b: WireId, sign: Sign) -> WireId {
        self.tallies.group_ops += 1;
        match (self.wires[a], self.wires[b]) {
            (Some(va), Some(vb)) => {
                let value = match sign {
                    Sign::Add => ((va as u128 + vb as u128) % self.order as u128) as u64,
                    Sign::Sub => (va + self.order - vb) % self.order,
                };
                let pa = self.polys[a].as_ref().expect("valid wire has a polynomial");
                let pb = self.polys[b].as_ref().expect("valid wire has a polynomial");
                let poly = match sign {
                    Sign::Add => pa.add(pb),
                    Sign::Sub => pa.sub(pb),
                };
                self.push_wire(Some(value), Some(poly))
            }
            _ => self.push_wire(None, None),
        }
    }

    /// Free comparison of two wires. Each unordered pair may be asked once;
    /// invalid wires never compare equal.
    pub fn equality(&mut self, a: WireId, b: WireId) -> bool {
        let key = normalize_pair(a, b);
        assert!(self.eq_seen.insert(key), "equality gate asked twice about wires {a} and {b}");
        self.tallies.equalities += 1;
        self.wires[a].is_some() && self.wires[a] == self.wires[b]
    }

    /// Membership bit for the smooth set; invalid wires answer 0.
    pub fn smooth_test(&mut self, w: WireId) -> bool {
        self.tallies.smooth_tests += 1;
        match self.wires[w] {
            Some(v) => self.classify(v).is_some(),
            None => false,
        }
    }

    /// Exponent vector over the factor base for a smooth wire, invalid or
    /// non-smooth wires answer nothing. Every hit induces the relation
    /// P - (c_1 Z_1 + ... + c_b Z_b); the hit counts as informative when the
    /// relation grows the zero-set span.
    pub fn smoothing(&mut self, w: WireId) -> Option<Vec<u64>> {
        self.tallies.smoothings += 1;
        let value = self.wires[w]?;
        let c = self.classify(value)?;
        self.tallies.smooth_hits += 1;
        let poly = self.polys[w].as_ref().expect("valid wire has a polynomial");
        if let Mode::Concrete { .. } = self.mode {
            let claimed = self.base.exponents.iter().zip(&c).fold(0u64, |acc, (&z, &ci)| {
                (acc + mul_mod(ci % self.order, z, self.order)) % self.order
            });
            assert_eq!(
                poly.eval(&[self.x]),
                claimed,
                "smoothing answer contradicts the hidden exponents"
            );
        }
        let l = self.span_modulus;
        let mut rel = Vec::with_capacity(2 + c.len());
        rel.push(poly.constant_term() % l);
        rel.push(poly.coeff(0) % l);
        rel.extend(c.iter().map(|&ci| (l - ci % l) % l));
        if self.span.insert(&LinPolyModN::from_coeffs(l, rel)) {
            self.tallies.informative += 1;
            if self.is_concrete() {
                // Sound relations all vanish at the true point, so they live
                // in a hyperplane: rank can reach 1 + b but never 2 + b.
                assert!(
                    self.span.rank() <= 1 + self.base.size(),
                    "zero set outgrew the hyperplane of sound relations"
                );
            }
        }
        Some(c)
    }

    fn classify(&mut self, value: u64) -> Option<Vec<u64>> {
        let order = self.order;
        let primes = &self.base.primes;
        match &mut self.mode {
            Mode::Concrete { q, generator } => {
                factor_over_base(pow_mod(*generator, value, *q), primes)
            }
            Mode::Idealized { density, membership, draws } => membership
                .entry(value)
                .or_insert_with(|| {
                    draws
                        .gen_bool(*density)
                        .then(|| sample_smooth_vector(draws, order, primes))
                })
                .clone(),
        }
    }

    fn push_wire(&mut self, value: Option<u64>, poly: Option<LinPolyModN>) -> WireId {
        self.wires.push(value);
        self.polys.push(poly);
        self.wires.len() - 1
    }
}

fn sample_smooth_vector(rng: &mut ChaCha12Rng, order: u64, primes: &[u64]) -> Vec<u64> {
    loop {
        let k = rng.gen_range(1..=order);
        if let Some(c) = factor_over_base(k, primes) {
            return c;
        }
    }
}

pub(crate) fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for v in 2..=n {
        if composite[v] {
            continue;
        }
        primes.push(v as u64);
        let mut m = v * v;
        while m <= n {
            composite[m] = true;
            m += v;
        }
    }
    primes
}

fn primitive_root(q: u64) -> u64 {
    let order = q - 1;
    let factors = Factorization::of_u64(order).prime_powers_u64();
    (2..q)
        .find(|&g| factors.iter().all(|&(p, _)| pow_mod(g, order / p, q) != 1))
        .expect("prime moduli have primitive roots")
}

pub(crate) fn factor_over_base(mut v: u64, primes: &[u64]) -> Option<Vec<u64>> {
    debug_assert!(v >= 1);
    let mut c = vec![0u64; primes.len()];
    for (slot, &p) in c.iter_mut().zip(primes) {
        while v % p == 0 {
            v /= p;
            *slot += 1;
        }
    }
    (v == 1).then_some(c)
}

/// offset + span(basis) inside the module of factor-base exponent vectors.
pub struct AffineSpace {
    offset: Vec<u64>,
    basis: Vec<Vec<u64>>,
}

impl AffineSpace {
    pub fn new(offset: Vec<u64>, basis: Vec<Vec<u64>>) -> Self {
        for v in &basis {
            assert_eq!(v.len(), offset.len(), "basis vector width mismatch");
        }
        Self { offset, basis }
    }

    /// Z^c x {0}^(b-c) with the free coordinates listed in `free`.
    pub fn coordinate(width: usize, free: &[usize]) -> Self {
        let basis = free
            .iter()
            .map(|&i| {
                let mut v = vec![0; width];
                v[i] = 1;
                v
            })
            .collect();
        Self::new(vec![0; width], basis)
    }

    pub fn full(width: usize) -> Self {
        let free: Vec<usize> = (0..width).collect();
        Self::coordinate(width, &free)
    }

    pub fn point(offset: Vec<u64>) -> Self {
        Self { offset, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Does `c` lie in the space mod `order`? Decided factor by factor with
    /// unit-pivot elimination, which is exact for squarefree orders.
    pub fn contains(&self, c: &[u64], order: u64) -> bool {
        assert_eq!(c.len(), self.offset.len(), "vector width mismatch");
        let width = self.offset.len();
        let diff: Vec<u64> = (0..width)
            .map(|i| (c[i] % order + order - self.offset[i] % order) % order)
            .collect();
        if self.basis.is_empty() {
            return diff.iter().all(|&d| d == 0);
        }
        for (p, k) in Factorization::of_u64(order).prime_powers_u64() {
            let pk = p.pow(k);
            let mut rows: Vec<Vec<u64>> = (0..width)
                .map(|i| {
                    let mut row: Vec<u64> = self.basis.iter().map(|v| v[i]).collect();
                    row.push(diff[i]);
                    row
                })
                .collect();
            let pivots = eliminate_mod_prime_power(&mut rows, self.basis.len(), pk, p);
            if !rows_consistent(&rows[pivots.len()..], self.basis.len(), pk) {
                return false;
            }
        }
        true
    }
}

/// Reduced row echelon over Z_{p^k} using unit pivots. Returns the pivot
/// columns in ascending order; rows beyond the returned rank keep whatever
/// p-divisible residue the elimination left behind.
pub(crate) fn eliminate_mod_prime_power(
    rows: &mut [Vec<u64>],
    unknowns: usize,
    pk: u64,
    p: u64,
) -> Vec<usize> {
    for row in rows.iter_mut() {
        for v in row.iter_mut() {
            *v %= pk;
        }
    }
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let rank = pivots.len();
        let Some(idx) = (rank..rows.len()).find(|&i| rows[i][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, idx);
        let inv = inv_mod(rows[rank][col], pk).expect("unit entries invert mod p^k");
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv, pk);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = (*v + pk - mul_mod(f, pv, pk)) % pk;
            }
        }
        pivots.push(col);
    }
    pivots
}

/// Consistency of the pivot-free rows. Necessary in general and complete for
/// prime moduli, where elimination leaves no nonzero coefficients behind.
pub(crate) fn rows_consistent(rows: &[Vec<u64>], unknowns: usize, pk: u64) -> bool {
    rows.iter().all(|row| {
        let g = row[..unknowns].iter().fold(pk, |acc, &v| acc.gcd(&v));
        row[unknowns] % g == 0
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SmoothRates {
    pub samples: u64,
    pub smooth_hits: u64,
    pub informative: u64,
    pub hit_rate: f64,
    pub informative_rate: f64,
    pub density: f64,
}

/// Smoothing-rate measurement on fresh uniform wires. Asserts the informative
/// rate stays below the smooth density at three sigma, which is the per-gate
/// collision bound the lower-bound argument consumes.
pub fn smooth_rate_stats(
    session: &mut SmoothSession,
    samples: u64,
    rng: &mut ChaCha12Rng,
) -> SmoothRates {
    assert!(samples > 0);
    let order = session.order();
    let before = session.tallies().informative;
    let mut hits = 0u64;
    for _ in 0..samples {
        let w = session.label(rng.gen_range(0..order));
        if session.smoothing(w).is_some() {
            hits += 1;
        }
    }
    let informative = session.tallies().informative - before;
    let density = session.density();
    let rates = SmoothRates {
        samples,
        smooth_hits: hits,
        informative,
        hit_rate: hits as f64 / samples as f64,
        informative_rate: informative as f64 / samples as f64,
        density,
    };
    assert!(
        within_upper(rates.informative_rate, density, samples),
        "informative rate {} cleared the density bound {}",
        rates.informative_rate,
        density
    );
    rates
}

/// Monte Carlo estimate of the density of smooth elements whose exponent
/// vector lies in `space`.
pub fn subspace_smooth_count(
    session: &mut SmoothSession,
    space: &AffineSpace,
    samples: u64,
    rng: &mut ChaCha12Rng,
) -> f64 {
    assert!(samples > 0);
    let order = session.order();
    let mut inside = 0u64;
    for _ in 0..samples {
        let w = session.label(rng.gen_range(0..order));
        if let Some(c) = session.smoothing(w) {
            if space.contains(&c, order) {
                inside += 1;
            }
        }
    }
    inside as f64 / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::within_lower;

    fn dlog_of(session: &SmoothSession, target: u64) -> u64 {
        let g = session.generator_residue();
        let q = session.modulus();
        (0..session.order()).find(|&k| pow_mod(g, k, q) == target).unwrap()
    }

    #[test]
    fn concrete_smoothness_follows_trial_division() {
        let mut s = SmoothSession::concrete(1019, 7, 5);
        assert_eq!(s.base().primes(), &[2, 3, 5, 7]);
        let w12 = s.label(dlog_of(&s, 12));
        let w11 = s.label(dlog_of(&s, 11));
        let w1 = s.label(0);
        assert!(s.smooth_test(w12));
        assert!(!s.smooth_test(w11));
        assert!(s.smooth_test(w1));
        assert_eq!(s.smoothing(w12), Some(vec![2, 1, 0, 0]));
        assert_eq!(s.smoothing(w11), None);
        assert_eq!(s.smoothing(w1), Some(vec![0, 0, 0, 0]));
        assert_eq!(s.representative(w12), Some(12));
    }

    #[test]
    fn invalid_wires_answer_blank() {
        let mut s = SmoothSession::concrete(1019, 7, 5);
        let w = s.label(5000);
        assert!(!s.smooth_test(w));
        assert_eq!(s.smoothing(w), None);
        let sum = s.group_op(w, s.instance(), Sign::Add);
        assert_eq!(s.smoothing(sum), None);
        assert_eq!(s.tallies().smooth_hits, 0);
    }

    #[test]
    fn hidden_exponents_are_true_dlogs() {
        let s = SmoothSession::concrete(1019, 30, 10);
        assert_eq!(s.base().size(), 10);
        let g = s.generator_residue();
        for (&p, &z) in s.base().primes().iter().zip(s.base().hidden_exponents()) {
            assert_eq!(pow_mod(g, z, 1019), p);
        }
        let json = s.base().dump_json();
        assert_eq!(json["bound"], 30);
        assert_eq!(json["primes"][9], 29);
    }

    #[test]
    fn concrete_relations_stay_inside_the_hyperplane() {
        let mut s = SmoothSession::concrete(1019, 7, 321);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..4000 {
            let base = s.label(rng.gen_range(0..s.order()));
            let shifted = s.group_op(base, s.instance(), Sign::Add);
            let _ = s.smoothing(shifted);
        }
        assert!(s.tallies().smooth_hits > 0);
        assert_eq!(s.tallies().informative as usize, s.span_rank());
        assert!(s.span_rank() <= 1 + s.base().size());
    }

    #[test]
    #[should_panic(expected = "asked twice")]
    fn repeated_equality_pairs_are_rejected() {
        let mut s = SmoothSession::concrete(1019, 7, 3);
        let w = s.label(5);
        let v = s.label(6);
        s.equality(w, v);
        s.equality(v, w);
    }

    #[test]
    fn idealized_answers_are_stable_per_element() {
        let mut s = SmoothSession::idealized(10007, 10, 0.3, 4, 11);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..300 {
            let v = rng.gen_range(0..s.order());
            let (wa, wb) = (s.label(v), s.label(v));
            let first = s.smoothing(wa);
            assert_eq!(s.smooth_test(wb), first.is_some());
            assert_eq!(s.smoothing(wb), first);
        }
    }

    #[test]
    fn idealized_rates_respect_the_configured_density() {
        let mut s = SmoothSession::idealized(10007, 20, 0.05, 9, 17);
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let rates = smooth_rate_stats(&mut s, 10_000, &mut rng);
        assert_eq!(rates.density, 0.05);
        assert!(rates.informative_rate <= rates.hit_rate);
        assert!(within_lower(rates.hit_rate, 0.05, 10_000));
        assert!(within_upper(rates.hit_rate, 0.05, 10_000));
    }

    #[test]
    fn zero_density_never_smooths() {
        let mut s = SmoothSession::idealized(10007, 10, 0.0, 1, 2);
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let rates = smooth_rate_stats(&mut s, 2000, &mut rng);
        assert_eq!(rates.smooth_hits, 0);
        assert_eq!(rates.hit_rate, 0.0);
        assert_eq!(rates.informative, 0);
    }

    #[test]
    fn concrete_rate_matches_the_exhaustive_count() {
        let mut s = SmoothSession::concrete(1019, 7, 77);
        let density = s.density();
        assert_eq!(density, s.exhaustive_smooth_count() as f64 / 1018.0);
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let rates = smooth_rate_stats(&mut s, 10_000, &mut rng);
        assert!(within_lower(rates.hit_rate, density, 10_000));
        assert!(within_upper(rates.hit_rate, density, 10_000));
    }

    #[test]
    fn subspace_estimates_follow_membership() {
        let mut s = SmoothSession::concrete(1019, 7, 3);
        let b = s.base().size();
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let full = subspace_smooth_count(&mut s, &AffineSpace::full(b), 4000, &mut rng);
        assert!(within_upper(full, s.density(), 4000));
        assert!(within_lower(full, s.density(), 4000));
        let unreachable = AffineSpace::point(vec![99, 0, 0, 0]);
        assert_eq!(subspace_smooth_count(&mut s, &unreachable, 1500, &mut rng), 0.0);
    }

    #[test]
    fn small_prime_coordinates_dominate_large_ones() {
        let s = SmoothSession::concrete(1019, 7, 3);
        let small = s.exhaustive_subspace_count(&AffineSpace::coordinate(4, &[0, 1]));
        let large = s.exhaustive_subspace_count(&AffineSpace::coordinate(4, &[2, 3]));
        // 2^a 3^b <= 1018 has 40 solutions, 5^c 7^d <= 1018 has 12.
        assert_eq!(small, 40);
        assert_eq!(large, 12);
        assert!(small >= large);
    }

    #[test]
    fn affine_membership_handles_composite_orders() {
        let space = AffineSpace::new(vec![1, 0], vec![vec![2, 3]]);
        assert!(space.contains(&[1, 0], 1018));
        assert!(space.contains(&[383, 64], 1018));
        assert!(!space.contains(&[2, 0], 1018));
        assert!(AffineSpace::point(vec![4, 5]).contains(&[4, 5], 1018));
        assert!(!AffineSpace::point(vec![0, 0]).contains(&[0, 1], 1018));
        assert_eq!(space.rank(), 1);
    }

    #[test]
    fn envelopes_shrink_as_smoothness_gets_harder() {
        let consts = SmoothConstants::default();
        let loose = smoothness_envelope(1 << 40, 1 << 20, consts);
        let tight = smoothness_envelope(1 << 40, 1 << 8, consts);
        assert!(loose > tight);
        assert!(tight > 0.0);
        assert_eq!(smoothness_envelope(100, 200, consts), 1.0);
        let big = envelope_for_rank(1 << 40, 40, consts);
        let small = envelope_for_rank(1 << 40, 8, consts);
        assert!(big > small);
        assert_eq!(envelope_for_rank(1 << 40, 2, consts), 1.0);
    }
}
