//! Reference generic adversaries.  Each one is a deterministic callback
//! program against the oracle trait, so every run can be replayed without
//! the oracle by the tracker.  Budgets are respected by construction:
//! element gates are spent exactly as documented per algorithm.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{crt, mul_mod, pow_mod, Factorization};
use crate::oracle::{Algorithm, GroupOracle, Sign, WireId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoKind {
    Bsgs,
    RandomCollision,
    PohligHellman,
    MdlBsgs,
    OrderFind,
    Omdl,
}

/// Algorithm selector plus the budget knobs the harness carries around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgoSpec {
    pub kind: AlgoKind,
    pub budget: u64,
    pub seed: u64,
}

/// g^c from an existing wire, by double-and-add.  Spends about 2 log c
/// group operations; c = 0 costs one labeling.
pub(crate) fn scalar_mul(oracle: &mut dyn GroupOracle, w: WireId, c: u64) -> WireId {
    if c == 0 {
        return oracle.label(0);
    }
    let bits = 64 - c.leading_zeros();
    let mut acc = w;
    for b in (0..bits - 1).rev() {
        acc = oracle.group_op(acc, acc, Sign::Add);
        if (c >> b) & 1 == 1 {
            acc = oracle.group_op(acc, w, Sign::Add);
        }
    }
    acc
}

/// Baby wires base^j for j in [0, s), plus base^s for giant stepping.
/// Costs s ops: one labeling and s-1 group operations.
pub(crate) fn baby_table(oracle: &mut dyn GroupOracle, base: WireId, s: u64) -> (Vec<WireId>, WireId) {
    let mut babies = Vec::with_capacity(s as usize);
    babies.push(oracle.label(0));
    let mut last = base;
    for j in 1..s {
        if j == 1 {
            babies.push(base);
        } else {
            last = oracle.group_op(last, base, Sign::Add);
            babies.push(last);
        }
    }
    let stride = if s == 1 { base } else { oracle.group_op(last, base, Sign::Add) };
    (babies, stride)
}

/// Giant-step scan: compare target - i*base^s against every baby; first hit
/// yields i*s + j.  Costs up to s-1 ops (the i=0 column is the target
/// itself).
pub(crate) fn giant_scan(
    oracle: &mut dyn GroupOracle,
    target: WireId,
    babies: &[WireId],
    stride: WireId,
    s: u64,
) -> Option<u64> {
    let mut w = target;
    for i in 0..s {
        if i > 0 {
            w = oracle.group_op(w, stride, Sign::Sub);
        }
        for (j, &baby) in babies.iter().enumerate() {
            if oracle.equality(w, baby) {
                return Some(i * s + j as u64);
            }
        }
    }
    None
}

/// Baby-step giant-step discrete log under an element-gate budget T.
/// With s = T/2 the full table and scan spend 2s-1 gates and cover
/// exponents below s*s.
#[derive(Debug, Clone, Copy)]
pub struct BsgsDl {
    pub ops_budget: u64,
}

impl Algorithm for BsgsDl {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
        assert!(self.ops_budget >= 2, "contract violation: BSGS needs a budget of at least 2");
        let n = oracle.published_order().expect("BSGS needs a published order");
        let s = self.ops_budget / 2;
        let h = oracle.instance_wires()[0];
        let g = oracle.generator();
        let (babies, stride) = baby_table(oracle, g, s);
        giant_scan(oracle, h, &babies, stride, s).map(|d| d % n)
    }
}

/// Birthday-style tester: T/2 labeled wires with uniform exponents, the
/// same wires shifted onto the target, and every cross pair checked.  A hit
/// at (i, j) means x = a_i - a_j.
#[derive(Debug, Clone, Copy)]
pub struct RandomCollisionDl {
    pub ops_budget: u64,
}

impl Algorithm for RandomCollisionDl {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<u64> {
        let t = self.ops_budget;
        let n = oracle.published_order().expect("collision tester needs a published order");
        let h = oracle.instance_wires()[0];
        if t >= n {
            for v in 0..n {
                let w = oracle.label(v);
                if oracle.equality(w, h) {
                    return Some(v);
                }
            }
            unreachable!("exhaustive sweep covers every residue");
        }
        let per_side = t / 2;
        let mut exps = Vec::with_capacity(per_side as usize);
        let mut left = Vec::with_capacity(per_side as usize);
        for _ in 0..per_side {
            let a = rng.gen_range(0..n);
            exps.push(a);
            left.push(oracle.label(a));
        }
        let mut right = Vec::with_capacity(per_side as usize);
        for &w in &left {
            right.push(oracle.group_op(h, w, Sign::Add));
        }
        for (i, &wi) in left.iter().enumerate() {
            for (j, &wj) in right.iter().enumerate() {
                if oracle.equality(wi, wj) {
                    return Some((exps[i] + n - exps[j]) % n);
                }
            }
        }
        None
    }
}

/// Discrete log by prime-power digits: for each p^e dividing N, lift digits
/// base p with a mini-BSGS in the order-p subgroup, then CRT.  Never fails
/// on a well-formed session; spends about sum of e*(sqrt(p) + log N) gates.
#[derive(Debug, Clone, Copy)]
pub struct PohligHellmanDl;

impl Algorithm for PohligHellmanDl {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
        let n = oracle.published_order().expect("Pohlig-Hellman needs a published order");
        let h = oracle.instance_wires()[0];
        let g = oracle.generator();
        let mut residues = Vec::new();
        for (p, e) in Factorization::of_u64(n).prime_powers_u64() {
            let pe = p.pow(e);
            let base = scalar_mul(oracle, g, n / p);
            let r = (p as f64).sqrt().ceil() as u64;
            let (babies, stride) = baby_table(oracle, base, r);
            let giants = p.div_ceil(r);
            let mut xq = 0u64;
            for k in 0..e {
                let gx = scalar_mul(oracle, g, xq % n);
                let diff = oracle.group_op(h, gx, Sign::Sub);
                let lift = scalar_mul(oracle, diff, n / p.pow(k + 1));
                let mut w = lift;
                let mut digit = None;
                'scan: for i in 0..giants {
                    if i > 0 {
                        w = oracle.group_op(w, stride, Sign::Sub);
                    }
                    for (j, &baby) in babies.iter().enumerate() {
                        if oracle.equality(w, baby) {
                            digit = Some((i * r + j as u64) % p);
                            break 'scan;
                        }
                    }
                }
                xq += digit? * p.pow(k);
            }
            residues.push((xq % pe, pe));
        }
        Some(crt(&residues))
    }
}

/// Multi-target discrete log sharing one baby table: s baby steps once,
/// then a giant scan per instance wire.  Budget T covers s + m*s gates with
/// s = T/(m+1).
#[derive(Debug, Clone, Copy)]
pub struct MdlBsgs {
    pub ops_budget: u64,
}

impl Algorithm for MdlBsgs {
    type Output = Vec<Option<u64>>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Vec<Option<u64>> {
        let n = oracle.published_order().expect("BSGS needs a published order");
        let targets = oracle.instance_wires();
        let m = targets.len() as u64;
        let s = (self.ops_budget / (m + 1)).max(1);
        let g = oracle.generator();
        let (babies, stride) = baby_table(oracle, g, s);
        targets
            .into_iter()
            .map(|h| giant_scan(oracle, h, &babies, stride, s).map(|d| d % n))
            .collect()
    }
}

/// Order finding in an unknown-order group: sweep g^j for j in [1, s] and
/// giants g^{i*s}; the first collision, scanned in increasing exponent
/// difference, happens exactly at difference N.
#[derive(Debug, Clone, Copy)]
pub struct GenericOrderFind {
    pub bit_length: u32,
    pub ops_budget: u64,
}

impl GenericOrderFind {
    /// Budget that guarantees success for any order below 2^n.
    pub fn with_full_coverage(bit_length: u32) -> Self {
        let s = 1u64 << bit_length.div_ceil(2);
        Self { bit_length, ops_budget: 2 * s - 2 }
    }
}

impl Algorithm for GenericOrderFind {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
        let full = 1u64 << self.bit_length.div_ceil(2);
        let s = full.min(self.ops_budget / 2 + 1);
        let g = oracle.generator();
        // Babies g^1..g^s; wire index j-1 holds g^j.
        let mut babies = vec![g];
        let mut last = g;
        for _ in 2..=s {
            last = oracle.group_op(last, g, Sign::Add);
            babies.push(last);
        }
        let mut giant = last;
        for i in 1..=s {
            if i > 1 {
                giant = oracle.group_op(giant, last, Sign::Add);
            }
            for j in (1..=s).rev() {
                if i == 1 && j == s {
                    continue;
                }
                if oracle.equality(giant, babies[j as usize - 1]) {
                    return Some(i * s - j);
                }
            }
        }
        None
    }
}

/// One-more discrete log adversary: draws q+m challenges, spends the DL
/// oracle on the first q, then solves n of the remaining m by shared-table
/// BSGS.  DL queries only ever touch fresh challenge wires, so none is
/// predictable from the zero set.
#[derive(Debug, Clone, Copy)]
pub struct OmdlAdversary {
    pub q: usize,
    pub n: usize,
    pub m: usize,
    pub bsgs_budget: u64,
}

impl Algorithm for OmdlAdversary {
    type Output = Vec<Option<u64>>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Vec<Option<u64>> {
        assert!(self.n <= self.m, "contract violation: cannot solve more targets than exist");
        let n_order = oracle.published_order().expect("adversary needs a published order");
        let total = self.q + self.m;
        let chals: Vec<WireId> = (0..total).map(|_| oracle.chal()).collect();
        let mut answers: Vec<Option<u64>> = vec![None; total];
        for i in 0..self.q {
            answers[i] = oracle.dl(chals[i]);
        }
        if self.n > 0 && self.bsgs_budget >= 2 {
            let s = self.bsgs_budget / 2;
            let g = oracle.generator();
            let (babies, stride) = baby_table(oracle, g, s);
            for k in 0..self.n {
                answers[self.q + k] =
                    giant_scan(oracle, chals[self.q + k], &babies, stride, s).map(|d| d % n_order);
            }
        }
        answers
    }
}

/// Per-instance multi-target BSGS: every target gets its own baby table,
/// so each solved instance leaves its own informative collision.  Budget T
/// grants each of the m targets T/m gates.
#[derive(Debug, Clone, Copy)]
pub struct MdlPerInstanceBsgs {
    pub ops_budget: u64,
}

impl Algorithm for MdlPerInstanceBsgs {
    type Output = Vec<Option<u64>>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Vec<Option<u64>> {
        let n = oracle.published_order().expect("BSGS needs a published order");
        let targets = oracle.instance_wires();
        let m = targets.len() as u64;
        let s = (self.ops_budget / m / 2).max(1);
        let g = oracle.generator();
        targets
            .into_iter()
            .map(|h| {
                let (babies, stride) = baby_table(oracle, g, s);
                giant_scan(oracle, h, &babies, stride, s).map(|d| d % n)
            })
            .collect()
    }
}

/// Gap-DL solver that never takes a baby step: it scans candidate squares v
/// and asks the DDH oracle whether x*x = v, then disambiguates the two
/// square roots with one more DDH query.  The winning answer-1 query
/// induces the quadratic X^2 - v, the codec's two-root showcase.
#[derive(Debug, Clone, Copy)]
pub struct GapDlSquareScan {
    pub scan_cap: u64,
}

impl Algorithm for GapDlSquareScan {
    type Output = Option<u64>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<u64> {
        let p = oracle.published_order().expect("square scan needs a published order");
        let h = oracle.instance_wires()[0];
        let g = oracle.generator();
        for v in 0..self.scan_cap.min(p) {
            let wv = oracle.label(v);
            if !oracle.ddh(h, h, wv) {
                continue;
            }
            let mut roots = (0..p).filter(|&r| mul_mod(r, r, p) == v);
            let r1 = roots.next()?;
            let r2 = roots.next().unwrap_or(r1);
            if r1 == r2 {
                return Some(r1);
            }
            let wr = oracle.label(r1);
            return if oracle.ddh(h, g, wr) { Some(r1) } else { Some(r2) };
        }
        None
    }
}

/// Gap-CDH solver: BSGS recovers x from g^x, then g^{xy} is x-fold
/// double-and-add on g^y.  The budget covers the BSGS table plus the
/// final ladder of at most 2 log p gates.
#[derive(Debug, Clone, Copy)]
pub struct GapCdhBsgs {
    pub ops_budget: u64,
}

impl Algorithm for GapCdhBsgs {
    type Output = Option<WireId>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<WireId> {
        let p = oracle.published_order().expect("BSGS needs a published order");
        let inst = oracle.instance_wires();
        let (hx, hy) = (inst[0], inst[1]);
        let ladder = 2 * crate::algebra::ceil_log2(p) as u64;
        let s = (self.ops_budget.saturating_sub(ladder) / 2).max(1);
        let g = oracle.generator();
        let (babies, stride) = baby_table(oracle, g, s);
        let x = giant_scan(oracle, hx, &babies, stride, s)? % p;
        Some(scalar_mul(oracle, hy, x))
    }
}

/// Square-root extractor: finds the (odd) order N generically, then raises
/// the instance to (N+1)/2, the inverse of 2 mod N.  Always outputs e = 2.
#[derive(Debug, Clone, Copy)]
pub struct RootExtractor {
    pub bit_length: u32,
    pub ops_budget: u64,
}

impl Algorithm for RootExtractor {
    type Output = Option<(u64, WireId)>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<(u64, WireId)> {
        let ladder = 2 * self.bit_length as u64;
        let finder = GenericOrderFind {
            bit_length: self.bit_length,
            ops_budget: self.ops_budget.saturating_sub(ladder),
        };
        let n = finder.run(oracle, rng)?;
        let half = (n + 1) / 2;
        let h = oracle.instance_wires()[0];
        Some((2, scalar_mul(oracle, h, half)))
    }
}

/// Root claim that skips the work: e = 2 with the instance wire itself as
/// the alleged root, which verifies only when 2x = x mod N.
#[derive(Debug, Clone, Copy)]
pub struct TrivialRootClaimer;

impl Algorithm for TrivialRootClaimer {
    type Output = Option<(u64, WireId)>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<(u64, WireId)> {
        Some((2, oracle.instance_wires()[0]))
    }
}

/// Repeated-squaring prover that beats the t-gate chain once the order is
/// in reach: it finds N, reduces 2^t mod N, and ladders to the answer.
/// The verifier's chain then collides informatively at 2^t mod N vs 2^t.
#[derive(Debug, Clone, Copy)]
pub struct RepeatSqProver {
    pub bit_length: u32,
    pub ops_budget: u64,
    pub t: u32,
}

impl Algorithm for RepeatSqProver {
    type Output = Option<WireId>;

    fn run(&self, oracle: &mut dyn GroupOracle, rng: &mut ChaCha12Rng) -> Option<WireId> {
        let ladder = 2 * self.bit_length as u64;
        let finder = GenericOrderFind {
            bit_length: self.bit_length,
            ops_budget: self.ops_budget.saturating_sub(ladder),
        };
        let n = finder.run(oracle, rng)?;
        let e = pow_mod(2, self.t as u64, n);
        let g = oracle.generator();
        Some(scalar_mul(oracle, g, e))
    }
}

/// The baseline the repeated-squaring game is measured against: t plain
/// squarings, one gate each.  Never collides, so for squarings < t it wins
/// only when N divides 2^t - 2^squarings.
#[derive(Debug, Clone, Copy)]
pub struct ChainSquarer {
    pub squarings: u32,
}

impl Algorithm for ChainSquarer {
    type Output = Option<WireId>;

    fn run(&self, oracle: &mut dyn GroupOracle, _rng: &mut ChaCha12Rng) -> Option<WireId> {
        let mut acc = oracle.generator();
        for _ in 0..self.squarings {
            acc = oracle.group_op(acc, acc, Sign::Add);
        }
        Some(acc)
    }
}
