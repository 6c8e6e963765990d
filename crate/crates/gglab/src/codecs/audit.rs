//! Monte Carlo audits: run an algorithm over sampled instances, encode the
//! winning transcripts, decode without the oracle, and hold the measured
//! success rate against the incompressibility floor m >= log|M| + log eps.
//!
//! Every trial re-serializes its codeword through the worst-case bit layout
//! and asserts the declared length, so the reported m is backed by an
//! actual parseable bit string, not an estimate.

use rayon::prelude::*;

use super::encoding::{Encoding, Layout, Shape};
use super::games::{CheckedRepeatSq, CheckedRoot};
use super::unknown_order::{nbit_primes, OrderMessage, OrderVariant};
use super::{
    decode_dl, decode_gap_cdh, decode_gap_dl, decode_mdl, decode_omdl, decode_unknown_order,
    encode_dl, encode_gap_cdh, encode_gap_dl, encode_mdl, encode_omdl, encode_unknown_order,
};
use crate::harness::streams::{trial_seed, trial_stream};
use crate::oracle::{
    run_algorithm, Algorithm, GroupSpec, Problem, ProblemKind, Session, Transcript, WireId,
};
use crate::stats::{binomial, log2_rate_sigma};
use crate::tracker::ReplaySpec;
use rand::Rng;

/// Object-safe algorithm handle the audit drivers share across threads.
pub type DynAlg<O> = dyn Algorithm<Output = O> + Sync;

/// One audited configuration: the algorithm under test (with its output
/// check built in), the game parameters, and `ops_budget`, the total
/// element-operation cap the length formulas count with.  Every trial
/// asserts the run stayed under that cap.
pub enum AuditSpec<'a> {
    Dl {
        alg: &'a DynAlg<Option<u64>>,
        algorithm: &'a str,
        p: u64,
        ops_budget: u64,
    },
    Mdl {
        alg: &'a DynAlg<Option<Vec<u64>>>,
        algorithm: &'a str,
        p: u64,
        m: usize,
        ops_budget: u64,
    },
    GapDl {
        alg: &'a DynAlg<Option<u64>>,
        algorithm: &'a str,
        p: u64,
        ops_budget: u64,
        ddh_budget: u64,
    },
    GapCdh {
        alg: &'a DynAlg<Option<WireId>>,
        algorithm: &'a str,
        p: u64,
        ops_budget: u64,
        ddh_budget: u64,
    },
    Omdl {
        alg: &'a DynAlg<Option<Vec<u64>>>,
        algorithm: &'a str,
        p: u64,
        q: usize,
        n: usize,
        m: usize,
        ops_budget: u64,
    },
    Order {
        alg: &'a DynAlg<Option<u64>>,
        algorithm: &'a str,
        n_bits: u32,
        ops_budget: u64,
    },
    Rsa {
        alg: &'a DynAlg<Option<u64>>,
        algorithm: &'a str,
        n_bits: u32,
        ops_budget: u64,
        variant: OrderVariant,
    },
}

/// Outcome of one audited run of a codec over many trials.
///
/// `n` is the published modulus for known-order games and the order bound
/// 2^n_bits for unknown-order ones; `t` is the configured operation cap the
/// length formulas use.  `eps_hat` counts every exact decode, including
/// lucky fallbacks, which is the success rate Lemma-style counting bounds.
#[derive(Debug, Clone)]
pub struct CodecReport {
    pub codec: String,
    pub algorithm: String,
    pub n: u64,
    pub t: u64,
    pub trials: u64,
    pub wins: u64,
    pub successes: u64,
    pub eps_hat: f64,
    pub round_trip_on_wins: f64,
    pub m_bits: f64,
    pub log_m: f64,
    pub slack_bits: f64,
}

impl CodecReport {
    pub const CSV_HEADER: &'static str =
        "codec,algorithm,N,T,trials,eps_hat,m_bits,logM,slack_bits";

    pub fn csv_row(&self) -> String {
        let slack = if self.slack_bits.is_finite() {
            format!("{:.6}", self.slack_bits)
        } else {
            "inf".to_string()
        };
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            self.codec,
            self.algorithm,
            self.n,
            self.t,
            self.trials,
            self.eps_hat,
            self.m_bits,
            self.log_m,
            slack
        )
    }

    /// No trial decoded: the floor constrains nothing.
    pub fn vacuous(&self) -> bool {
        self.successes == 0
    }

    /// m >= log|M| + log eps within `sigmas` standard errors of log eps.
    pub fn lemma_holds(&self, sigmas: f64) -> bool {
        self.vacuous() || self.slack_bits >= -sigmas * log2_rate_sigma(self.eps_hat, self.trials)
    }
}

struct Outcome {
    win: bool,
    decoded: bool,
}

fn check_run(t: &Transcript, ops_cap: u64, cand_cap: u64) {
    assert!(!t.truncated && !t.invalid, "audited run was flagged by the session");
    let ops = t.tallies.element_ops();
    assert!(ops <= ops_cap, "run spent {ops} element operations, cap is {ops_cap}");
    let cands = t.tallies.equalities + t.tallies.ddh_queries + t.tallies.dl_queries;
    assert!(cands <= cand_cap, "run made {cands} candidate queries, cap is {cand_cap}");
}

/// Serialize and parse back, asserting the declared bit length is exact.
fn reserialized(enc: &Encoding, shape: Shape, layout: &Layout) -> Encoding {
    let (bytes, len) = enc.to_bits(layout);
    assert_eq!(len, enc.bit_length(layout), "serializer and length formula disagree");
    let parsed = Encoding::from_bits(&bytes, shape, layout).expect("own codeword parses");
    assert_eq!(&parsed, enc, "codeword changed across serialization");
    parsed
}

fn log2_plus_one(count: f64) -> f64 {
    (count + 1.0).log2()
}

fn run_trials<F>(trials: u64, trial_fn: F) -> Vec<Outcome>
where
    F: Fn(u64) -> Outcome + Sync + Send,
{
    (0..trials).into_par_iter().map(trial_fn).collect()
}

#[allow(clippy::too_many_arguments)]
fn finish(
    codec: &str,
    algorithm: &str,
    n: u64,
    t: u64,
    trials: u64,
    outcomes: &[Outcome],
    m_bits: f64,
    log_m: f64,
) -> CodecReport {
    let wins = outcomes.iter().filter(|o| o.win).count() as u64;
    let successes = outcomes.iter().filter(|o| o.decoded).count() as u64;
    let decoded_wins = outcomes.iter().filter(|o| o.win && o.decoded).count() as u64;
    let eps_hat = successes as f64 / trials.max(1) as f64;
    let round_trip_on_wins =
        if wins == 0 { 1.0 } else { decoded_wins as f64 / wins as f64 };
    let slack_bits =
        if successes == 0 { f64::INFINITY } else { m_bits - log_m - eps_hat.log2() };
    let report = CodecReport {
        codec: codec.into(),
        algorithm: algorithm.into(),
        n,
        t,
        trials,
        wins,
        successes,
        eps_hat,
        round_trip_on_wins,
        m_bits,
        log_m,
        slack_bits,
    };
    assert!(report.lemma_holds(3.0), "compression floor violated: {}", report.csv_row());
    report
}

/// How many n-bit primes can divide one relation gcd: the coefficients in
/// play stay below 2^(ops+1) in magnitude and each such prime exceeds
/// 2^(n_bits-1).
fn divisor_cap(ops_budget: u64, n_bits: u32) -> u64 {
    ((ops_budget + 1) / (n_bits as u64 - 1)).max(1)
}

/// Run `trials` independent games, encode every win, decode every codeword,
/// and report the measured rate against the counting bound.  Panics if any
/// trial breaks its structural contract (budget, candidate cap, serialized
/// length) or if the aggregate violates the floor beyond 3 sigma.
pub fn audit_compression(spec: &AuditSpec<'_>, trials: u64, seed: u64) -> CodecReport {
    match spec {
        AuditSpec::Dl { alg, algorithm, p, ops_budget } => {
            let (p, c) = (*p, *ops_budget);
            let cand_cap = binomial(c + 2, 2) as u64;
            let layout = Layout::new(cand_cap);
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let x = inst.gen_range(0..p);
                let mut session = Session::new(GroupSpec::known(p), Problem::Dl { x }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, cand_cap);
                let win = out == Some(x);
                let enc = if win { encode_dl(&t) } else { Encoding::Bot };
                let enc = reserialized(&enc, Shape::Dl, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_dl(&enc, alg, alg_seed, p, &mut fb);
                Outcome { win, decoded: got == x }
            });
            let m_bits = log2_plus_one(binomial(c + 2, 2) as f64);
            finish("dl", algorithm, p, c, trials, &outcomes, m_bits, (p as f64).log2())
        }
        AuditSpec::Mdl { alg, algorithm, p, m, ops_budget } => {
            let (p, m, c) = (*p, *m, *ops_budget);
            let cand_cap = binomial(c + m as u64 + 1, 2) as u64;
            let layout = Layout::new(cand_cap);
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let xs: Vec<u64> = (0..m).map(|_| inst.gen_range(0..p)).collect();
                let mut session =
                    Session::new(GroupSpec::known(p), Problem::Mdl { xs: xs.clone() }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, cand_cap);
                let win = out.as_deref() == Some(&xs[..]);
                let enc = if win { encode_mdl(&t, m) } else { Encoding::Bot };
                let enc = reserialized(&enc, Shape::Mdl { m }, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_mdl(&enc, alg, alg_seed, p, m, &mut fb);
                Outcome { win, decoded: got == xs }
            });
            let m_bits = log2_plus_one(binomial(cand_cap, m as u64) as f64);
            let cap = crate::stats::log2_binomial(cand_cap + 1, m as u64);
            assert!(m_bits <= cap + 1e-9, "codeword space exceeds its counting bound");
            finish("mdl", algorithm, p, c, trials, &outcomes, m_bits, m as f64 * (p as f64).log2())
        }
        AuditSpec::GapDl { alg, algorithm, p, ops_budget, ddh_budget } => {
            let (p, c, q) = (*p, *ops_budget, *ddh_budget);
            let cand_cap = binomial(c + 2, 2) as u64 + q;
            let layout = Layout::new(cand_cap);
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let x = inst.gen_range(0..p);
                let mut session = Session::new(GroupSpec::known(p), Problem::GapDl { x }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                assert!(t.tallies.ddh_queries <= q, "DDH budget exceeded");
                check_run(&t, c, cand_cap);
                let win = out == Some(x);
                let enc = if win { encode_gap_dl(&t, x) } else { Encoding::Bot };
                let enc = reserialized(&enc, Shape::GapDl, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_gap_dl(&enc, alg, alg_seed, p, &mut fb);
                Outcome { win, decoded: got == x }
            });
            let m_bits = log2_plus_one(2.0 * cand_cap as f64);
            finish("gap_dl", algorithm, p, c, trials, &outcomes, m_bits, (p as f64).log2())
        }
        AuditSpec::GapCdh { alg, algorithm, p, ops_budget, ddh_budget } => {
            let (p, c, q) = (*p, *ops_budget, *ddh_budget);
            let cand_cap = binomial(c + 3, 2) as u64 + q;
            let layout = Layout::new(cand_cap).with_modulus(p);
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let x = inst.gen_range(0..p);
                let y = inst.gen_range(0..p);
                let mut session =
                    Session::new(GroupSpec::known(p), Problem::GapCdh { x, y }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                assert!(t.tallies.ddh_queries <= q, "DDH budget exceeded");
                check_run(&t, c, cand_cap);
                let win = out.is_some();
                let enc = if win { encode_gap_cdh(&t, x, y) } else { Encoding::Bot };
                let enc = reserialized(&enc, Shape::GapCdh, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_gap_cdh(&enc, alg, alg_seed, p, &mut fb);
                Outcome { win, decoded: got == (x, y) }
            });
            let m_bits = log2_plus_one(2.0 * cand_cap as f64 * p as f64);
            finish("gap_cdh", algorithm, p, c, trials, &outcomes, m_bits, 2.0 * (p as f64).log2())
        }
        AuditSpec::Omdl { alg, algorithm, p, q, n, m, ops_budget } => {
            let (p, q, n, m, c) = (*p, *q, *n, *m, *ops_budget);
            assert!(n <= m, "cannot point at more collisions than solved targets");
            let total = q + m;
            let cand_cap = binomial(1 + total as u64 + c, 2) as u64 + q as u64;
            let layout = Layout::new(cand_cap).with_modulus(p);
            let shape = Shape::Omdl { n, q, reveals: m - n };
            let outcomes = run_trials(trials, |trial| {
                let inst = trial_stream(seed, "instance", trial);
                let mut session = Session::new(GroupSpec::known(p), Problem::OmDl { q }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let truth = session.challenges().to_vec();
                let t = session.finish();
                assert_eq!(truth.len(), total, "adversary must draw every challenge");
                check_run(&t, c, cand_cap);
                let win = out.as_deref() == Some(&truth[..]);
                let enc = if win { encode_omdl(&t, n, &truth) } else { Encoding::Bot };
                let enc = reserialized(&enc, shape, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_omdl(&enc, alg, alg_seed, p, q, total, &mut fb);
                Outcome { win, decoded: got == truth }
            });
            let m_bits = log2_plus_one(
                binomial(cand_cap, n as u64) as f64 * (p as f64).powi((q + m - n) as i32),
            );
            let log_m = total as f64 * (p as f64).log2();
            finish("omdl", algorithm, p, c, trials, &outcomes, m_bits, log_m)
        }
        AuditSpec::Order { alg, algorithm, n_bits, ops_budget } => {
            let (n_bits, c) = (*n_bits, *ops_budget);
            let primes = nbit_primes(n_bits);
            let k_div = divisor_cap(c, n_bits);
            let cand_cap = binomial(c + 1, 2) as u64;
            let layout = Layout::new(cand_cap).with_divisor_lists(&[k_div]);
            let spec = ReplaySpec {
                problem: ProblemKind::OrderFind,
                modulus: None,
                bit_length: n_bits,
                nvars: 0,
            };
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let hidden = primes[inst.gen_range(0..primes.len())];
                let mut session =
                    Session::new(GroupSpec::unknown(hidden), Problem::OrderFind, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, cand_cap);
                let win = out == Some(hidden);
                let enc = if win {
                    encode_unknown_order(
                        &t,
                        OrderVariant::Prime,
                        n_bits,
                        &OrderMessage::Prime(hidden),
                    )
                } else {
                    Encoding::Bot
                };
                if let Encoding::Order { divisor_index, .. } = &enc {
                    assert!(*divisor_index <= k_div, "divisor list exceeded its cap");
                }
                let enc = reserialized(&enc, Shape::Order, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_unknown_order(
                    &enc,
                    alg,
                    alg_seed,
                    &spec,
                    OrderVariant::Prime,
                    n_bits,
                    &mut fb,
                );
                Outcome { win, decoded: got == hidden }
            });
            let m_bits = log2_plus_one(binomial(c + 1, 2) as f64 * k_div as f64);
            let log_m = (primes.len() as f64).log2();
            finish("order", algorithm, 1 << n_bits, c, trials, &outcomes, m_bits, log_m)
        }
        AuditSpec::Rsa { alg, algorithm, n_bits, ops_budget, variant } => {
            let (n_bits, c, variant) = (*n_bits, *ops_budget, *variant);
            let primes = nbit_primes(n_bits);
            assert!(primes.len() >= 2, "no prime pair exists at this width");
            let k_div = divisor_cap(c, n_bits);
            let gate_pairs = binomial(c + 1, 2) as u64;
            let (codec, collisions, count) = match variant {
                OrderVariant::RsaOneCollision => {
                    ("rsa_order", 1, gate_pairs as f64 * (k_div * k_div) as f64)
                }
                OrderVariant::RsaTwoCollisions => (
                    "rsa_order_2c",
                    2,
                    binomial(gate_pairs, 2) as f64 * (k_div * k_div) as f64,
                ),
                OrderVariant::Prime => panic!("prime variant belongs to the order audit"),
            };
            let layout = Layout::new(gate_pairs).with_divisor_lists(&[k_div, k_div]);
            let shape = Shape::Rsa { collisions };
            let spec = ReplaySpec {
                problem: ProblemKind::RsaOrder,
                modulus: None,
                bit_length: 2 * n_bits,
                nvars: 0,
            };
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let i = inst.gen_range(0..primes.len());
                let mut j = inst.gen_range(0..primes.len() - 1);
                if j >= i {
                    j += 1;
                }
                let (pf, qf) = (primes[i].min(primes[j]), primes[i].max(primes[j]));
                let hidden = pf * qf;
                let mut session =
                    Session::new(GroupSpec::unknown(hidden), Problem::RsaOrder, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(alg, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, gate_pairs);
                let win = out == Some(hidden);
                let enc = if win {
                    encode_unknown_order(&t, variant, n_bits, &OrderMessage::Rsa(pf, qf))
                } else {
                    Encoding::Bot
                };
                if let Encoding::RsaOrder { divisor_indices: (a, b), .. } = &enc {
                    assert!(*a <= k_div && *b <= k_div, "divisor list exceeded its cap");
                }
                let enc = reserialized(&enc, shape, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got =
                    decode_unknown_order(&enc, alg, alg_seed, &spec, variant, n_bits, &mut fb);
                Outcome { win, decoded: got == hidden }
            });
            let log_m = crate::stats::log2_binomial(primes.len() as u64, 2);
            finish(codec, algorithm, 1 << (2 * n_bits), c, trials, &outcomes,
                log2_plus_one(count), log_m)
        }
    }
}

/// The two verifier-appended unknown-order games.  The audit wraps the raw
/// prover in its checking harness, so a reported win is a verified win.
pub enum RootRepeatedKind<'a> {
    RootExtraction { prover: &'a DynAlg<Option<(u64, WireId)>> },
    RepeatedSquaring { prover: &'a DynAlg<Option<WireId>>, t: u32 },
}

/// Audit the root-extraction or repeated-squaring game at `n_bits`-bit
/// prime orders.  `ops_budget` caps the prover; the verifier's ladder or
/// squaring chain is added on top and counted in the reported T.
pub fn audit_root_repeated(
    kind: &RootRepeatedKind<'_>,
    algorithm: &str,
    n_bits: u32,
    ops_budget: u64,
    trials: u64,
    seed: u64,
) -> CodecReport {
    let primes = nbit_primes(n_bits);
    match kind {
        RootRepeatedKind::RootExtraction { prover } => {
            let c = ops_budget + 2 * n_bits as u64;
            let k_div = divisor_cap(c, n_bits);
            let cand_cap = binomial(c + 2, 2) as u64;
            let layout = Layout::new(cand_cap).with_divisor_lists(&[k_div]);
            let spec = ReplaySpec {
                problem: ProblemKind::RootExt,
                modulus: None,
                bit_length: n_bits,
                nvars: 1,
            };
            let checked = CheckedRoot { inner: *prover };
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let hidden = primes[inst.gen_range(0..primes.len())];
                let y = inst.gen_range(0..hidden);
                let mut session =
                    Session::new(GroupSpec::unknown(hidden), Problem::RootExt { y }, inst);
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(&checked, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, cand_cap);
                let win = out.is_some();
                let enc = if win {
                    encode_unknown_order(
                        &t,
                        OrderVariant::Prime,
                        n_bits,
                        &OrderMessage::Prime(hidden),
                    )
                } else {
                    Encoding::Bot
                };
                let enc = reserialized(&enc, Shape::Order, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_unknown_order(
                    &enc,
                    &checked,
                    alg_seed,
                    &spec,
                    OrderVariant::Prime,
                    n_bits,
                    &mut fb,
                );
                Outcome { win, decoded: got == hidden }
            });
            let m_bits = log2_plus_one(binomial(c + 2, 2) as f64 * k_div as f64);
            let log_m = (primes.len() as f64).log2();
            finish("rootext", algorithm, 1 << n_bits, c, trials, &outcomes, m_bits, log_m)
        }
        RootRepeatedKind::RepeatedSquaring { prover, t } => {
            let t_chain = *t;
            let c = ops_budget + t_chain as u64;
            let k_div = divisor_cap(c, n_bits);
            let cand_cap = binomial(c + 1, 2) as u64;
            let layout = Layout::new(cand_cap).with_divisor_lists(&[k_div]);
            let spec = ReplaySpec {
                problem: ProblemKind::RepeatSq { t: t_chain },
                modulus: None,
                bit_length: n_bits,
                nvars: 0,
            };
            let checked = CheckedRepeatSq { inner: *prover, t: t_chain };
            let outcomes = run_trials(trials, |trial| {
                let mut inst = trial_stream(seed, "instance", trial);
                let hidden = primes[inst.gen_range(0..primes.len())];
                let mut session = Session::new(
                    GroupSpec::unknown(hidden),
                    Problem::RepeatSq { t: t_chain },
                    inst,
                );
                let alg_seed = trial_seed(seed, "algorithm", trial);
                let out = run_algorithm(&checked, &mut session, alg_seed);
                let t = session.finish();
                check_run(&t, c, cand_cap);
                let win = out.is_some();
                let enc = if win {
                    encode_unknown_order(
                        &t,
                        OrderVariant::Prime,
                        n_bits,
                        &OrderMessage::Prime(hidden),
                    )
                } else {
                    Encoding::Bot
                };
                let enc = reserialized(&enc, Shape::Order, &layout);
                let mut fb = trial_stream(seed, "codec-fallback", trial);
                let got = decode_unknown_order(
                    &enc,
                    &checked,
                    alg_seed,
                    &spec,
                    OrderVariant::Prime,
                    n_bits,
                    &mut fb,
                );
                Outcome { win, decoded: got == hidden }
            });
            let m_bits = log2_plus_one(binomial(c + 1, 2) as f64 * k_div as f64);
            let log_m = (primes.len() as f64).log2();
            finish("repeatsq", algorithm, 1 << n_bits, c, trials, &outcomes, m_bits, log_m)
        }
    }
}
