//! Controlled noise injection and recovery-accuracy experiments.
//!
//! A deterministic log is turned into an SK log: a fraction `t_p` of each
//! trace's events receives `n_t - 1` alternative labels, and the probability
//! mass is split so that the true label is the most probable one with
//! probability `p_a`. Recovery methods are then scored by micro-averaged
//! per-event accuracy over a grid of `p_a` values.
//!
//! The mass split draws `n_t` values from a symmetric Dirichlet(1, …, 1),
//! rejects draws with a tied maximum, hands the maximum to the true label
//! with probability `p_a` (otherwise to a uniformly chosen alternative) and
//! shuffles the remaining values over the remaining labels.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::align::{search_optimal_alignment, AlignError, SearchOptions};
use crate::cost::CostFunction;
use crate::log::{argmax_recover, build_trace_net, SkEvent, SkTrace};
use crate::net::SystemNet;
use crate::product::build_sync_product;
use crate::Activity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelPool {
    /// Every label occurring in the log.
    All,
    /// The `k` most frequent labels of the log.
    TopK(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig {
    /// Labels per uncertain event, true label included.
    pub n_t: usize,
    /// Fraction of each trace's events made uncertain.
    pub t_p: f64,
    /// Probability that the true label receives the largest mass.
    pub p_a: f64,
    pub label_pool: LabelPool,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            n_t: 2,
            t_p: 1.0,
            p_a: 0.0,
            label_pool: LabelPool::All,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("n_t must be at least 2 when t_p > 0, got {0}")]
    TooFewAlternatives(usize),
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("k must lie in 1..={available}, got {k}")]
    BadK { k: usize, available: usize },
    #[error("case `{case}`: label pool offers {available} alternatives to `{label}`, need {needed}")]
    PoolTooSmall {
        case: String,
        label: String,
        available: usize,
        needed: usize,
    },
    #[error("case `{case}` event `{event}` is not deterministic")]
    NotDeterministic { case: String, event: String },
    #[error("trace {index}: recovered {recovered} labels for {truth} events")]
    LengthMismatch {
        index: usize,
        recovered: usize,
        truth: usize,
    },
    #[error("{recovered} recovered traces for {truth} ground-truth traces")]
    TraceCountMismatch { recovered: usize, truth: usize },
    #[error("accuracy of an empty log is undefined")]
    NoEvents,
    #[error("p_a grid must be strictly increasing within [0, 1]")]
    BadGrid,
    #[error("the log is empty")]
    EmptyLog,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, value) in [("t_p", self.t_p), ("p_a", self.p_a)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(NoiseError::OutOfRange { name, value });
            }
        }
        if self.t_p > 0.0 && self.n_t < 2 {
            return Err(NoiseError::TooFewAlternatives(self.n_t));
        }
        if self.label_pool == LabelPool::TopK(0) {
            return Err(NoiseError::BadK { k: 0, available: 0 });
        }
        Ok(())
    }
}

/// A draw from the symmetric Dirichlet(1, …, 1) distribution on `n` labels,
/// as normalized unit exponentials. Every component is strictly positive.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        // 1 - U lies in (0, 1], so each draw is finite and non-negative
        let draws: Vec<f64> = (0..n).map(|_| -libm::log(1.0 - rng.gen::<f64>())).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 && draws.iter().all(|&d| d > 0.0) {
            return draws.into_iter().map(|d| d / sum).collect();
        }
    }
}

/// Splits probability mass over `true_label` and `alternatives`. The result
/// is sorted by label and has a unique maximum, which belongs to the true
/// label with probability `p_a`.
pub fn assign_probabilities<R: Rng + ?Sized>(
    rng: &mut R,
    true_label: &Activity,
    alternatives: &[Activity],
    p_a: f64,
) -> Vec<(Activity, f64)> {
    let n = alternatives.len() + 1;
    let mut values = loop {
        let mut v = dirichlet(rng, n);
        v.sort_by(|a, b| b.total_cmp(a));
        if n == 1 || v[0] - v[1] > 1e-12 {
            break v;
        }
    };
    let max = values.remove(0);
    values.shuffle(rng);

    let mut out = Vec::with_capacity(n);
    if n == 1 {
        out.push((true_label.clone(), 1.0));
        return out;
    }
    // gen::<f64>() is in [0, 1): p_a = 0 never and p_a = 1 always picks the truth
    let winner = if rng.gen::<f64>() < p_a {
        None
    } else {
        Some(rng.gen_range(0..alternatives.len()))
    };
    let mut rest = values.into_iter();
    match winner {
        None => {
            out.push((true_label.clone(), max));
            for alt in alternatives {
                out.push((alt.clone(), rest.next().expect("n values")));
            }
        }
        Some(w) => {
            out.push((true_label.clone(), rest.next().expect("n values")));
            for (i, alt) in alternatives.iter().enumerate() {
                let p = if i == w { max } else { rest.next().expect("n values") };
                out.push((alt.clone(), p));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Label frequencies of a log, counting every label of every event once.
fn label_counts(log: &[SkTrace]) -> BTreeMap<&Activity, usize> {
    let mut counts = BTreeMap::new();
    for t in log {
        for e in t.events() {
            for (l, _) in e.distribution() {
                *counts.entry(l).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// The `k` most frequent labels, ties broken lexicographically.
pub fn top_k_labels(log: &[SkTrace], k: usize) -> Result<Vec<Activity>, NoiseError> {
    let counts = label_counts(log);
    if k == 0 || k > counts.len() {
        return Err(NoiseError::BadK {
            k,
            available: counts.len(),
        });
    }
    let mut ranked: Vec<(&Activity, usize)> = counts.into_iter().collect();
    // BTreeMap order is lexicographic and the sort is stable
    ranked.sort_by_key(|&(_, n)| core::cmp::Reverse(n));
    Ok(ranked.into_iter().take(k).map(|(l, _)| l.clone()).collect())
}

/// An SK log together with the true label of every event.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyLog {
    pub traces: Vec<SkTrace>,
    pub truth: Vec<Vec<Activity>>,
}

/// Number of uncertain events for a trace of `len` events.
pub fn uncertain_count(t_p: f64, len: usize) -> usize {
    // the slack absorbs products like 0.3 * 10 = 3.0000000000000004
    (libm::ceil(t_p * len as f64 - 1e-9).max(0.0) as usize).min(len)
}

pub fn inject_noise(log: &[SkTrace], cfg: &NoiseConfig) -> Result<NoisyLog, NoiseError> {
    cfg.validate()?;
    for t in log {
        if let Some(e) = t.events().iter().find(|e| !e.is_deterministic()) {
            return Err(NoiseError::NotDeterministic {
                case: t.case_id.clone(),
                event: e.event_id.clone(),
            });
        }
    }
    let pool: Vec<Activity> = match cfg.label_pool {
        LabelPool::All => label_counts(log).into_keys().cloned().collect(),
        LabelPool::TopK(k) => top_k_labels(log, k)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut traces = Vec::with_capacity(log.len());
    let mut truth = Vec::with_capacity(log.len());
    for t in log {
        let labels: Vec<Activity> = t.events().iter().map(|e| e.argmax().clone()).collect();
        let mut uncertain = alloc::vec![false; t.len()];
        for i in index::sample(&mut rng, t.len(), uncertain_count(cfg.t_p, t.len())) {
            uncertain[i] = true;
        }
        let mut events = Vec::with_capacity(t.len());
        for (i, e) in t.events().iter().enumerate() {
            if !uncertain[i] {
                events.push(e.clone());
                continue;
            }
            let candidates: Vec<&Activity> = pool.iter().filter(|&l| *l != labels[i]).collect();
            let needed = cfg.n_t - 1;
            if candidates.len() < needed {
                return Err(NoiseError::PoolTooSmall {
                    case: t.case_id.clone(),
                    label: labels[i].to_string(),
                    available: candidates.len(),
                    needed,
                });
            }
            let alternatives: Vec<Activity> = candidates
                .choose_multiple(&mut rng, needed)
                .map(|&l| l.clone())
                .collect();
            let dist = assign_probabilities(&mut rng, &labels[i], &alternatives, cfg.p_a);
            events.push(
                SkEvent::new(e.event_id.clone(), dist, e.timestamp)
                    .expect("dirichlet split is a distribution"),
            );
        }
        traces.push(SkTrace::new(t.case_id.clone(), events).expect("timestamps unchanged"));
        truth.push(labels);
    }
    Ok(NoisyLog { traces, truth })
}

/// Correctly recovered events divided by all events, over all traces.
pub fn accuracy(recovered: &[Vec<Activity>], truth: &[Vec<Activity>]) -> Result<f64, NoiseError> {
    if recovered.len() != truth.len() {
        return Err(NoiseError::TraceCountMismatch {
            recovered: recovered.len(),
            truth: truth.len(),
        });
    }
    let mut correct = 0usize;
    let mut total = 0usize;
    for (index, (r, t)) in recovered.iter().zip(truth).enumerate() {
        if r.len() != t.len() {
            return Err(NoiseError::LengthMismatch {
                index,
                recovered: r.len(),
                truth: t.len(),
            });
        }
        correct += r.iter().zip(t).filter(|(a, b)| a == b).count();
        total += t.len();
    }
    if total == 0 {
        return Err(NoiseError::NoEvents);
    }
    Ok(correct as f64 / total as f64)
}

/// A trace-recovery method under evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Sktr(CostFunction),
    Argmax,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Sktr(_) => "sktr",
            Method::Argmax => "argmax",
        }
    }

    /// Cost-function column of the report (`-` for Argmax).
    pub fn cost_name(&self) -> String {
        match self {
            Method::Sktr(f) => f.name().to_string(),
            Method::Argmax => "-".into(),
        }
    }

    pub fn recover(
        &self,
        model: &SystemNet,
        trace: &SkTrace,
        opts: &SearchOptions,
    ) -> Result<Vec<Activity>, AlignError> {
        match self {
            Method::Argmax => Ok(argmax_recover(trace)),
            Method::Sktr(f) => {
                let Ok(stn) = build_trace_net(trace) else {
                    // an empty trace has nothing to recover
                    return Ok(Vec::new());
                };
                let sp = build_sync_product(model, &stn);
                search_optimal_alignment(&sp, f, opts).map(|a| a.recovered)
            }
        }
    }
}

pub type TraceOutcome = Result<Vec<Activity>, AlignError>;

/// Runs independent per-trace jobs; results must come back in index order.
pub trait TraceExecutor {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> TraceOutcome + Sync)) -> Vec<TraceOutcome>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TraceExecutor for Sequential {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> TraceOutcome + Sync)) -> Vec<TraceOutcome> {
        (0..jobs).map(job).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p_a: f64,
    pub method: &'static str,
    pub cost_function: String,
    /// `None` when every trace failed.
    pub accuracy: Option<f64>,
    /// Traces scored (failures excluded).
    pub traces: usize,
    /// Events scored.
    pub events: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub n_t: usize,
    pub t_p: f64,
    pub label_pool: LabelPool,
    pub base_seed: u64,
    /// Noise seed used at each grid point.
    pub grid_seeds: Vec<(f64, u64)>,
    /// Traces in the evaluated log.
    pub log_traces: usize,
    pub log_events: usize,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Noise seed for one grid point, derived from the base seed and `p_a`.
pub fn grid_seed(base: u64, p_a: f64) -> u64 {
    splitmix64(base ^ splitmix64(p_a.to_bits()))
}

/// `start, start + step, …` up to `end` inclusive, rounded to 1e-9.
pub fn pa_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, NoiseError> {
    if step.is_nan() || step <= 0.0 || !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || end < start {
        return Err(NoiseError::BadGrid);
    }
    let n = libm::floor((end - start) / step + 1e-9) as usize;
    Ok((0..=n)
        .map(|i| libm::round((start + i as f64 * step) * 1e9) / 1e9)
        .collect())
}

/// Regenerates noise at every grid point and scores each method on every
/// trace. Failed searches are counted and excluded from the accuracy.
pub fn run_pa_sweep(
    model: &SystemNet,
    log: &[SkTrace],
    base: &NoiseConfig,
    methods: &[Method],
    grid: &[f64],
    search: &SearchOptions,
    exec: &dyn TraceExecutor,
) -> Result<SweepReport, NoiseError> {
    if log.is_empty() {
        return Err(NoiseError::EmptyLog);
    }
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NoiseError::BadGrid);
    }
    base.validate()?;

    let mut rows = Vec::new();
    let mut grid_seeds = Vec::new();
    for &p_a in grid {
        let seed = grid_seed(base.seed, p_a);
        grid_seeds.push((p_a, seed));
        let cfg = NoiseConfig {
            p_a,
            seed,
            ..base.clone()
        };
        let noisy = inject_noise(log, &cfg)?;
        for method in methods {
            let outcomes = exec.run(noisy.traces.len(), &|i| {
                method.recover(model, &noisy.traces[i], search)
            });
            let mut recovered = Vec::new();
            let mut truth = Vec::new();
            let mut failures = 0;
            for (i, outcome) in outcomes.into_iter().enumerate() {
                match outcome {
                    Ok(r) => {
                        recovered.push(r);
                        truth.push(noisy.truth[i].clone());
                    }
                    Err(_) => failures += 1,
                }
            }
            let events = truth.iter().map(Vec::len).sum();
            let accuracy = match accuracy(&recovered, &truth) {
                Ok(a) => Some(a),
                Err(NoiseError::NoEvents) => None,
                Err(e) => return Err(e),
            };
            rows.push(SweepRow {
                p_a,
                method: method.name(),
                cost_function: method.cost_name(),
                accuracy,
                traces: recovered.len(),
                events,
                failures,
            });
        }
    }
    Ok(SweepReport {
        rows,
        n_t: base.n_t,
        t_p: base.t_p,
        label_pool: base.label_pool.clone(),
        base_seed: base.seed,
        grid_seeds,
        log_traces: log.len(),
        log_events: log.iter().map(SkTrace::len).sum(),
    })
}

/// Draws `count` distinct traces without replacement, e.g. the `T_s`
/// traces handed to an external discovery tool. Returns the sample and the
/// remaining traces, each in original order.
pub fn split_log(log: &[SkTrace], count: usize, seed: u64) -> (Vec<SkTrace>, Vec<SkTrace>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = alloc::vec![false; log.len()];
    for i in index::sample(&mut rng, log.len(), count.min(log.len())) {
        chosen[i] = true;
    }
    let mut sample = Vec::new();
    let mut rest = Vec::new();
    for (t, c) in log.iter().zip(chosen) {
        if c {
            sample.push(t.clone());
        } else {
            rest.push(t.clone());
        }
    }
    (sample, rest)
}
