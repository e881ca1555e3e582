//! Optimal alignments by shortest-path search over the reachability
//! multigraph of a [`SyncProduct`].
//!
//! The multigraph is never materialized. Markings are discovered lazily and
//! every enabled product transition yields its own edge, so alternative
//! trace transitions between the same pair of markings stay distinct.
//!
//! The search runs in two phases:
//!
//! 1. Dijkstra (or A* with a consistent heuristic) on edge cost. It keeps
//!    going until every marking whose optimistic cost is within
//!    [`COST_TOLERANCE`] of the optimum has been settled.
//! 2. Among the edges that lie on some optimal path, a second search picks
//!    the alignment with the fewest log moves (equivalently the most
//!    synchronous moves), then the largest product of synchronous
//!    probabilities, then the earliest discovered sequence. The same tight
//!    subgraph yields the set of distinct recovered traces used for tie
//!    reporting.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::HashMap;
use thiserror::Error;

use crate::cost::{CostError, CostFunction};
use crate::net::{Marking, TransitionIdx};
use crate::product::{Move, MoveKind, SyncProduct};
use crate::Activity;

/// Two alignment costs closer than this are considered equal.
pub const COST_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of markings expanded before giving up.
    pub max_states: usize,
    /// Maximum tokens any single place may hold.
    pub token_cap: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_states: 1_000_000,
            token_cap: 8,
        }
    }
}

/// Lower bound on the remaining cost used to order the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Heuristic {
    /// Plain Dijkstra.
    #[default]
    Zero,
    /// A*: every unconsumed event costs at least the cheaper of its best
    /// synchronous move (if its label occurs in the model) and its best log
    /// move. Admissible and consistent.
    RemainingEvents,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub limits: SearchLimits,
    pub heuristic: Heuristic,
    /// Collect the distinct recovered traces of all optimal alignments.
    pub detect_ties: bool,
    /// Cap on collected tie candidates.
    pub max_tie_candidates: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limits: SearchLimits::default(),
            heuristic: Heuristic::Zero,
            detect_ties: true,
            max_tie_candidates: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("final marking is unreachable ({states_expanded} states expanded)")]
    Infeasible { states_expanded: usize },
    #[error("state cap exceeded after {states_expanded} expanded states")]
    StateCap { states_expanded: usize },
    #[error("place `{place}` exceeds the token cap of {cap}")]
    TokenCap { place: String, cap: u32 },
    #[error("search aborted after {states_expanded} expanded states")]
    Aborted { states_expanded: usize },
    #[error("invalid cost function: {0}")]
    Cost(#[from] CostError),
}

impl AlignError {
    /// True for errors caused by resource limits rather than the input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            AlignError::StateCap { .. } | AlignError::TokenCap { .. } | AlignError::Aborted { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedMove {
    /// Product transition.
    pub transition: TransitionIdx,
    pub mv: Move,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub moves: Vec<AlignedMove>,
    pub total_cost: f64,
    pub recovered: Vec<Activity>,
    /// At least two distinct recovered traces are optimal.
    pub is_tie: bool,
    /// Distinct recovered traces of optimal alignments, sorted. Empty when
    /// tie detection is off.
    pub tie_candidates: Vec<Vec<Activity>>,
    pub states_expanded: usize,
}

impl Alignment {
    /// Model transitions fired by the alignment, silent ones included.
    pub fn model_projection(&self) -> Vec<TransitionIdx> {
        self.moves.iter().filter_map(|m| m.mv.model_transition).collect()
    }

    /// Trace-net transitions fired by the alignment.
    pub fn log_projection(&self) -> Vec<TransitionIdx> {
        self.moves.iter().filter_map(|m| m.mv.log_transition).collect()
    }

    pub fn count(&self, kind: MoveKind) -> usize {
        self.moves.iter().filter(|m| m.mv.kind == kind).count()
    }
}

/// Trace-side labels of the synchronous and log moves, in order.
pub fn extract_recovered_trace(moves: &[AlignedMove]) -> Vec<Activity> {
    moves.iter().filter_map(|m| m.mv.log_label.clone()).collect()
}

/// Minimum alignment cost between the product's model and trace.
pub fn conformance_cost(sp: &SyncProduct, f: &CostFunction) -> Result<f64, AlignError> {
    let opts = SearchOptions {
        detect_ties: false,
        ..SearchOptions::default()
    };
    search_optimal_alignment(sp, f, &opts).map(|a| a.total_cost)
}

pub fn search_optimal_alignment(
    sp: &SyncProduct,
    f: &CostFunction,
    opts: &SearchOptions,
) -> Result<Alignment, AlignError> {
    search_optimal_alignment_with(sp, f, opts, &mut || false)
}

/// Like [`search_optimal_alignment`], polling `abort` periodically; a `true`
/// answer stops the search with [`AlignError::Aborted`].
pub fn search_optimal_alignment_with(
    sp: &SyncProduct,
    f: &CostFunction,
    opts: &SearchOptions,
    abort: &mut dyn FnMut() -> bool,
) -> Result<Alignment, AlignError> {
    f.validate()?;
    let costs: Vec<f64> = sp.moves().iter().map(|m| f.edge_cost(m)).collect();
    let graph = explore(sp, &costs, f, opts, abort)?;
    let tight = graph.tight_subgraph();
    let path = graph.preferred_path(sp, &tight);

    let moves: Vec<AlignedMove> = path
        .iter()
        .map(|&t| AlignedMove {
            transition: t,
            mv: sp.get_move(t).clone(),
            cost: costs[t.index()],
        })
        .collect();
    let total_cost = moves.iter().map(|m| m.cost).sum();
    let recovered = extract_recovered_trace(&moves);
    let tie_candidates = if opts.detect_ties {
        graph.optimal_traces(sp, &tight, opts.max_tie_candidates.max(2))
    } else {
        Vec::new()
    };
    Ok(Alignment {
        moves,
        total_cost,
        recovered,
        is_tie: tie_candidates.len() >= 2,
        tie_candidates,
        states_expanded: graph.expanded,
    })
}

const NONE: u32 = u32::MAX;

struct Node {
    marking: Marking,
    g: f64,
    settled: bool,
    /// Outgoing `(transition, target, cost)` edges, filled on expansion.
    edges: Vec<(TransitionIdx, u32, f64)>,
}

#[derive(PartialEq)]
struct Open {
    f: f64,
    g: f64,
    seq: u64,
    node: u32,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (f, seq)
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Explored {
    nodes: Vec<Node>,
    initial: u32,
    goal: u32,
    optimum: f64,
    expanded: usize,
}

/// Per-position suffix sums of the cheapest way to consume each event.
fn remaining_event_bounds(sp: &SyncProduct, f: &CostFunction) -> Vec<f64> {
    let mut per_event = vec![f64::INFINITY; sp.trace_len()];
    for t in (0..sp.trace_transition_count()).map(|i| TransitionIdx(i as u32)) {
        let p = sp.trace_probability(t);
        let mut best = f.log_move_cost(p);
        if sp.model_alphabet().binary_search(sp.trace_label(t)).is_ok() {
            best = best.min(f.sync_cost(p));
        }
        let e = sp.trace_event_of(t);
        per_event[e] = per_event[e].min(best);
    }
    let mut suffix = vec![0.0; sp.trace_len() + 1];
    for i in (0..sp.trace_len()).rev() {
        suffix[i] = suffix[i + 1] + per_event[i];
    }
    suffix
}

fn explore(
    sp: &SyncProduct,
    costs: &[f64],
    f: &CostFunction,
    opts: &SearchOptions,
    abort: &mut dyn FnMut() -> bool,
) -> Result<Explored, AlignError> {
    let net = sp.net();
    let model_places = sp.model_place_count();
    let bounds = match opts.heuristic {
        Heuristic::Zero => None,
        Heuristic::RemainingEvents => Some(remaining_event_bounds(sp, f)),
    };
    let h = |m: &Marking| -> f64 {
        match &bounds {
            None => 0.0,
            Some(b) => {
                let pos = m.counts()[model_places..]
                    .iter()
                    .position(|&c| c > 0)
                    .unwrap_or(sp.trace_len());
                b[pos]
            }
        }
    };

    let final_marking = sp.final_marking();
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<Marking, u32> = HashMap::new();
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;

    let m0 = sp.initial_marking().clone();
    let h0 = h(&m0);
    index.insert(m0.clone(), 0);
    nodes.push(Node {
        marking: m0,
        g: 0.0,
        settled: false,
        edges: Vec::new(),
    });
    open.push(Open {
        f: h0,
        g: 0.0,
        seq,
        node: 0,
    });

    let mut goal = NONE;
    let mut optimum = f64::INFINITY;
    let mut expanded = 0usize;

    while let Some(Open { f: fv, g, node, .. }) = open.pop() {
        let n = node as usize;
        if g > nodes[n].g || nodes[n].settled {
            continue;
        }
        if fv > optimum + COST_TOLERANCE {
            break;
        }
        nodes[n].settled = true;
        if nodes[n].marking == *final_marking {
            if goal == NONE {
                goal = node;
                optimum = g;
            }
            continue;
        }

        expanded += 1;
        if expanded > opts.limits.max_states {
            return Err(AlignError::StateCap {
                states_expanded: expanded - 1,
            });
        }
        if expanded.is_multiple_of(256) && abort() {
            return Err(AlignError::Aborted {
                states_expanded: expanded,
            });
        }

        let marking = nodes[n].marking.clone();
        let mut edges = Vec::new();
        for (t, _) in net.transitions() {
            if !net.is_enabled(&marking, t) {
                continue;
            }
            let next = net.fire_unchecked(&marking, t);
            for &p in net.postset(t) {
                if next.get(p) > opts.limits.token_cap {
                    return Err(AlignError::TokenCap {
                        place: net.place_id(p).into(),
                        cap: opts.limits.token_cap,
                    });
                }
            }
            let w = costs[t.index()];
            let ng = g + w;
            let target = match index.get(&next) {
                Some(&i) => {
                    let tn = &mut nodes[i as usize];
                    if ng < tn.g {
                        // reopening only happens under floating-point
                        // inconsistency of the heuristic
                        tn.g = ng;
                        tn.settled = false;
                        tn.edges.clear();
                        seq += 1;
                        open.push(Open {
                            f: ng + h(&tn.marking),
                            g: ng,
                            seq,
                            node: i,
                        });
                    }
                    i
                }
                None => {
                    let i = nodes.len() as u32;
                    let hv = h(&next);
                    index.insert(next.clone(), i);
                    nodes.push(Node {
                        marking: next,
                        g: ng,
                        settled: false,
                        edges: Vec::new(),
                    });
                    seq += 1;
                    open.push(Open {
                        f: ng + hv,
                        g: ng,
                        seq,
                        node: i,
                    });
                    i
                }
            };
            edges.push((t, target, w));
        }
        nodes[n].edges = edges;
    }

    if goal == NONE {
        return Err(AlignError::Infeasible {
            states_expanded: expanded,
        });
    }
    Ok(Explored {
        nodes,
        initial: 0,
        goal,
        optimum,
        expanded,
    })
}

/// Edges lying on optimal paths, restricted to nodes that reach the goal.
struct Tight {
    /// Per node: outgoing tight edges `(transition, target)`.
    out: Vec<Vec<(TransitionIdx, u32)>>,
    relevant: Vec<bool>,
}

impl Explored {
    fn tight_subgraph(&self) -> Tight {
        let n = self.nodes.len();
        let bound = self.optimum + COST_TOLERANCE;
        let mut out = vec![Vec::new(); n];
        let mut incoming: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, node) in self.nodes.iter().enumerate() {
            if !node.settled || node.g > bound {
                continue;
            }
            for &(t, v, w) in &node.edges {
                let target = &self.nodes[v as usize];
                if target.settled && target.g <= bound && node.g + w <= target.g + COST_TOLERANCE {
                    out[u].push((t, v));
                    incoming[v as usize].push(u as u32);
                }
            }
        }
        let mut relevant = vec![false; n];
        let mut stack = vec![self.goal];
        relevant[self.goal as usize] = true;
        while let Some(v) = stack.pop() {
            for &u in &incoming[v as usize] {
                if !relevant[u as usize] {
                    relevant[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        for (u, edges) in out.iter_mut().enumerate() {
            if !relevant[u] {
                edges.clear();
            } else {
                edges.retain(|&(_, v)| relevant[v as usize]);
            }
        }
        Tight { out, relevant }
    }

    /// Lexicographic search over the tight subgraph: fewest log moves, then
    /// smallest `Σ -ln p` over synchronous moves, then discovery order.
    fn preferred_path(&self, sp: &SyncProduct, tight: &Tight) -> Vec<TransitionIdx> {
        #[derive(PartialEq)]
        struct Key {
            log_moves: u32,
            neg_log_p: f64,
            seq: u64,
            node: u32,
        }
        impl Eq for Key {}
        impl Ord for Key {
            fn cmp(&self, o: &Self) -> Ordering {
                o.log_moves
                    .cmp(&self.log_moves)
                    .then_with(|| o.neg_log_p.total_cmp(&self.neg_log_p))
                    .then_with(|| o.seq.cmp(&self.seq))
            }
        }
        impl PartialOrd for Key {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }

        let n = self.nodes.len();
        let mut best: Vec<(u32, f64)> = vec![(u32::MAX, f64::INFINITY); n];
        let mut parent: Vec<(u32, TransitionIdx)> = vec![(NONE, TransitionIdx(0)); n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        let mut seq = 0u64;
        best[self.initial as usize] = (0, 0.0);
        heap.push(Key {
            log_moves: 0,
            neg_log_p: 0.0,
            seq,
            node: self.initial,
        });
        while let Some(Key {
            log_moves,
            neg_log_p,
            node,
            ..
        }) = heap.pop()
        {
            let u = node as usize;
            if done[u] {
                continue;
            }
            done[u] = true;
            if node == self.goal {
                break;
            }
            for &(t, v) in &tight.out[u] {
                let mv = sp.get_move(t);
                let (dl, dp) = match mv.kind {
                    MoveKind::Log => (1, 0.0),
                    MoveKind::Sync => (0, -libm::log(mv.probability.unwrap_or(1.0).max(f64::MIN_POSITIVE))),
                    MoveKind::Model => (0, 0.0),
                };
                let cand = (log_moves + dl, neg_log_p + dp);
                let cur = best[v as usize];
                let better = cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 < cur.1);
                if better && !done[v as usize] {
                    best[v as usize] = cand;
                    parent[v as usize] = (node, t);
                    seq += 1;
                    heap.push(Key {
                        log_moves: cand.0,
                        neg_log_p: cand.1,
                        seq,
                        node: v,
                    });
                }
            }
        }

        let mut path = Vec::new();
        let mut cur = self.goal;
        while cur != self.initial {
            let (p, t) = parent[cur as usize];
            debug_assert!(p != NONE, "goal reachable through tight edges");
            path.push(t);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Distinct trace-side label sequences over all optimal paths, up to `cap`.
    fn optimal_traces(&self, sp: &SyncProduct, tight: &Tight, cap: usize) -> Vec<Vec<Activity>> {
        let n = self.nodes.len();
        let mut sets: Vec<BTreeSet<Vec<Activity>>> = vec![BTreeSet::new(); n];
        sets[self.initial as usize].insert(Vec::new());
        let mut queued = vec![false; n];
        let mut work = alloc::collections::VecDeque::new();
        work.push_back(self.initial);
        queued[self.initial as usize] = true;
        while let Some(u) = work.pop_front() {
            queued[u as usize] = false;
            if !tight.relevant[u as usize] {
                continue;
            }
            let prefixes: Vec<Vec<Activity>> = sets[u as usize].iter().cloned().collect();
            for &(t, v) in &tight.out[u as usize] {
                let label = sp.get_move(t).log_label.as_ref();
                let mut changed = false;
                for prefix in &prefixes {
                    if sets[v as usize].len() >= cap {
                        break;
                    }
                    let mut s = prefix.clone();
                    if let Some(l) = label {
                        s.push(l.clone());
                    }
                    changed |= sets[v as usize].insert(s);
                }
                if changed && !queued[v as usize] {
                    queued[v as usize] = true;
                    work.push_back(v);
                }
            }
        }
        core::mem::take(&mut sets[self.goal as usize]).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::{build_trace_net, SkEvent, SkTrace};
    use crate::net::{NetBuilder, TransitionLabel};
    use crate::product::build_sync_product;
    use crate::tree::running_example_model;

    fn labels(v: &[&str]) -> Vec<Activity> {
        v.iter().map(|&s| s.into()).collect()
    }

    fn table1() -> SkTrace {
        let ev = |id: &str, d: &[(&str, f64)]| {
            SkEvent::new(id, d.iter().map(|&(l, p)| (l.into(), p)).collect(), None).unwrap()
        };
        SkTrace::new(
            "1",
            vec![
                ev("e1", &[("A", 0.8), ("B", 0.2)]),
                ev("e2", &[("C", 0.7), ("D", 0.3)]),
                ev("e3", &[("E", 0.6), ("F", 0.4)]),
            ],
        )
        .unwrap()
    }

    fn running_product() -> SyncProduct {
        build_sync_product(&running_example_model(), &build_trace_net(&table1()).unwrap())
    }

    fn align(sp: &SyncProduct, f: CostFunction) -> Alignment {
        search_optimal_alignment(sp, &f, &SearchOptions::default()).unwrap()
    }

    #[test]
    fn running_example_exponential() {
        let a = align(&running_product(), CostFunction::exponential());
        assert_eq!(a.recovered, labels(&["B", "C", "E"]));
        assert!((a.total_cost - 1.816_828_184_547_618).abs() < 1e-9);
        assert!(!a.is_tie);
        assert_eq!(a.count(MoveKind::Sync), 3);
    }

    #[test]
    fn running_example_linear_tie() {
        let a = align(&running_product(), CostFunction::linear());
        assert!((a.total_cost - 1.5).abs() < 1e-9);
        assert!(a.is_tie);
        assert_eq!(
            a.tie_candidates,
            vec![labels(&["A", "D", "F"]), labels(&["B", "C", "E"])]
        );
        // larger synchronous probability product wins the tie: 0.096 > 0.084
        assert_eq!(a.recovered, labels(&["A", "D", "F"]));
    }

    #[test]
    fn running_example_logarithmic() {
        let a = align(&running_product(), CostFunction::logarithmic(2.4));
        assert_eq!(a.recovered, labels(&["A", "D", "F"]));
        assert!((a.total_cost - 0.976_419_619_797_625_4).abs() < 1e-9);
    }

    #[test]
    fn astar_agrees_with_dijkstra() {
        let sp = running_product();
        for f in [CostFunction::exponential(), CostFunction::linear(), CostFunction::logarithmic(2.4)] {
            let d = align(&sp, f);
            let opts = SearchOptions {
                heuristic: Heuristic::RemainingEvents,
                ..SearchOptions::default()
            };
            let a = search_optimal_alignment(&sp, &f, &opts).unwrap();
            assert!((a.total_cost - d.total_cost).abs() < 1e-9);
            assert_eq!(a.recovered, d.recovered);
            assert!(a.states_expanded <= d.states_expanded);
        }
    }

    #[test]
    fn conforming_deterministic_trace_costs_nothing() {
        let sp = build_sync_product(
            &running_example_model(),
            &build_trace_net(&SkTrace::from_labels("c", ["A", "D", "F"])).unwrap(),
        );
        for f in [CostFunction::exponential(), CostFunction::linear(), CostFunction::logarithmic(2.4)] {
            let a = align(&sp, f);
            assert_eq!(a.total_cost, 0.0);
            assert_eq!(a.recovered, labels(&["A", "D", "F"]));
            assert_eq!(conformance_cost(&sp, &f).unwrap(), 0.0);
        }
    }

    fn single(label: &str) -> crate::net::SystemNet {
        let mut b = NetBuilder::new();
        b.add_place("i").unwrap();
        b.add_place("o").unwrap();
        b.add_transition("t", TransitionLabel::Visible(label.into())).unwrap();
        b.add_arc("i", "t").unwrap();
        b.add_arc("t", "o").unwrap();
        b.set_initial_by_id("i", 1).unwrap();
        b.set_final_by_id("o", 1).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn off_model_event_costs_a_log_and_a_model_move() {
        // model ⟨X⟩, trace ⟨{Y:0.9, Z:0.1}⟩: no sync possible
        let trace = SkTrace::new(
            "c",
            vec![SkEvent::new("e", vec![("Y".into(), 0.9), ("Z".into(), 0.1)], None).unwrap()],
        )
        .unwrap();
        let sp = build_sync_product(&single("X"), &build_trace_net(&trace).unwrap());
        let f = CostFunction::linear();
        let a = align(&sp, f);
        let expected = 1.0 + f.epsilon * (1.0 - 0.9) + 1.0;
        assert!((a.total_cost - expected).abs() < 1e-12);
        // the log move goes to the more probable label
        assert_eq!(a.recovered, labels(&["Y"]));
        assert!(!a.is_tie);
    }

    #[test]
    fn unreachable_final_marking_is_infeasible() {
        let mut b = NetBuilder::new();
        b.add_place("i").unwrap();
        b.add_place("o").unwrap();
        b.set_initial_by_id("i", 1).unwrap();
        b.set_final_by_id("o", 1).unwrap();
        let sp = build_sync_product(
            &b.build().unwrap(),
            &build_trace_net(&SkTrace::from_labels("c", ["A"])).unwrap(),
        );
        let err = search_optimal_alignment(&sp, &CostFunction::linear(), &SearchOptions::default());
        assert!(matches!(err, Err(AlignError::Infeasible { .. })));
    }

    #[test]
    fn token_cap_is_reported() {
        // silent generator: i -> tau -> i + q, final at o via t
        let mut b = NetBuilder::new();
        b.add_place("i").unwrap();
        b.add_place("q").unwrap();
        b.add_place("o").unwrap();
        b.add_transition("gen", TransitionLabel::Silent).unwrap();
        b.add_transition("t", TransitionLabel::Visible("B".into())).unwrap();
        for (s, t) in [("i", "gen"), ("gen", "i"), ("gen", "q"), ("i", "t"), ("t", "o")] {
            b.add_arc(s, t).unwrap();
        }
        b.set_initial_by_id("i", 1).unwrap();
        b.set_final_by_id("o", 1).unwrap();
        let sp = build_sync_product(
            &b.build().unwrap(),
            &build_trace_net(&SkTrace::from_labels("c", ["A"])).unwrap(),
        );
        let err = search_optimal_alignment(&sp, &CostFunction::linear(), &SearchOptions::default()).unwrap_err();
        assert_eq!(err, AlignError::TokenCap { place: "m:q".into(), cap: 8 });
        assert!(err.is_resource());
    }

    #[test]
    fn state_cap_is_reported() {
        let opts = SearchOptions {
            limits: SearchLimits {
                max_states: 2,
                ..SearchLimits::default()
            },
            ..SearchOptions::default()
        };
        let err = search_optimal_alignment(&running_product(), &CostFunction::exponential(), &opts).unwrap_err();
        assert_eq!(err, AlignError::StateCap { states_expanded: 2 });
    }

    #[test]
    fn abort_callback_stops_search() {
        let model = crate::tree::ProcessTree::Loop(
            alloc::boxed::Box::new(crate::tree::ProcessTree::activity("A")),
            alloc::boxed::Box::new(crate::tree::ProcessTree::Silent),
        )
        .to_net();
        let trace = SkTrace::from_labels("c", core::iter::repeat_n("B", 400));
        let sp = build_sync_product(&model, &build_trace_net(&trace).unwrap());
        let err = search_optimal_alignment_with(
            &sp,
            &CostFunction::linear(),
            &SearchOptions::default(),
            &mut || true,
        )
        .unwrap_err();
        assert!(matches!(err, AlignError::Aborted { .. }));
    }

    #[test]
    fn extract_drops_model_moves() {
        let sp = build_sync_product(
            &single("A"),
            &build_trace_net(&SkTrace::from_labels("c", ["D"])).unwrap(),
        );
        let moves: Vec<AlignedMove> = sp
            .moves()
            .iter()
            .enumerate()
            .map(|(i, m)| AlignedMove {
                transition: TransitionIdx(i as u32),
                mv: m.clone(),
                cost: 0.0,
            })
            .filter(|m| m.mv.kind != MoveKind::Sync)
            .collect();
        assert_eq!(extract_recovered_trace(&moves), labels(&["D"]));
    }

    #[test]
    fn deterministic_across_runs() {
        let sp = running_product();
        let f = CostFunction::linear();
        assert_eq!(align(&sp, f), align(&sp, f));
    }
}
