//! Block-structured process trees, their Petri-net translation, and random
//! instance generators for experiments and tests.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::log::{SkEvent, SkTrace};
use crate::net::{NetBuilder, PlaceIdx, SystemNet, TransitionLabel};
use crate::noise::dirichlet;
use crate::Activity;

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessTree {
    Activity(Activity),
    Silent,
    Seq(Vec<ProcessTree>),
    Xor(Vec<ProcessTree>),
    And(Vec<ProcessTree>),
    /// `do` once, then any number of `redo; do` rounds.
    Loop(Box<ProcessTree>, Box<ProcessTree>),
}

impl ProcessTree {
    pub fn activity(label: &str) -> Self {
        ProcessTree::Activity(label.into())
    }

    /// Translates the tree into a sound workflow net with source place
    /// `source` and sink place `sink`.
    pub fn to_net(&self) -> SystemNet {
        let mut t = Translator::default();
        let src = t.place("source");
        let sink = t.place("sink");
        t.translate(self, src, sink);
        t.b.set_initial(src, 1);
        t.b.set_final(sink, 1);
        t.b.build().expect("tree translation is well formed")
    }

    /// Samples one trace. XOR branches are uniform, AND children are
    /// interleaved uniformly at random, and loops repeat with probability
    /// `repeat` after each round.
    pub fn playout<R: Rng + ?Sized>(&self, rng: &mut R, repeat: f64) -> Vec<Activity> {
        let mut out = Vec::new();
        self.play_into(rng, repeat, &mut out);
        out
    }

    fn play_into<R: Rng + ?Sized>(&self, rng: &mut R, repeat: f64, out: &mut Vec<Activity>) {
        match self {
            ProcessTree::Activity(a) => out.push(a.clone()),
            ProcessTree::Silent => {}
            ProcessTree::Seq(children) => {
                for c in children {
                    c.play_into(rng, repeat, out);
                }
            }
            ProcessTree::Xor(children) => {
                if let Some(c) = children.choose(rng) {
                    c.play_into(rng, repeat, out);
                }
            }
            ProcessTree::And(children) => {
                let mut parts: Vec<Vec<Activity>> =
                    children.iter().map(|c| c.playout(rng, repeat)).collect();
                let mut cursors = vec![0usize; parts.len()];
                loop {
                    let live: Vec<usize> = (0..parts.len())
                        .filter(|&i| cursors[i] < parts[i].len())
                        .collect();
                    let Some(&i) = live.choose(rng) else { break };
                    out.push(core::mem::replace(
                        &mut parts[i][cursors[i]],
                        Activity::from(""),
                    ));
                    cursors[i] += 1;
                }
            }
            ProcessTree::Loop(body, redo) => {
                body.play_into(rng, repeat, out);
                while rng.gen::<f64>() < repeat {
                    redo.play_into(rng, repeat, out);
                    body.play_into(rng, repeat, out);
                }
            }
        }
    }

    /// Samples `count` traces with lengths in `min_len..=max_len` by rejection.
    pub fn generate_log<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
        min_len: usize,
        max_len: usize,
        repeat: f64,
    ) -> Vec<SkTrace> {
        let mut traces = Vec::with_capacity(count);
        while traces.len() < count {
            let labels = self.playout(rng, repeat);
            if (min_len..=max_len).contains(&labels.len()) {
                traces.push(SkTrace::from_labels(format!("case{}", traces.len() + 1), labels));
            }
        }
        traces
    }
}

#[derive(Default)]
struct Translator {
    b: NetBuilder,
    places: usize,
    transitions: usize,
}

impl Translator {
    fn place(&mut self, id: &str) -> PlaceIdx {
        self.places += 1;
        self.b.add_place(String::from(id)).expect("fresh id")
    }

    fn fresh_place(&mut self) -> PlaceIdx {
        let id = format!("p{}", self.places);
        self.place(&id)
    }

    fn transition(&mut self, label: TransitionLabel, from: PlaceIdx, to: PlaceIdx) {
        let id = match &label {
            TransitionLabel::Visible(a) => format!("t{}_{}", self.transitions, a),
            TransitionLabel::Silent => format!("tau{}", self.transitions),
        };
        self.transitions += 1;
        let t = self.b.add_transition(id, label).expect("fresh id");
        self.b.add_input_arc(from, t).expect("fresh arc");
        self.b.add_output_arc(t, to).expect("fresh arc");
    }

    fn translate(&mut self, node: &ProcessTree, from: PlaceIdx, to: PlaceIdx) {
        match node {
            ProcessTree::Activity(a) => self.transition(TransitionLabel::Visible(a.clone()), from, to),
            ProcessTree::Silent => self.transition(TransitionLabel::Silent, from, to),
            ProcessTree::Seq(children) if children.is_empty() => {
                self.transition(TransitionLabel::Silent, from, to)
            }
            ProcessTree::Seq(children) => {
                let mut cur = from;
                for (i, c) in children.iter().enumerate() {
                    let next = if i + 1 == children.len() { to } else { self.fresh_place() };
                    self.translate(c, cur, next);
                    cur = next;
                }
            }
            ProcessTree::Xor(children) => {
                if children.is_empty() {
                    self.transition(TransitionLabel::Silent, from, to);
                }
                for c in children {
                    self.translate(c, from, to);
                }
            }
            ProcessTree::And(children) => {
                let id = format!("tau{}", self.transitions);
                self.transitions += 1;
                let split = self.b.add_transition(id, TransitionLabel::Silent).expect("fresh id");
                let id = format!("tau{}", self.transitions);
                self.transitions += 1;
                let join = self.b.add_transition(id, TransitionLabel::Silent).expect("fresh id");
                self.b.add_input_arc(from, split).expect("fresh arc");
                self.b.add_output_arc(join, to).expect("fresh arc");
                for c in children {
                    let start = self.fresh_place();
                    let end = self.fresh_place();
                    self.b.add_output_arc(split, start).expect("fresh arc");
                    self.b.add_input_arc(end, join).expect("fresh arc");
                    self.translate(c, start, end);
                }
            }
            ProcessTree::Loop(body, redo) => {
                let entry = self.fresh_place();
                let exit = self.fresh_place();
                self.transition(TransitionLabel::Silent, from, entry);
                self.translate(body, entry, exit);
                self.translate(redo, exit, entry);
                self.transition(TransitionLabel::Silent, exit, to);
            }
        }
    }
}

/// The two-branch model used as the running example: it accepts exactly
/// `⟨B,C,E⟩` and `⟨A,D,F⟩`.
///
/// Reconstructed so that the exponential, linear and logarithmic (`c = 2.4`)
/// costs recover `⟨B,C,E⟩`, a tie, and `⟨A,D,F⟩` respectively on the trace
/// `⟨{A:.8,B:.2}, {C:.7,D:.3}, {E:.6,F:.4}⟩`.
pub fn running_example_model() -> SystemNet {
    let mut b = NetBuilder::new();
    for p in ["p0", "pB1", "pB2", "pA1", "pA2", "p3"] {
        b.add_place(p).expect("fresh id");
    }
    for (t, l, from, to) in [
        ("tB", "B", "p0", "pB1"),
        ("tC", "C", "pB1", "pB2"),
        ("tE", "E", "pB2", "p3"),
        ("tA", "A", "p0", "pA1"),
        ("tD", "D", "pA1", "pA2"),
        ("tF", "F", "pA2", "p3"),
    ] {
        b.add_transition(t, TransitionLabel::Visible(l.into())).expect("fresh id");
        b.add_arc(from, t).expect("known ids");
        b.add_arc(t, to).expect("known ids");
    }
    b.set_initial_by_id("p0", 1).expect("known id");
    b.set_final_by_id("p3", 1).expect("known id");
    b.build().expect("well formed")
}

/// A ten-activity model mixing sequences, choices and one loop:
/// `→(A, ×(→(B,C), D), ↺(×(E,F), τ), ×(→(G,H), I), J)`.
pub fn benchmark_tree() -> ProcessTree {
    use ProcessTree::*;
    let a = ProcessTree::activity;
    Seq(vec![
        a("A"),
        Xor(vec![Seq(vec![a("B"), a("C")]), a("D")]),
        Loop(Box::new(Xor(vec![a("E"), a("F")])), Box::new(Silent)),
        Xor(vec![Seq(vec![a("G"), a("H")]), a("I")]),
        a("J"),
    ])
}

/// A random tree over `alphabet` of at most `depth` operator levels.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, alphabet: &[Activity], depth: usize) -> ProcessTree {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.1) {
            ProcessTree::Silent
        } else {
            ProcessTree::Activity(alphabet.choose(rng).expect("non-empty alphabet").clone())
        };
    }
    let arity = rng.gen_range(2..=3);
    let op = rng.gen_range(0..4);
    if op < 3 {
        let kids: Vec<ProcessTree> = (0..arity).map(|_| random_tree(rng, alphabet, depth - 1)).collect();
        return match op {
            0 => ProcessTree::Seq(kids),
            1 => ProcessTree::Xor(kids),
            _ => ProcessTree::And(kids),
        };
    }
    ProcessTree::Loop(
        Box::new(random_tree(rng, alphabet, depth - 1)),
        Box::new(if rng.gen_bool(0.5) {
            ProcessTree::Silent
        } else {
            random_tree(rng, alphabet, 0)
        }),
    )
}

/// A random state machine: every transition has exactly one input and one
/// output place, so the net is 1-bounded. Cycles and dead ends are allowed.
pub fn random_state_machine<R: Rng + ?Sized>(
    rng: &mut R,
    places: usize,
    transitions: usize,
    alphabet: &[Activity],
) -> SystemNet {
    let mut b = NetBuilder::new();
    let ps: Vec<PlaceIdx> = (0..places)
        .map(|i| b.add_place(format!("s{i}")).expect("fresh id"))
        .collect();
    let mut added = 0;
    while added < transitions {
        let from = *ps.choose(rng).expect("places");
        let to = *ps.choose(rng).expect("places");
        let label = if rng.gen_bool(0.15) {
            TransitionLabel::Silent
        } else {
            TransitionLabel::Visible(alphabet.choose(rng).expect("non-empty alphabet").clone())
        };
        let t = b.add_transition(format!("x{added}"), label).expect("fresh id");
        b.add_input_arc(from, t).expect("fresh arc");
        // a self-loop still consumes and produces one token
        b.add_output_arc(t, to).expect("fresh arc");
        added += 1;
    }
    b.set_initial(ps[0], 1);
    b.set_final(*ps.choose(rng).expect("places"), 1);
    b.build().expect("well formed")
}

/// A random SK trace of `len` events, each with 1 to `max_support` distinct
/// labels and Dirichlet(1, …, 1) probabilities.
pub fn random_sk_trace<R: Rng + ?Sized>(
    rng: &mut R,
    case_id: &str,
    alphabet: &[Activity],
    len: usize,
    max_support: usize,
) -> SkTrace {
    let events = (0..len)
        .map(|i| {
            let n = rng.gen_range(1..=max_support.min(alphabet.len()));
            let labels: Vec<Activity> = alphabet.choose_multiple(rng, n).cloned().collect();
            let probs = dirichlet(rng, n);
            SkEvent::new(format!("e{}", i + 1), labels.into_iter().zip(probs).collect(), None)
                .expect("dirichlet draws form a distribution")
        })
        .collect();
    SkTrace::new(case_id, events).expect("no timestamps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// All visible label sequences of complete firing sequences up to `depth` steps.
    fn language(net: &SystemNet, depth: usize) -> alloc::collections::BTreeSet<Vec<Activity>> {
        let mut out = alloc::collections::BTreeSet::new();
        let mut stack = vec![(net.initial_marking().clone(), Vec::new(), 0usize)];
        while let Some((m, word, d)) = stack.pop() {
            if &m == net.final_marking() {
                out.insert(word.clone());
            }
            if d == depth {
                continue;
            }
            for t in net.enabled_transitions(&m).unwrap() {
                let mut w = word.clone();
                if let Some(a) = net.label(t).activity() {
                    w.push(a.clone());
                }
                stack.push((net.fire(&m, t).unwrap(), w, d + 1));
            }
        }
        out
    }

    fn word(s: &str) -> Vec<Activity> {
        s.chars().map(|c| Activity::from(alloc::string::ToString::to_string(&c).as_str())).collect()
    }

    #[test]
    fn running_example_language() {
        let net = running_example_model();
        let lang = language(&net, 10);
        assert_eq!(lang.into_iter().collect::<Vec<_>>(), vec![word("ADF"), word("BCE")]);
        let en = net.enabled_transitions(net.initial_marking()).unwrap();
        let ids: Vec<&str> = en.iter().map(|&t| net.transition(t).id.as_str()).collect();
        assert_eq!(ids, ["tB", "tA"]);
        let m = net.fire(net.initial_marking(), en[0]).unwrap();
        assert_eq!(m, net.marking(&[("pB1", 1)]).unwrap());
    }

    #[test]
    fn tree_translation_languages() {
        use ProcessTree::*;
        let a = ProcessTree::activity;
        let and = And(vec![a("A"), a("B")]).to_net();
        assert_eq!(language(&and, 6).into_iter().collect::<Vec<_>>(), vec![word("AB"), word("BA")]);
        let xor = Seq(vec![Xor(vec![a("A"), Silent]), a("C")]).to_net();
        assert_eq!(language(&xor, 6).into_iter().collect::<Vec<_>>(), vec![word("AC"), word("C")]);
        let lp = Loop(Box::new(a("A")), Box::new(a("B"))).to_net();
        let l = language(&lp, 8);
        assert!(l.contains(&word("A")) && l.contains(&word("ABA")) && l.contains(&word("ABABA")));
        assert!(!l.contains(&word("AB")));
    }

    #[test]
    fn playouts_are_in_the_net_language() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tree = benchmark_tree();
        let net = tree.to_net();
        let lang = language(&net, 24);
        for _ in 0..200 {
            let w = tree.playout(&mut rng, 0.4);
            if w.len() <= 8 {
                assert!(lang.contains(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn generated_log_respects_length_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let log = benchmark_tree().generate_log(&mut rng, 50, 5, 10, 0.5);
        assert_eq!(log.len(), 50);
        assert!(log.iter().all(|t| (5..=10).contains(&t.len()) && t.is_deterministic()));
        assert_eq!(benchmark_tree().to_net().alphabet().len(), 10);
    }

    #[test]
    fn random_sk_traces_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alpha: Vec<Activity> = ["A", "B", "C"].iter().map(|&s| s.into()).collect();
        for _ in 0..50 {
            let t = random_sk_trace(&mut rng, "c", &alpha, 4, 3);
            assert_eq!(t.len(), 4);
            assert!(t.events().iter().all(|e| (1..=3).contains(&e.support_size())));
        }
    }
}
