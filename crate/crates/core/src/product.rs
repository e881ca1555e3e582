//! The stochastic synchronous product of a process model and a stochastic
//! trace net.
//!
//! Places are the disjoint union of model and trace places, model places
//! first. Product transitions are partitioned into model moves (`(t, ≫)`),
//! log moves (`(≫, t)`) and synchronous moves (`(t, u)` with equal visible
//! labels). Synchronous and log moves carry the firing probability of their
//! trace transition.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::log::StochasticTraceNet;
use crate::net::{Marking, NetBuilder, PlaceIdx, SystemNet, TransitionIdx, TransitionLabel};
use crate::Activity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Model,
    Log,
    Sync,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Model => "model",
            MoveKind::Log => "log",
            MoveKind::Sync => "sync",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A product transition, described by its two sides. `None` on a side is
/// the skip symbol `≫`.
#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub kind: MoveKind,
    pub model_transition: Option<TransitionIdx>,
    pub log_transition: Option<TransitionIdx>,
    pub model_label: Option<TransitionLabel>,
    pub log_label: Option<Activity>,
    pub probability: Option<f64>,
}

impl Move {
    /// True for model moves on silent transitions.
    pub fn is_silent(&self) -> bool {
        matches!(self.model_label, Some(TransitionLabel::Silent)) && self.kind == MoveKind::Model
    }

    pub fn label_pair(&self) -> MoveLabels<'_> {
        MoveLabels(self)
    }
}

/// Displays a move as `(model label, log label)` with `>>` for skips.
pub struct MoveLabels<'a>(&'a Move);

impl fmt::Display for MoveLabels<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        match &self.0.model_label {
            Some(l) => write!(f, "{l}")?,
            None => f.write_str(">>")?,
        }
        f.write_str(",")?;
        match &self.0.log_label {
            Some(l) => write!(f, "{l}")?,
            None => f.write_str(">>")?,
        }
        f.write_str(")")
    }
}

/// Probability attached to a move: the trace transition's firing
/// probability for synchronous and log moves, nothing for model moves.
pub fn move_probability(m: &Move) -> Option<f64> {
    m.probability
}

#[derive(Debug, Clone)]
pub struct SyncProduct {
    net: SystemNet,
    moves: Vec<Move>,
    model_places: usize,
    trace_events: usize,
    /// Event position consumed by each trace transition.
    trace_event_of: Vec<usize>,
    trace_probability: Vec<f64>,
    trace_labels: Vec<Activity>,
    model_alphabet: Vec<Activity>,
}

impl SyncProduct {
    pub fn net(&self) -> &SystemNet {
        &self.net
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn get_move(&self, t: TransitionIdx) -> &Move {
        &self.moves[t.index()]
    }

    pub fn initial_marking(&self) -> &Marking {
        self.net.initial_marking()
    }

    pub fn final_marking(&self) -> &Marking {
        self.net.final_marking()
    }

    pub fn model_place_count(&self) -> usize {
        self.model_places
    }

    /// Whether a product place belongs to the model side.
    pub fn is_model_place(&self, p: PlaceIdx) -> bool {
        p.index() < self.model_places
    }

    /// Number of events of the aligned trace.
    pub fn trace_len(&self) -> usize {
        self.trace_events
    }

    /// Event position of a trace-net transition.
    pub fn trace_event_of(&self, trace_t: TransitionIdx) -> usize {
        self.trace_event_of[trace_t.index()]
    }

    pub fn trace_transition_count(&self) -> usize {
        self.trace_event_of.len()
    }

    pub fn trace_probability(&self, trace_t: TransitionIdx) -> f64 {
        self.trace_probability[trace_t.index()]
    }

    pub fn trace_label(&self, trace_t: TransitionIdx) -> &Activity {
        &self.trace_labels[trace_t.index()]
    }

    /// Sorted visible labels of the model.
    pub fn model_alphabet(&self) -> &[Activity] {
        &self.model_alphabet
    }

    pub fn count(&self, kind: MoveKind) -> usize {
        self.moves.iter().filter(|m| m.kind == kind).count()
    }

    /// Splits a product marking into its model and trace parts.
    pub fn split_marking(&self, m: &Marking) -> (Marking, Marking) {
        let (a, b) = m.counts().split_at(self.model_places);
        (Marking::from_counts(a.to_vec()), Marking::from_counts(b.to_vec()))
    }
}

/// Builds the product. Silent model transitions never synchronize.
pub fn build_sync_product(model: &SystemNet, trace: &StochasticTraceNet) -> SyncProduct {
    let tnet = trace.net();
    let mut b = NetBuilder::new();
    let mp: Vec<PlaceIdx> = model
        .places()
        .map(|(_, id)| b.add_place(format!("m:{id}")).expect("namespaced ids are unique"))
        .collect();
    let tp: Vec<PlaceIdx> = tnet
        .places()
        .map(|(_, id)| b.add_place(format!("t:{id}")).expect("namespaced ids are unique"))
        .collect();

    let mut moves = Vec::new();
    let wire = |b: &mut NetBuilder,
                    id: alloc::string::String,
                    label: TransitionLabel,
                    model_t: Option<TransitionIdx>,
                    log_t: Option<TransitionIdx>| {
        let t = b.add_transition(id, label).expect("namespaced ids are unique");
        if let Some(mt) = model_t {
            for &p in model.preset(mt) {
                b.add_input_arc(mp[p.index()], t).expect("distinct places");
            }
            for &p in model.postset(mt) {
                b.add_output_arc(t, mp[p.index()]).expect("distinct places");
            }
        }
        if let Some(lt) = log_t {
            for &p in tnet.preset(lt) {
                b.add_input_arc(tp[p.index()], t).expect("distinct places");
            }
            for &p in tnet.postset(lt) {
                b.add_output_arc(t, tp[p.index()]).expect("distinct places");
            }
        }
    };

    for (mt, tr) in model.transitions() {
        wire(&mut b, format!("mm:{}", tr.id), tr.label.clone(), Some(mt), None);
        moves.push(Move {
            kind: MoveKind::Model,
            model_transition: Some(mt),
            log_transition: None,
            model_label: Some(tr.label.clone()),
            log_label: None,
            probability: None,
        });
    }
    for (lt, tr) in tnet.transitions() {
        wire(&mut b, format!("lm:{}", tr.id), tr.label.clone(), None, Some(lt));
        moves.push(Move {
            kind: MoveKind::Log,
            model_transition: None,
            log_transition: Some(lt),
            model_label: None,
            log_label: tr.label.activity().cloned(),
            probability: Some(trace.firing_probability(lt)),
        });
    }
    for (mt, mtr) in model.transitions() {
        let Some(ma) = mtr.label.activity() else {
            continue;
        };
        for (lt, ltr) in tnet.transitions() {
            if ltr.label.activity() != Some(ma) {
                continue;
            }
            // length prefix keeps `sm:` ids unambiguous whatever the source ids contain
            let id = format!("sm:{}:{}|{}", mtr.id.len(), mtr.id, ltr.id);
            wire(&mut b, id, mtr.label.clone(), Some(mt), Some(lt));
            moves.push(Move {
                kind: MoveKind::Sync,
                model_transition: Some(mt),
                log_transition: Some(lt),
                model_label: Some(mtr.label.clone()),
                log_label: Some(ma.clone()),
                probability: Some(trace.firing_probability(lt)),
            });
        }
    }

    let mi = model.initial_marking().concat(tnet.initial_marking());
    let mf = model.final_marking().concat(tnet.final_marking());
    for (p, c) in mi.support() {
        b.set_initial(p, c);
    }
    for (p, c) in mf.support() {
        b.set_final(p, c);
    }
    let net = b.build().expect("product of valid nets is valid");

    SyncProduct {
        net,
        moves,
        model_places: model.place_count(),
        trace_events: trace.event_count(),
        trace_event_of: tnet.transitions().map(|(t, _)| trace.event_position(t)).collect(),
        trace_probability: tnet.transitions().map(|(t, _)| trace.firing_probability(t)).collect(),
        trace_labels: tnet
            .transitions()
            .map(|(_, tr)| tr.label.activity().cloned().expect("trace transitions are visible"))
            .collect(),
        model_alphabet: model.alphabet(),
    }
}
