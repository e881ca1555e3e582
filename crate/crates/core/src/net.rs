//! Labeled Petri nets with initial and final markings (system nets).
//!
//! Arcs have weight 1. Place and transition identifiers are opaque strings,
//! resolved once at construction into dense indices; markings are dense
//! token-count vectors over those indices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::Activity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceIdx(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionIdx(pub u32);

impl PlaceIdx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TransitionIdx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// What a transition emits when it fires.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionLabel {
    Visible(Activity),
    /// An invisible (tau) step.
    Silent,
}

impl TransitionLabel {
    pub fn activity(&self) -> Option<&Activity> {
        match self {
            TransitionLabel::Visible(a) => Some(a),
            TransitionLabel::Silent => None,
        }
    }

    pub fn is_silent(&self) -> bool {
        matches!(self, TransitionLabel::Silent)
    }
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::Visible(a) => write!(f, "{a}"),
            TransitionLabel::Silent => f.write_str("τ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub id: String,
    pub label: TransitionLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("duplicate place id `{0}`")]
    DuplicatePlace(String),
    #[error("duplicate transition id `{0}`")]
    DuplicateTransition(String),
    #[error("id `{0}` is used for both a place and a transition")]
    AmbiguousId(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("arc `{from}` -> `{to}` must connect a place and a transition")]
    BadArc { from: String, to: String },
    #[error("duplicate arc `{from}` -> `{to}`")]
    DuplicateArc { from: String, to: String },
    #[error("marking has {got} entries but the net has {expected} places")]
    MarkingShape { expected: usize, got: usize },
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    #[error("transition index {0} out of range")]
    UnknownTransition(u32),
    #[error("initial marking is empty")]
    EmptyInitialMarking,
    #[error("final marking is empty")]
    EmptyFinalMarking,
}

/// A multiset of places, stored densely by place index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Marking {
    counts: Vec<u32>,
}

impl Marking {
    pub fn empty(places: usize) -> Self {
        Marking { counts: vec![0; places] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Marking { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, p: PlaceIdx) -> u32 {
        self.counts[p.index()]
    }

    pub fn set(&mut self, p: PlaceIdx, count: u32) {
        self.counts[p.index()] = count;
    }

    pub fn add(&mut self, p: PlaceIdx, count: u32) {
        self.counts[p.index()] += count;
    }

    /// Total number of tokens.
    pub fn size(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    /// Places holding at least one token, with their counts.
    pub fn support(&self) -> impl Iterator<Item = (PlaceIdx, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (PlaceIdx(i as u32), c))
    }

    /// Concatenates two markings over disjoint place sets.
    pub fn concat(&self, other: &Marking) -> Marking {
        let mut counts = self.counts.clone();
        counts.extend_from_slice(&other.counts);
        Marking { counts }
    }
}

impl fmt::Debug for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for (p, c) in self.support() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{}", p.0)?;
            } else {
                write!(f, "{}^{}", p.0, c)?;
            }
        }
        f.write_str("]")
    }
}

/// A labeled Petri net with designated initial and final markings.
///
/// Immutable once built; see [`NetBuilder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemNet {
    places: Vec<String>,
    transitions: Vec<Transition>,
    preset: Vec<Vec<PlaceIdx>>,
    postset: Vec<Vec<PlaceIdx>>,
    place_index: BTreeMap<String, PlaceIdx>,
    transition_index: BTreeMap<String, TransitionIdx>,
    initial: Marking,
    final_marking: Marking,
}

/// One arc of the flow relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Arc {
    PlaceToTransition(PlaceIdx, TransitionIdx),
    TransitionToPlace(TransitionIdx, PlaceIdx),
}

impl SystemNet {
    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl ExactSizeIterator<Item = (PlaceIdx, &str)> + '_ {
        self.places
            .iter()
            .enumerate()
            .map(|(i, id)| (PlaceIdx(i as u32), id.as_str()))
    }

    pub fn transitions(&self) -> impl ExactSizeIterator<Item = (TransitionIdx, &Transition)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .map(|(i, t)| (TransitionIdx(i as u32), t))
    }

    pub fn place_id(&self, p: PlaceIdx) -> &str {
        &self.places[p.index()]
    }

    pub fn transition(&self, t: TransitionIdx) -> &Transition {
        &self.transitions[t.index()]
    }

    pub fn label(&self, t: TransitionIdx) -> &TransitionLabel {
        &self.transitions[t.index()].label
    }

    pub fn place_by_id(&self, id: &str) -> Option<PlaceIdx> {
        self.place_index.get(id).copied()
    }

    pub fn transition_by_id(&self, id: &str) -> Option<TransitionIdx> {
        self.transition_index.get(id).copied()
    }

    pub fn preset(&self, t: TransitionIdx) -> &[PlaceIdx] {
        &self.preset[t.index()]
    }

    pub fn postset(&self, t: TransitionIdx) -> &[PlaceIdx] {
        &self.postset[t.index()]
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.transitions().flat_map(move |(t, _)| {
            self.preset(t)
                .iter()
                .map(move |&p| Arc::PlaceToTransition(p, t))
                .chain(self.postset(t).iter().map(move |&p| Arc::TransitionToPlace(t, p)))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.preset.iter().chain(&self.postset).map(Vec::len).sum()
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial
    }

    pub fn final_marking(&self) -> &Marking {
        &self.final_marking
    }

    /// The distinct visible activities of the net, sorted.
    pub fn alphabet(&self) -> Vec<Activity> {
        let mut labels: Vec<Activity> = self
            .transitions
            .iter()
            .filter_map(|t| t.label.activity().cloned())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Builds a marking from `(place id, count)` pairs.
    pub fn marking(&self, tokens: &[(&str, u32)]) -> Result<Marking, NetError> {
        let mut m = Marking::empty(self.places.len());
        for &(id, count) in tokens {
            let p = self
                .place_by_id(id)
                .ok_or_else(|| NetError::UnknownPlace(id.into()))?;
            m.add(p, count);
        }
        Ok(m)
    }

    fn check_shape(&self, m: &Marking) -> Result<(), NetError> {
        if m.len() != self.places.len() {
            return Err(NetError::MarkingShape {
                expected: self.places.len(),
                got: m.len(),
            });
        }
        Ok(())
    }

    /// Whether `t` is enabled at `m`. Assumes `m` has the net's shape.
    #[inline]
    pub fn is_enabled(&self, m: &Marking, t: TransitionIdx) -> bool {
        self.preset[t.index()].iter().all(|&p| m.get(p) >= 1)
    }

    /// All transitions enabled at `m`, in index order.
    pub fn enabled_transitions(&self, m: &Marking) -> Result<Vec<TransitionIdx>, NetError> {
        self.check_shape(m)?;
        Ok(self
            .transitions()
            .map(|(t, _)| t)
            .filter(|&t| self.is_enabled(m, t))
            .collect())
    }

    /// Fires `t` at `m`, returning the successor marking.
    pub fn fire(&self, m: &Marking, t: TransitionIdx) -> Result<Marking, NetError> {
        self.check_shape(m)?;
        if t.index() >= self.transitions.len() {
            return Err(NetError::UnknownTransition(t.0));
        }
        if !self.is_enabled(m, t) {
            return Err(NetError::NotEnabled(self.transitions[t.index()].id.clone()));
        }
        Ok(self.fire_unchecked(m, t))
    }

    /// Fires `t` without checking enabledness.
    ///
    /// The caller guarantees `is_enabled(m, t)`.
    #[inline]
    pub fn fire_unchecked(&self, m: &Marking, t: TransitionIdx) -> Marking {
        let mut next = m.clone();
        for &p in &self.preset[t.index()] {
            next.counts[p.index()] -= 1;
        }
        for &p in &self.postset[t.index()] {
            next.counts[p.index()] += 1;
        }
        next
    }

    /// Replays a sequence of transitions from `from`, returning the reached marking.
    pub fn replay(
        &self,
        from: &Marking,
        sequence: impl IntoIterator<Item = TransitionIdx>,
    ) -> Result<Marking, NetError> {
        let mut m = from.clone();
        for t in sequence {
            m = self.fire(&m, t)?;
        }
        Ok(m)
    }
}

/// Incremental construction of a [`SystemNet`] with referential checks.
#[derive(Debug, Default, Clone)]
pub struct NetBuilder {
    places: Vec<String>,
    transitions: Vec<Transition>,
    preset: Vec<Vec<PlaceIdx>>,
    postset: Vec<Vec<PlaceIdx>>,
    place_index: BTreeMap<String, PlaceIdx>,
    transition_index: BTreeMap<String, TransitionIdx>,
    initial: Vec<u32>,
    final_marking: Vec<u32>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, id: impl Into<String>) -> Result<PlaceIdx, NetError> {
        let id = id.into();
        if self.place_index.contains_key(&id) {
            return Err(NetError::DuplicatePlace(id));
        }
        if self.transition_index.contains_key(&id) {
            return Err(NetError::AmbiguousId(id));
        }
        let idx = PlaceIdx(self.places.len() as u32);
        self.place_index.insert(id.clone(), idx);
        self.places.push(id);
        self.initial.push(0);
        self.final_marking.push(0);
        Ok(idx)
    }

    pub fn add_transition(
        &mut self,
        id: impl Into<String>,
        label: TransitionLabel,
    ) -> Result<TransitionIdx, NetError> {
        let id = id.into();
        if self.transition_index.contains_key(&id) {
            return Err(NetError::DuplicateTransition(id));
        }
        if self.place_index.contains_key(&id) {
            return Err(NetError::AmbiguousId(id));
        }
        let idx = TransitionIdx(self.transitions.len() as u32);
        self.transition_index.insert(id.clone(), idx);
        self.transitions.push(Transition { id, label });
        self.preset.push(Vec::new());
        self.postset.push(Vec::new());
        Ok(idx)
    }

    pub fn add_input_arc(&mut self, p: PlaceIdx, t: TransitionIdx) -> Result<(), NetError> {
        let pre = &mut self.preset[t.index()];
        if pre.contains(&p) {
            return Err(NetError::DuplicateArc {
                from: self.places[p.index()].clone(),
                to: self.transitions[t.index()].id.clone(),
            });
        }
        pre.push(p);
        Ok(())
    }

    pub fn add_output_arc(&mut self, t: TransitionIdx, p: PlaceIdx) -> Result<(), NetError> {
        let post = &mut self.postset[t.index()];
        if post.contains(&p) {
            return Err(NetError::DuplicateArc {
                from: self.transitions[t.index()].id.clone(),
                to: self.places[p.index()].clone(),
            });
        }
        post.push(p);
        Ok(())
    }

    /// Adds an arc by node identifiers; the direction follows the node kinds.
    pub fn add_arc(&mut self, source: &str, target: &str) -> Result<(), NetError> {
        let bad = || NetError::BadArc {
            from: source.into(),
            to: target.into(),
        };
        match (
            self.place_index.get(source).copied(),
            self.transition_index.get(source).copied(),
            self.place_index.get(target).copied(),
            self.transition_index.get(target).copied(),
        ) {
            (Some(p), _, _, Some(t)) => self.add_input_arc(p, t),
            (_, Some(t), Some(p), _) => self.add_output_arc(t, p),
            (None, None, _, _) => Err(NetError::UnknownNode(source.into())),
            (_, _, None, None) => Err(NetError::UnknownNode(target.into())),
            _ => Err(bad()),
        }
    }

    pub fn place(&self, id: &str) -> Option<PlaceIdx> {
        self.place_index.get(id).copied()
    }

    pub fn transition(&self, id: &str) -> Option<TransitionIdx> {
        self.transition_index.get(id).copied()
    }

    pub fn set_initial(&mut self, p: PlaceIdx, count: u32) {
        self.initial[p.index()] = count;
    }

    pub fn set_final(&mut self, p: PlaceIdx, count: u32) {
        self.final_marking[p.index()] = count;
    }

    pub fn set_initial_by_id(&mut self, id: &str, count: u32) -> Result<(), NetError> {
        let p = self.place(id).ok_or_else(|| NetError::UnknownPlace(id.into()))?;
        self.set_initial(p, count);
        Ok(())
    }

    pub fn set_final_by_id(&mut self, id: &str, count: u32) -> Result<(), NetError> {
        let p = self.place(id).ok_or_else(|| NetError::UnknownPlace(id.into()))?;
        self.set_final(p, count);
        Ok(())
    }

    /// Finishes the net. Markings may be empty only when the net has no places.
    pub fn build(self) -> Result<SystemNet, NetError> {
        if !self.places.is_empty() {
            if self.initial.iter().all(|&c| c == 0) {
                return Err(NetError::EmptyInitialMarking);
            }
            if self.final_marking.iter().all(|&c| c == 0) {
                return Err(NetError::EmptyFinalMarking);
            }
        }
        Ok(SystemNet {
            places: self.places,
            transitions: self.transitions,
            preset: self.preset,
            postset: self.postset,
            place_index: self.place_index,
            transition_index: self.transition_index,
            initial: Marking::from_counts(self.initial),
            final_marking: Marking::from_counts(self.final_marking),
        })
    }
}
