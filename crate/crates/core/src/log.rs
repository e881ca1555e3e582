//! Stochastically known events and traces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::net::{NetBuilder, SystemNet, TransitionIdx, TransitionLabel};
use crate::Activity;

/// Tolerance on `Σ p = 1` for distributions built in memory.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Tolerance on `Σ p = 1` for distributions read from input files.
pub const INPUT_TOLERANCE: f64 = 1e-6;

/// Milliseconds since the Unix epoch, UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(pub i64);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogError {
    #[error("event `{event}` has an empty distribution")]
    EmptyDistribution { event: String },
    #[error("event `{event}`: label `{label}` has non-positive or non-finite probability {p}")]
    BadProbability { event: String, label: String, p: f64 },
    #[error("event `{event}`: probabilities sum to {sum}, not 1")]
    BadSum { event: String, sum: f64 },
    #[error("event `{event}`: label `{label}` appears more than once")]
    DuplicateLabel { event: String, label: String },
    #[error("case `{case}`: timestamp of event `{event}` precedes its predecessor")]
    TimestampOrder { case: String, event: String },
    #[error("case `{case}` has no events")]
    EmptyTrace { case: String },
}

/// One event whose activity label is known only as a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SkEvent {
    pub event_id: String,
    distribution: Vec<(Activity, f64)>,
    pub timestamp: Option<Timestamp>,
}

impl SkEvent {
    /// Validates the distribution at [`DISTRIBUTION_TOLERANCE`].
    pub fn new(
        event_id: impl Into<String>,
        distribution: Vec<(Activity, f64)>,
        timestamp: Option<Timestamp>,
    ) -> Result<Self, LogError> {
        Self::with_tolerance(event_id, distribution, timestamp, DISTRIBUTION_TOLERANCE)
    }

    pub fn with_tolerance(
        event_id: impl Into<String>,
        distribution: Vec<(Activity, f64)>,
        timestamp: Option<Timestamp>,
        tolerance: f64,
    ) -> Result<Self, LogError> {
        let event = event_id.into();
        if distribution.is_empty() {
            return Err(LogError::EmptyDistribution { event });
        }
        for (i, (label, p)) in distribution.iter().enumerate() {
            if !p.is_finite() || *p <= 0.0 || *p > 1.0 + tolerance {
                return Err(LogError::BadProbability {
                    event,
                    label: label.as_str().into(),
                    p: *p,
                });
            }
            if distribution[..i].iter().any(|(l, _)| l == label) {
                return Err(LogError::DuplicateLabel {
                    event,
                    label: label.as_str().into(),
                });
            }
        }
        let sum: f64 = distribution.iter().map(|(_, p)| p).sum();
        if libm::fabs(sum - 1.0) > tolerance {
            return Err(LogError::BadSum { event, sum });
        }
        Ok(SkEvent {
            event_id: event,
            distribution,
            timestamp,
        })
    }

    /// A certain event: `{label: 1.0}`.
    pub fn deterministic(
        event_id: impl Into<String>,
        label: Activity,
        timestamp: Option<Timestamp>,
    ) -> Self {
        SkEvent {
            event_id: event_id.into(),
            distribution: alloc::vec![(label, 1.0)],
            timestamp,
        }
    }

    /// Labels with their probabilities, in input order.
    pub fn distribution(&self) -> &[(Activity, f64)] {
        &self.distribution
    }

    pub fn support_size(&self) -> usize {
        self.distribution.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.distribution.len() == 1
    }

    pub fn probability(&self, label: &str) -> Option<f64> {
        self.distribution
            .iter()
            .find(|(l, _)| l.as_str() == label)
            .map(|&(_, p)| p)
    }

    /// Most probable label; ties go to the lexicographically smallest label.
    pub fn argmax(&self) -> &Activity {
        let mut best = &self.distribution[0];
        for entry in &self.distribution[1..] {
            if entry.1 > best.1 || (entry.1 == best.1 && entry.0 < best.0) {
                best = entry;
            }
        }
        &best.0
    }
}

/// An ordered sequence of SK events belonging to one case.
#[derive(Debug, Clone, PartialEq)]
pub struct SkTrace {
    pub case_id: String,
    events: Vec<SkEvent>,
}

impl SkTrace {
    /// Checks that timestamps, where present, never decrease.
    pub fn new(case_id: impl Into<String>, events: Vec<SkEvent>) -> Result<Self, LogError> {
        let case_id = case_id.into();
        let mut last: Option<Timestamp> = None;
        for e in &events {
            if let Some(ts) = e.timestamp {
                if last.is_some_and(|l| ts < l) {
                    return Err(LogError::TimestampOrder {
                        case: case_id,
                        event: e.event_id.clone(),
                    });
                }
                last = Some(ts);
            }
        }
        Ok(SkTrace { case_id, events })
    }

    /// A deterministic trace from plain labels, with generated event ids.
    pub fn from_labels<L: Into<Activity>>(
        case_id: impl Into<String>,
        labels: impl IntoIterator<Item = L>,
    ) -> Self {
        let events = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| SkEvent::deterministic(format!("e{}", i + 1), l.into(), None))
            .collect();
        SkTrace {
            case_id: case_id.into(),
            events,
        }
    }

    pub fn events(&self) -> &[SkEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.events.iter().all(SkEvent::is_deterministic)
    }
}

/// A chain-shaped net `p0 → … → p|σ|` whose transitions between `p(i-1)`
/// and `p(i)` are the alternative labels of event `i`, each carrying its
/// firing probability.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticTraceNet {
    net: SystemNet,
    firing_prob: Vec<f64>,
    event_of: Vec<usize>,
}

impl StochasticTraceNet {
    pub fn net(&self) -> &SystemNet {
        &self.net
    }

    pub fn firing_probability(&self, t: TransitionIdx) -> f64 {
        self.firing_prob[t.index()]
    }

    /// Zero-based position of the event that `t` belongs to.
    pub fn event_position(&self, t: TransitionIdx) -> usize {
        self.event_of[t.index()]
    }

    pub fn event_count(&self) -> usize {
        self.net.place_count() - 1
    }

    /// Transitions of the event at `position`.
    pub fn alternatives(&self, position: usize) -> impl Iterator<Item = TransitionIdx> + '_ {
        self.event_of
            .iter()
            .enumerate()
            .filter(move |(_, &e)| e == position)
            .map(|(i, _)| TransitionIdx(i as u32))
    }
}

/// Encodes an SK trace as a stochastic trace net.
pub fn build_trace_net(trace: &SkTrace) -> Result<StochasticTraceNet, LogError> {
    if trace.is_empty() {
        return Err(LogError::EmptyTrace {
            case: trace.case_id.clone(),
        });
    }
    let mut b = NetBuilder::new();
    let places: Vec<_> = (0..=trace.len())
        .map(|i| b.add_place(format!("p{i}")).expect("fresh place ids"))
        .collect();
    let mut firing_prob = Vec::new();
    let mut event_of = Vec::new();
    for (i, event) in trace.events().iter().enumerate() {
        for (j, (label, p)) in event.distribution().iter().enumerate() {
            let t = b
                .add_transition(
                    format!("t{}_{}", i + 1, j + 1),
                    TransitionLabel::Visible(label.clone()),
                )
                .expect("fresh transition ids");
            b.add_input_arc(places[i], t).expect("fresh arc");
            b.add_output_arc(t, places[i + 1]).expect("fresh arc");
            firing_prob.push(*p);
            event_of.push(i);
        }
    }
    b.set_initial(places[0], 1);
    b.set_final(places[trace.len()], 1);
    Ok(StochasticTraceNet {
        net: b.build().expect("chain net is well formed"),
        firing_prob,
        event_of,
    })
}

/// The Argmax baseline: the most probable label of every event, ignoring any model.
pub fn argmax_recover(trace: &SkTrace) -> Vec<Activity> {
    trace.events().iter().map(|e| e.argmax().clone()).collect()
}
