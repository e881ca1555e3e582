//! Stochastically known logs as CSV and JSON.
//!
//! CSV has the header `case_id,event_id,distribution,timestamp` with
//! distributions written as `A:0.8;B:0.2`; the timestamp column may be
//! empty or missing. JSON is an array of
//! `{"case_id", "events": [{"event_id", "distribution": {label: p}, "timestamp"?}]}`.
//!
//! Rows are grouped by case id in order of first appearance and events keep
//! file order. Distributions must sum to 1 within
//! [`INPUT_TOLERANCE`](sktr_core::log::INPUT_TOLERANCE); nothing is
//! renormalized.

use std::collections::HashMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sktr_core::log::{LogError, SkEvent, SkTrace, Timestamp, INPUT_TOLERANCE};
use sktr_core::Activity;
use thiserror::Error;

use crate::time::{format_timestamp, parse_timestamp};

pub const CSV_HEADER: [&str; 4] = ["case_id", "event_id", "distribution", "timestamp"];

#[derive(Debug, Error)]
pub enum SkLogError {
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected header `case_id,event_id,distribution[,timestamp]`, found `{0}`")]
    Header(String),
    #[error("line {line}: case `{case}` event `{event}`: {message}")]
    Field {
        line: u64,
        case: String,
        event: String,
        message: String,
    },
    #[error("case `{case}` event `{event}`: {cause}")]
    Event {
        case: String,
        event: String,
        cause: LogError,
    },
    #[error(transparent)]
    Trace(LogError),
}

/// Parses `A:0.8;B:0.2`. Labels may themselves contain `:`.
pub fn parse_distribution(field: &str) -> Result<Vec<(Activity, f64)>, String> {
    let mut out = Vec::new();
    for part in field.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, p) = part
            .rsplit_once(':')
            .ok_or_else(|| format!("`{part}` is not LABEL:PROB"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(format!("empty label in `{part}`"));
        }
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a probability", p.trim()))?;
        out.push((Activity::from(label), p));
    }
    Ok(out)
}

pub fn format_distribution(e: &SkEvent) -> String {
    e.distribution()
        .iter()
        .map(|(l, p)| format!("{l}:{p}"))
        .collect::<Vec<_>>()
        .join(";")
}

struct Grouper {
    order: Vec<(String, Vec<SkEvent>)>,
    index: HashMap<String, usize>,
}

impl Grouper {
    fn new() -> Self {
        Grouper {
            order: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn push(&mut self, case: &str, e: SkEvent) {
        let i = *self.index.entry(case.to_string()).or_insert_with(|| {
            self.order.push((case.to_string(), Vec::new()));
            self.order.len() - 1
        });
        self.order[i].1.push(e);
    }

    fn finish(self) -> Result<Vec<SkTrace>, SkLogError> {
        self.order
            .into_iter()
            .map(|(case, events)| SkTrace::new(case, events).map_err(SkLogError::Trace))
            .collect()
    }
}

fn event(
    case: &str,
    event_id: &str,
    dist: Vec<(Activity, f64)>,
    ts: Option<Timestamp>,
) -> Result<SkEvent, SkLogError> {
    SkEvent::with_tolerance(event_id, dist, ts, INPUT_TOLERANCE).map_err(|cause| SkLogError::Event {
        case: case.into(),
        event: event_id.into(),
        cause,
    })
}

pub fn parse_sk_csv(text: &str) -> Result<Vec<SkTrace>, SkLogError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    if !(names == CSV_HEADER[..3] || names == CSV_HEADER) {
        return Err(SkLogError::Header(names.join(",")));
    }
    let mut groups = Grouper::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let (case, event_id) = (field(0), field(1));
        let bad = |message: String| SkLogError::Field {
            line,
            case: case.into(),
            event: event_id.into(),
            message,
        };
        if record.len() < 3 || record.len() > 4 {
            return Err(bad(format!("expected 3 or 4 fields, found {}", record.len())));
        }
        let dist = parse_distribution(field(2)).map_err(bad)?;
        let ts = match field(3) {
            "" => None,
            s => Some(parse_timestamp(s).ok_or_else(|| bad(format!("invalid timestamp `{s}`")))?),
        };
        groups.push(case, event(case, event_id, dist, ts)?);
    }
    groups.finish()
}

pub fn write_sk_csv(log: &[SkTrace]) -> Result<String, SkLogError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for t in log {
        for e in t.events() {
            let ts = e.timestamp.map(format_timestamp).unwrap_or_default();
            w.write_record([t.case_id.as_str(), &e.event_id, &format_distribution(e), &ts])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| SkLogError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// A label→probability object that keeps document order and rejects
/// duplicate keys.
#[derive(Debug, Clone, PartialEq)]
struct OrderedDistribution(Vec<(String, f64)>);

impl Serialize for OrderedDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for OrderedDistribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = OrderedDistribution;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping labels to probabilities")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, f64)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, f64>()? {
                    if out.iter().any(|(l, _)| *l == k) {
                        return Err(serde::de::Error::custom(format!("label `{k}` appears more than once")));
                    }
                    out.push((k, v));
                }
                Ok(OrderedDistribution(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEvent {
    event_id: String,
    distribution: OrderedDistribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTrace {
    case_id: String,
    events: Vec<JsonEvent>,
}

pub fn parse_sk_json(text: &str) -> Result<Vec<SkTrace>, SkLogError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let raw: Vec<JsonTrace> = serde_json::from_str(text)?;
    let mut groups = Grouper::new();
    for t in raw {
        for e in t.events {
            let ts = match &e.timestamp {
                None => None,
                Some(s) => Some(parse_timestamp(s).ok_or_else(|| SkLogError::Field {
                    line: 0,
                    case: t.case_id.clone(),
                    event: e.event_id.clone(),
                    message: format!("invalid timestamp `{s}`"),
                })?),
            };
            let dist = e.distribution.0.into_iter().map(|(l, p)| (l.into(), p)).collect();
            groups.push(&t.case_id, event(&t.case_id, &e.event_id, dist, ts)?);
        }
    }
    groups.finish()
}

pub fn write_sk_json(log: &[SkTrace]) -> String {
    let raw: Vec<JsonTrace> = log
        .iter()
        .map(|t| JsonTrace {
            case_id: t.case_id.clone(),
            events: t
                .events()
                .iter()
                .map(|e| JsonEvent {
                    event_id: e.event_id.clone(),
                    distribution: OrderedDistribution(
                        e.distribution().iter().map(|(l, p)| (l.to_string(), *p)).collect(),
                    ),
                    timestamp: e.timestamp.map(format_timestamp),
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&raw).expect("log serializes")
}
