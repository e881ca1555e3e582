//! Deterministic event logs in XES.
//!
//! Only `concept:name` (trace and event level) and `time:timestamp` are
//! read; every other attribute, including lifecycle transitions, is
//! ignored. Each event becomes a certain SK event `{label: 1.0}`.

use std::fmt::Write as _;

use roxmltree::{Document, Node};
use sktr_core::log::{LogError, SkEvent, SkTrace};
use thiserror::Error;

use crate::pnml::escape;
use crate::time::{format_timestamp, parse_timestamp};

#[derive(Debug, Error)]
pub enum XesError {
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("root element is <{0}>, expected <log>")]
    NotALog(String),
    #[error("trace {trace}, event {event}: missing concept:name")]
    MissingName { trace: usize, event: usize },
    #[error("trace {trace}, event {event}: invalid timestamp `{value}`")]
    BadTimestamp {
        trace: usize,
        event: usize,
        value: String,
    },
    #[error("trace {trace}: {cause}")]
    Trace { trace: usize, cause: LogError },
    #[error("case `{case}` event `{event}` is not deterministic")]
    NotDeterministic { case: String, event: String },
}

fn attribute<'a>(node: Node<'a, '_>, tag: &str, key: &str) -> Option<&'a str> {
    node.children()
        .find(|c| c.has_tag_name(tag) && c.attribute("key") == Some(key))
        .and_then(|c| c.attribute("value"))
}

pub fn parse_xes(text: &str) -> Result<Vec<SkTrace>, XesError> {
    let doc = Document::parse(text)?;
    let root = doc.root_element();
    if !root.has_tag_name("log") {
        return Err(XesError::NotALog(root.tag_name().name().into()));
    }
    let mut log = Vec::new();
    for (ti, trace) in root.children().filter(|c| c.has_tag_name("trace")).enumerate() {
        let case = attribute(trace, "string", "concept:name")
            .map(str::to_string)
            .unwrap_or_else(|| ti.to_string());
        let mut events = Vec::new();
        for (ei, ev) in trace.children().filter(|c| c.has_tag_name("event")).enumerate() {
            let label = attribute(ev, "string", "concept:name")
                .ok_or(XesError::MissingName { trace: ti, event: ei })?;
            let ts = match attribute(ev, "date", "time:timestamp") {
                None => None,
                Some(v) => Some(parse_timestamp(v).ok_or_else(|| XesError::BadTimestamp {
                    trace: ti,
                    event: ei,
                    value: v.into(),
                })?),
            };
            events.push(SkEvent::deterministic(format!("e{}", ei + 1), label.into(), ts));
        }
        log.push(SkTrace::new(case, events).map_err(|cause| XesError::Trace { trace: ti, cause })?);
    }
    Ok(log)
}

/// Writes a deterministic log. Event ids are not part of XES and are lost.
pub fn write_xes(log: &[SkTrace]) -> Result<String, XesError> {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<log xes.version=\"1.0\" xes.features=\"nested-attributes\">\n");
    s.push_str("  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n");
    s.push_str("  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n");
    for t in log {
        let _ = writeln!(
            s,
            "  <trace>\n    <string key=\"concept:name\" value=\"{}\"/>",
            escape(&t.case_id)
        );
        for e in t.events() {
            if !e.is_deterministic() {
                return Err(XesError::NotDeterministic {
                    case: t.case_id.clone(),
                    event: e.event_id.clone(),
                });
            }
            let _ = writeln!(
                s,
                "    <event>\n      <string key=\"concept:name\" value=\"{}\"/>",
                escape(e.argmax().as_str())
            );
            if let Some(ts) = e.timestamp {
                let _ = writeln!(
                    s,
                    "      <date key=\"time:timestamp\" value=\"{}\"/>",
                    format_timestamp(ts)
                );
            }
            s.push_str("    </event>\n");
        }
        s.push_str("  </trace>\n");
    }
    s.push_str("</log>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0" xmlns="http://www.xes-standard.org/">
  <trace>
    <string key="concept:name" value="c1"/>
    <event><string key="concept:name" value="A"/><string key="lifecycle:transition" value="complete"/>
      <date key="time:timestamp" value="2011-10-01T00:38:44.546+02:00"/></event>
    <event><string key="concept:name" value="B"/></event>
  </trace>
</log>"#;

    #[test]
    fn one_trace_two_events() {
        let log = parse_xes(TWO).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].case_id, "c1");
        let labels: Vec<&str> = log[0].events().iter().map(|e| e.argmax().as_str()).collect();
        assert_eq!(labels, ["A", "B"]);
        assert!(log[0].is_deterministic());
        assert!(log[0].events()[0].timestamp.is_some());
    }

    #[test]
    fn missing_name_reports_indices() {
        let doc = TWO.replace(r#"<event><string key="concept:name" value="B"/></event>"#, "<event/>");
        let err = parse_xes(&doc).unwrap_err();
        assert!(matches!(err, XesError::MissingName { trace: 0, event: 1 }));
    }

    #[test]
    fn round_trip() {
        let log = parse_xes(TWO).unwrap();
        assert_eq!(parse_xes(&write_xes(&log).unwrap()).unwrap(), log);
    }
}
