//! PNML place/transition nets.
//!
//! Reads the subset emitted by common process-mining tools: places with an
//! optional `<initialMarking>`, transitions whose `<name>` text is the
//! activity label, and arcs of weight 1. A transition without a name, or
//! with a `toolspecific` element carrying `activity="$invisible$"`, is
//! silent. Pages are flattened. The final marking comes from a
//! `<finalmarkings>` block or, when absent, from a sidecar JSON document
//! `{"final": {"place_id": count}}`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use roxmltree::{Document, Node, TextPos};
use serde::Deserialize;
use sktr_core::net::{NetBuilder, NetError, SystemNet, TransitionIdx, TransitionLabel};
use thiserror::Error;

const INVISIBLE: &str = "$invisible$";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub row: u32,
    pub col: u32,
}

impl From<TextPos> for Location {
    fn from(p: TextPos) -> Self {
        Location { row: p.row, col: p.col }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.row, self.col)
    }
}

#[derive(Debug, Error)]
pub enum PnmlError {
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("{at}: {message}")]
    Structure { at: Location, message: String },
    #[error("{at}: {cause}")]
    Net { at: Location, cause: NetError },
    #[error("no <finalmarkings> block and no sidecar final marking")]
    MissingFinalMarking,
    #[error("no initial marking")]
    MissingInitialMarking,
    #[error("sidecar final marking: {0}")]
    Sidecar(String),
    #[error("{path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Deserialize)]
struct Sidecar {
    #[serde(rename = "final")]
    final_marking: BTreeMap<String, u32>,
}

/// Parses a sidecar final-marking document.
pub fn parse_sidecar(text: &str) -> Result<BTreeMap<String, u32>, PnmlError> {
    serde_json::from_str::<Sidecar>(text)
        .map(|s| s.final_marking)
        .map_err(|e| PnmlError::Sidecar(e.to_string()))
}

fn structure(doc: &Document, node: Node, message: impl Into<String>) -> PnmlError {
    PnmlError::Structure {
        at: doc.text_pos_at(node.range().start).into(),
        message: message.into(),
    }
}

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|c| c.has_tag_name(name))
}

/// Text of `<name><text>…</text></name>`-style nested elements.
fn nested_text<'a>(node: Node<'a, '_>, outer: &str) -> Option<&'a str> {
    child(node, outer)
        .and_then(|n| child(n, "text"))
        .and_then(|t| t.text())
        .map(str::trim)
}

fn parse_count(doc: &Document, node: Node, text: &str) -> Result<u32, PnmlError> {
    text.trim()
        .parse()
        .map_err(|_| structure(doc, node, format!("invalid token count `{}`", text.trim())))
}

struct Raw<'a, 'i> {
    places: Vec<Node<'a, 'i>>,
    transitions: Vec<Node<'a, 'i>>,
    arcs: Vec<Node<'a, 'i>>,
    final_block: Option<Node<'a, 'i>>,
}

fn collect<'a, 'i>(node: Node<'a, 'i>, raw: &mut Raw<'a, 'i>) {
    for c in node.children().filter(Node::is_element) {
        match c.tag_name().name() {
            "page" => collect(c, raw),
            "place" => raw.places.push(c),
            "transition" => raw.transitions.push(c),
            "arc" => raw.arcs.push(c),
            "finalmarkings" => {
                raw.final_block.get_or_insert(c);
            }
            _ => {}
        }
    }
}

fn id_of<'a>(doc: &Document, node: Node<'a, '_>, attr: &str) -> Result<&'a str, PnmlError> {
    node.attribute(attr)
        .ok_or_else(|| structure(doc, node, format!("<{}> without `{attr}`", node.tag_name().name())))
}

/// Parses a PNML document whose final marking is given inline.
pub fn parse_pnml(text: &str) -> Result<SystemNet, PnmlError> {
    parse_pnml_with_final(text, None)
}

/// Parses a PNML document; `sidecar` supplies the final marking when the
/// document has no `<finalmarkings>` block.
pub fn parse_pnml_with_final(
    text: &str,
    sidecar: Option<&BTreeMap<String, u32>>,
) -> Result<SystemNet, PnmlError> {
    let doc = Document::parse(text)?;
    let root = doc.root_element();
    let net = if root.has_tag_name("net") {
        root
    } else {
        child(root, "net").ok_or_else(|| structure(&doc, root, "no <net> element"))?
    };
    let mut raw = Raw {
        places: Vec::new(),
        transitions: Vec::new(),
        arcs: Vec::new(),
        final_block: None,
    };
    collect(net, &mut raw);

    let net_err = |node: Node, source: NetError| PnmlError::Net {
        at: doc.text_pos_at(node.range().start).into(),
        cause: source,
    };
    let mut b = NetBuilder::new();
    for &p in &raw.places {
        let id = id_of(&doc, p, "id")?;
        let idx = b.add_place(id).map_err(|e| net_err(p, e))?;
        if let Some(t) = nested_text(p, "initialMarking") {
            let n = parse_count(&doc, p, t)?;
            b.set_initial(idx, n);
        }
    }
    for &t in &raw.transitions {
        let id = id_of(&doc, t, "id")?;
        let invisible = t
            .children()
            .any(|c| c.has_tag_name("toolspecific") && c.attribute("activity") == Some(INVISIBLE));
        let label = match nested_text(t, "name") {
            Some(name) if !invisible && !name.is_empty() => TransitionLabel::Visible(name.into()),
            _ => TransitionLabel::Silent,
        };
        b.add_transition(id, label).map_err(|e| net_err(t, e))?;
    }
    for &a in &raw.arcs {
        let source = id_of(&doc, a, "source")?;
        let target = id_of(&doc, a, "target")?;
        if let Some(w) = nested_text(a, "inscription") {
            if parse_count(&doc, a, w)? != 1 {
                return Err(structure(&doc, a, format!("arc weight {w} is not supported")));
            }
        }
        b.add_arc(source, target).map_err(|e| net_err(a, e))?;
    }

    match (raw.final_block, sidecar) {
        (Some(block), _) => {
            let marking = child(block, "marking")
                .ok_or_else(|| structure(&doc, block, "<finalmarkings> without <marking>"))?;
            for p in marking.children().filter(|c| c.has_tag_name("place")) {
                let id = id_of(&doc, p, "idref")?;
                let n = match child(p, "text").and_then(|t| t.text()) {
                    Some(t) => parse_count(&doc, p, t)?,
                    None => 1,
                };
                b.set_final_by_id(id, n).map_err(|e| net_err(p, e))?;
            }
        }
        (None, Some(m)) => {
            for (id, &n) in m {
                b.set_final_by_id(id, n)
                    .map_err(|e| PnmlError::Sidecar(e.to_string()))?;
            }
        }
        (None, None) if !raw.places.is_empty() => return Err(PnmlError::MissingFinalMarking),
        (None, None) => {}
    }
    b.build().map_err(|e| match e {
        NetError::EmptyInitialMarking => PnmlError::MissingInitialMarking,
        NetError::EmptyFinalMarking => PnmlError::MissingFinalMarking,
        e => net_err(net, e),
    })
}

/// Sidecar path for a model file: `model.pnml` → `model.final.json`.
pub fn sidecar_path(model: &Path) -> PathBuf {
    model.with_extension("final.json")
}

/// Reads a model file, consulting `final_path` (or the default sidecar
/// next to the model, if it exists) when the document lacks a final marking.
pub fn read_pnml(path: &Path, final_path: Option<&Path>) -> Result<SystemNet, PnmlError> {
    let read = |p: &Path| {
        fs::read_to_string(p).map_err(|source| PnmlError::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    let text = read(path)?;
    let default = sidecar_path(path);
    let sidecar = match final_path {
        Some(p) => Some(parse_sidecar(&read(p)?)?),
        None if default.exists() => Some(parse_sidecar(&read(&default)?)?),
        None => None,
    };
    parse_pnml_with_final(&text, sidecar.as_ref())
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Serializes a net, including its final marking.
pub fn serialize_pnml(net: &SystemNet) -> String {
    serialize_pnml_annotated(net, |_| Vec::new())
}

/// Like [`serialize_pnml`], attaching `annotate(t)` as attributes of an
/// extra `<toolspecific tool="sktr">` element on each transition.
pub fn serialize_pnml_annotated(
    net: &SystemNet,
    annotate: impl Fn(TransitionIdx) -> Vec<(&'static str, String)>,
) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n");
    s.push_str("  <net id=\"net\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n");
    s.push_str("    <page id=\"page\">\n");
    for (p, id) in net.places() {
        let id = escape(id);
        let _ = write!(s, "      <place id=\"{id}\">\n        <name><text>{id}</text></name>\n");
        let n = net.initial_marking().get(p);
        if n > 0 {
            let _ = writeln!(s, "        <initialMarking><text>{n}</text></initialMarking>");
        }
        s.push_str("      </place>\n");
    }
    for (t, tr) in net.transitions() {
        let id = escape(&tr.id);
        let _ = writeln!(s, "      <transition id=\"{id}\">");
        match &tr.label {
            TransitionLabel::Visible(a) => {
                let _ = writeln!(s, "        <name><text>{}</text></name>", escape(a.as_str()));
            }
            TransitionLabel::Silent => {
                let _ = writeln!(s, "        <name><text>tau</text></name>");
                let _ = writeln!(
                    s,
                    "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"{INVISIBLE}\" localNodeID=\"{id}\"/>"
                );
            }
        }
        let extra = annotate(t);
        if !extra.is_empty() {
            s.push_str("        <toolspecific tool=\"sktr\"");
            for (k, v) in extra {
                let _ = write!(s, " {k}=\"{}\"", escape(&v));
            }
            s.push_str("/>\n");
        }
        s.push_str("      </transition>\n");
    }
    let mut arc = 0;
    for (t, tr) in net.transitions() {
        for &p in net.preset(t) {
            let _ = writeln!(
                s,
                "      <arc id=\"a{arc}\" source=\"{}\" target=\"{}\"/>",
                escape(net.place_id(p)),
                escape(&tr.id)
            );
            arc += 1;
        }
        for &p in net.postset(t) {
            let _ = writeln!(
                s,
                "      <arc id=\"a{arc}\" source=\"{}\" target=\"{}\"/>",
                escape(&tr.id),
                escape(net.place_id(p))
            );
            arc += 1;
        }
    }
    s.push_str("    </page>\n    <finalmarkings>\n      <marking>\n");
    for (p, n) in net.final_marking().support() {
        let _ = writeln!(
            s,
            "        <place idref=\"{}\"><text>{n}</text></place>",
            escape(net.place_id(p))
        );
    }
    s.push_str("      </marking>\n    </finalmarkings>\n  </net>\n</pnml>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"<?xml version="1.0"?>
<pnml><net id="n"><page id="pg">
  <place id="p"><initialMarking><text>1</text></initialMarking></place>
  <transition id="t"><name><text>A</text></name></transition>
  <arc id="a" source="p" target="t"/>
</page>
<finalmarkings><marking><place idref="p"><text>0</text></place></marking></finalmarkings>
</net></pnml>"#;

    #[test]
    fn minimal_document() {
        // final marking of all zeros is rejected as empty
        assert!(matches!(parse_pnml(MINIMAL), Err(PnmlError::MissingFinalMarking)));
        let doc = MINIMAL.replace("<text>0</text>", "<text>1</text>");
        let net = parse_pnml(&doc).unwrap();
        assert_eq!(net.place_count(), 1);
        assert_eq!(net.transition_count(), 1);
        assert_eq!(net.label(TransitionIdx(0)), &TransitionLabel::Visible("A".into()));
    }

    #[test]
    fn silent_transitions() {
        let doc = r#"<pnml><net id="n">
  <place id="i"><initialMarking><text>1</text></initialMarking></place><place id="o"/>
  <transition id="t1"><name><text>tau</text></name><toolspecific tool="ProM" activity="$invisible$"/></transition>
  <transition id="t2"/>
  <arc id="a1" source="i" target="t1"/><arc id="a2" source="t1" target="o"/>
  <finalmarkings><marking><place idref="o"><text>1</text></place></marking></finalmarkings>
</net></pnml>"#;
        let net = parse_pnml(doc).unwrap();
        assert!(net.label(TransitionIdx(0)).is_silent());
        assert!(net.label(TransitionIdx(1)).is_silent());
    }

    #[test]
    fn sidecar_final_marking() {
        let doc = MINIMAL.replace(
            "<finalmarkings><marking><place idref=\"p\"><text>0</text></place></marking></finalmarkings>",
            "",
        );
        assert!(matches!(parse_pnml(&doc), Err(PnmlError::MissingFinalMarking)));
        let side = parse_sidecar(r#"{"final": {"p": 1}}"#).unwrap();
        let net = parse_pnml_with_final(&doc, Some(&side)).unwrap();
        assert_eq!(net.final_marking().counts(), &[1]);
    }

    #[test]
    fn errors_carry_locations() {
        let doc = MINIMAL.replace("source=\"p\" target=\"t\"", "source=\"p\" target=\"nope\"");
        let err = parse_pnml(&doc).unwrap_err();
        assert!(matches!(err, PnmlError::Net { at: Location { row: 5, .. }, .. }), "{err}");
        let err = parse_pnml("<pnml><net>").unwrap_err();
        assert!(matches!(err, PnmlError::Xml(_)));
        let doc = MINIMAL.replace("<arc id=\"a\" source=\"p\" target=\"t\"/>",
            "<arc id=\"a\" source=\"p\" target=\"t\"><inscription><text>2</text></inscription></arc>");
        assert!(parse_pnml(&doc).unwrap_err().to_string().contains("weight"));
    }

    #[test]
    fn empty_net_skeleton() {
        let net = NetBuilder::new().build().unwrap();
        let text = serialize_pnml(&net);
        let back = parse_pnml(&text).unwrap();
        assert_eq!(back.place_count(), 0);
        assert_eq!(back.transition_count(), 0);
    }

    #[test]
    fn escapes_identifiers() {
        let mut b = NetBuilder::new();
        let i = b.add_place("a<&>\"'").unwrap();
        let o = b.add_place("o").unwrap();
        let t = b.add_transition("t", TransitionLabel::Visible("R&D".into())).unwrap();
        b.add_input_arc(i, t).unwrap();
        b.add_output_arc(t, o).unwrap();
        b.set_initial(i, 1);
        b.set_final(o, 1);
        let net = b.build().unwrap();
        assert_eq!(parse_pnml(&serialize_pnml(&net)).unwrap(), net);
    }
}
