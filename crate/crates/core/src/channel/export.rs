//! DOT and JSON serialization of state graphs.

use super::{ChannelKind, ChannelSpec, ChannelState, StateGraph};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn label_string(kind: ChannelKind, label: u8) -> String {
    match (kind, label) {
        (_, 0) => "o".to_string(),
        (ChannelKind::Nse, _) => "*".to_string(),
        (ChannelKind::Nss, v) => char::from_digit(v as u32, 36).unwrap().to_string(),
    }
}

fn label_from_string(kind: ChannelKind, s: &str) -> Result<u8> {
    let mut chars = s.chars();
    let c = chars.next().ok_or_else(|| Error::Format("empty edge label".into()))?;
    if chars.next().is_some() {
        return Err(Error::Format(format!("edge label {s:?} is not a single char")));
    }
    match (kind, c) {
        (_, 'o') => Ok(0),
        (ChannelKind::Nse, '*') => Ok(1),
        (ChannelKind::Nss, c) => c
            .to_digit(36)
            .map(|v| v as u8)
            .ok_or_else(|| Error::Format(format!("bad edge label {c:?}"))),
        (ChannelKind::Nse, c) => Err(Error::Format(format!("bad edge label {c:?}"))),
    }
}

/// Graphviz rendering; error edges are red, node labels carry the window
/// word.
pub fn graph_to_dot(graph: &StateGraph) -> String {
    let kind = graph.spec().kind;
    let mut out = String::from("digraph channel {\n  rankdir=LR;\n");
    for (i, s) in graph.states().iter().enumerate() {
        out.push_str(&format!("  {} [label=\"{}\"];\n", i, s.word(kind)));
    }
    for e in graph.edges() {
        let color = if e.is_error() { ", color=red" } else { "" };
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\"{}];\n",
            e.from,
            e.to,
            label_string(kind, e.label),
            color
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    from: usize,
    to: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    kind: ChannelKind,
    n: usize,
    d: usize,
    q: usize,
    states: Vec<String>,
    edges: Vec<EdgeFile>,
}

/// JSON form: `{kind, n, d, q, states:[word], edges:[{from,to,label}]}`.
pub fn graph_to_json(graph: &StateGraph) -> String {
    let spec = graph.spec();
    let file = GraphFile {
        kind: spec.kind,
        n: spec.n,
        d: spec.d,
        q: spec.q,
        states: graph.states().iter().map(|s| s.word(spec.kind)).collect(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeFile {
                from: e.from,
                to: e.to,
                label: label_string(spec.kind, e.label),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes")
}

/// Rebuild a graph from its JSON form, re-deriving transitions from the
/// spec and checking they match the serialized edge list.
pub fn graph_from_json(json: &str) -> Result<StateGraph> {
    let file: GraphFile =
        serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    let spec = ChannelSpec::new(file.kind, file.n, file.d, file.q)?;
    let graph = StateGraph::build(spec)?;
    let words: Vec<String> =
        graph.states().iter().map(|s| s.word(spec.kind)).collect();
    if words != file.states {
        return Err(Error::Format("serialized states disagree with spec".into()));
    }
    if graph.edges().len() != file.edges.len() {
        return Err(Error::Format("serialized edges disagree with spec".into()));
    }
    for (e, ef) in graph.edges().iter().zip(&file.edges) {
        if e.from != ef.from || e.to != ef.to || e.label != label_from_string(spec.kind, &ef.label)? {
            return Err(Error::Format("serialized edges disagree with spec".into()));
        }
    }
    Ok(graph)
}

#[allow(dead_code)]
fn parse_state(word: &str, kind: ChannelKind) -> Result<ChannelState> {
    ChannelState::from_word(word, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_marks_error_edges_red() {
        let g = StateGraph::build(ChannelSpec::nse(3, 1, 2).unwrap()).unwrap();
        let dot = graph_to_dot(&g);
        assert!(dot.contains("0 [label=\"ooo\"]"));
        assert!(dot.contains("1 [label=\"oo*\"]"));
        assert!(dot.contains("0 -> 1 [label=\"*\", color=red];"));
        assert!(dot.contains("0 -> 0 [label=\"o\"];"));
    }

    #[test]
    fn json_round_trip() {
        for spec in [
            ChannelSpec::nse(3, 1, 2).unwrap(),
            ChannelSpec::nss(3, 1, 3).unwrap(),
        ] {
            let g = StateGraph::build(spec).unwrap();
            let json = graph_to_json(&g);
            let g2 = graph_from_json(&json).unwrap();
            assert_eq!(g2.spec(), g.spec());
            assert_eq!(g2.edges(), g.edges());
        }
    }

    #[test]
    fn json_has_schema_fields() {
        let g = StateGraph::build(ChannelSpec::nse(3, 1, 2).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&graph_to_json(&g)).unwrap();
        assert_eq!(v["kind"], "nse");
        assert_eq!(v["n"], 3);
        assert_eq!(v["states"][1], "oo*");
        assert_eq!(v["edges"][1]["label"], "*");
    }
}
