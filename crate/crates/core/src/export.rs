//! DOT and JSON renderings of explored parts of an exchange graph.
//!
//! Output is sorted by key, never by node id, so two runs that explore the
//! same subgraph in different orders produce identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::curve::ArcCode;
use crate::explorer::{key_strings, Explorer, NodeId};
use crate::surface::FlipRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub index: usize,
    pub key: Vec<String>,
    pub flip_path: Vec<FlipRecord>,
    pub in_face: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    /// Pairs of indices into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

/// The listed nodes in key order, and the known edges between them as
/// pairs of positions in that order.
fn layout(e: &Explorer, nodes: &[NodeId]) -> (Vec<NodeId>, Vec<(usize, usize)>) {
    let mut sorted: Vec<NodeId> = nodes
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    sorted.sort_by_key(|&u| e.key(u));
    let pos: std::collections::HashMap<NodeId, usize> =
        sorted.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, &u) in sorted.iter().enumerate() {
        for v in e.adjacent(u).unwrap_or_default() {
            if let Some(&j) = pos.get(v) {
                if i != j {
                    edges.insert((i.min(j), i.max(j)));
                }
            }
        }
    }
    (sorted, edges.into_iter().collect())
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Vertices labelled by their keys. With a face given, its members are
/// filled and the rest left white.
pub fn to_dot(e: &Explorer, nodes: &[NodeId], face: Option<&BTreeSet<ArcCode>>) -> String {
    let (sorted, edges) = layout(e, nodes);
    let mut out =
        String::from("graph exchange {\n  node [shape=box, style=filled, fillcolor=white];\n");
    for (i, &u) in sorted.iter().enumerate() {
        let label = key_strings(&e.key(u))
            .iter()
            .map(|k| escape(k))
            .collect::<Vec<_>>()
            .join("\\n");
        let colour = match face {
            Some(f) if e.in_face(u, f) => ", fillcolor=lightblue",
            _ => "",
        };
        let _ = writeln!(out, "  n{i} [label=\"{label}\"{colour}];");
    }
    for (i, j) in edges {
        let _ = writeln!(out, "  n{i} -- n{j};");
    }
    out.push_str("}\n");
    out
}

pub fn to_json(e: &Explorer, nodes: &[NodeId], face: Option<&BTreeSet<ArcCode>>) -> GraphJson {
    let (sorted, edges) = layout(e, nodes);
    GraphJson {
        nodes: sorted
            .iter()
            .enumerate()
            .map(|(index, &u)| NodeJson {
                index,
                key: key_strings(&e.key(u)),
                flip_path: e.flip_path(u),
                in_face: face.map(|f| e.in_face(u, f)),
            })
            .collect(),
        edges,
    }
}
