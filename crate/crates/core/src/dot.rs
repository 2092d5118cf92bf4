//! Graphviz rendering of Hasse diagrams, bottom to top.

use std::fmt::Write;

use crate::io::Labels;
use crate::poset::{NodeSet, Poset};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text with one rank per height and highlighted nodes filled.
pub fn emit_dot(p: &Poset, highlight: &NodeSet, labels: &Labels) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    let top = (0..p.len()).map(|i| p.height_ix(i)).max().unwrap_or(0);
    for h in 0..=top {
        let level: Vec<String> = (0..p.len()).filter(|&i| p.height_ix(i) == h).map(|i| quote(p.id(i).as_str())).collect();
        if !level.is_empty() {
            writeln!(out, "  {{ rank=same; {}; }}", level.join("; ")).unwrap();
        }
    }
    for id in p.ids() {
        let mut attrs = Vec::new();
        if let Some(l) = labels.get(id) {
            attrs.push(format!("label={}", quote(l)));
        }
        if highlight.contains(id) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=lightblue".to_string());
        }
        if !attrs.is_empty() {
            writeln!(out, "  {} [{}];", quote(id.as_str()), attrs.join(", ")).unwrap();
        }
    }
    for (a, b) in p.cover_ids() {
        writeln!(out, "  {} -> {};", quote(a.as_str()), quote(b.as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}
