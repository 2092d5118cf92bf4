//! JSON documents for posets, maps and construction scripts.
//!
//! Output is canonical: nodes and covers sorted, keys in a fixed order, and
//! arrays of scalars kept on one line so documents diff cleanly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::SplitResult;
use crate::elevation::ElevationWitness;
use crate::error::{Error, Result};
use crate::gluing::GluingWitness;
use crate::morphism::PosetMap;
use crate::poset::{NodeId, NodeSet, Poset};
use crate::script::{ConstructionScript, GlueBlock, ScriptStep, StepKind};

pub const FORMAT_VERSION: u32 = 1;

pub type Labels = BTreeMap<NodeId, String>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetDoc {
    #[serde(default = "default_version")]
    version: u32,
    nodes: Vec<NodeId>,
    covers: Vec<(NodeId, NodeId)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: Labels,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarePoset {
    nodes: Vec<NodeId>,
    covers: Vec<(NodeId, NodeId)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    version: u32,
    map: BTreeMap<NodeId, NodeId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScriptDoc {
    version: u32,
    source: BarePoset,
    start: BarePoset,
    steps: Vec<StepDoc>,
    #[serde(rename = "final")]
    final_poset: BarePoset,
    tracked_embedding: BTreeMap<NodeId, NodeId>,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    #[serde(flatten)]
    kind: KindDoc,
    after: BarePoset,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Elevate { target: NodeId, count: usize, fresh_ids: Vec<NodeId> },
    Glue { partition: Vec<BlockDoc> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    into: NodeId,
    members: Vec<NodeId>,
}

#[derive(Serialize)]
struct GluingDoc {
    version: u32,
    source: BarePoset,
    target: BarePoset,
    map: BTreeMap<NodeId, NodeId>,
    collection: Vec<Vec<NodeId>>,
}

#[derive(Serialize)]
struct SplitDoc {
    version: u32,
    d: BarePoset,
    f: BarePoset,
    t: BTreeMap<NodeId, NodeId>,
    f_map: BTreeMap<NodeId, NodeId>,
}

#[derive(Serialize)]
struct ElevationDoc {
    version: u32,
    pivot: NodeId,
    z: BarePoset,
    base: BarePoset,
    retraction: BTreeMap<NodeId, NodeId>,
    elevation: BTreeMap<NodeId, NodeId>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Field { field: "version".into(), message: format!("unsupported version {v}") });
    }
    Ok(())
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn bare(p: &Poset) -> BarePoset {
    BarePoset { nodes: p.ids().to_vec(), covers: p.cover_ids() }
}

fn unbare(b: BarePoset) -> Result<Poset> {
    Poset::build(b.nodes, b.covers)
}

/// Parses a poset document, keeping any display labels.
pub fn parse_labeled_poset(text: &str) -> Result<(Poset, Labels)> {
    let doc: PosetDoc = parse_json(text)?;
    check_version(doc.version)?;
    let p = Poset::build(doc.nodes, doc.covers)?;
    if let Some(id) = doc.labels.keys().find(|id| !p.contains(id.as_str())) {
        return Err(Error::Field { field: "labels".into(), message: format!("unknown node `{id}`") });
    }
    Ok((p, doc.labels))
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    parse_labeled_poset(text).map(|(p, _)| p)
}

pub fn emit_labeled_poset(p: &Poset, labels: &Labels) -> String {
    let doc = PosetDoc { version: FORMAT_VERSION, nodes: p.ids().to_vec(), covers: p.cover_ids(), labels: labels.clone() };
    to_text(&doc)
}

pub fn emit_poset(p: &Poset) -> String {
    emit_labeled_poset(p, &Labels::new())
}

/// Parses a map document between two given posets.
pub fn parse_map(text: &str, source: &Poset, target: &Poset) -> Result<PosetMap> {
    let doc: MapDoc = parse_json(text)?;
    check_version(doc.version)?;
    PosetMap::from_pairs(source, target, doc.map)
}

pub fn emit_map(f: &PosetMap) -> String {
    to_text(&MapDoc { version: FORMAT_VERSION, map: f.assignment() })
}

pub fn parse_script(text: &str) -> Result<ConstructionScript> {
    let doc: ScriptDoc = parse_json(text)?;
    check_version(doc.version)?;
    let source = unbare(doc.source)?;
    let start = unbare(doc.start)?;
    let mut steps = Vec::with_capacity(doc.steps.len());
    for (k, s) in doc.steps.into_iter().enumerate() {
        let kind = match s.kind {
            KindDoc::Elevate { target, count, fresh_ids } => {
                if count != fresh_ids.len() {
                    return Err(Error::Field {
                        field: format!("steps[{k}].elevate.count"),
                        message: format!("count {count} but {} fresh ids", fresh_ids.len()),
                    });
                }
                StepKind::Elevate { target, fresh_ids }
            }
            KindDoc::Glue { partition } => StepKind::Glue {
                partition: partition
                    .into_iter()
                    .map(|b| GlueBlock { into: b.into, members: b.members.into_iter().collect::<NodeSet>() })
                    .collect(),
            },
        };
        steps.push(ScriptStep { kind, after: unbare(s.after)? });
    }
    let final_poset = unbare(doc.final_poset)?;
    let tracked = PosetMap::from_pairs(&source, &final_poset, doc.tracked_embedding)?;
    Ok(ConstructionScript { source, start, steps, final_poset, tracked })
}

pub fn emit_script(s: &ConstructionScript) -> String {
    let steps = s
        .steps
        .iter()
        .map(|step| StepDoc {
            kind: match &step.kind {
                StepKind::Elevate { target, fresh_ids } => KindDoc::Elevate {
                    target: target.clone(),
                    count: fresh_ids.len(),
                    fresh_ids: fresh_ids.clone(),
                },
                StepKind::Glue { partition } => KindDoc::Glue {
                    partition: partition
                        .iter()
                        .map(|b| BlockDoc { into: b.into.clone(), members: b.members.iter().cloned().collect() })
                        .collect(),
                },
            },
            after: bare(&step.after),
        })
        .collect();
    let doc = ScriptDoc {
        version: FORMAT_VERSION,
        source: bare(&s.source),
        start: bare(&s.start),
        steps,
        final_poset: bare(&s.final_poset),
        tracked_embedding: s.tracked.assignment(),
    };
    to_text(&doc)
}

/// The glued poset together with the gluing map and collection.
pub fn emit_gluing(w: &GluingWitness) -> String {
    to_text(&GluingDoc {
        version: FORMAT_VERSION,
        source: bare(w.source()),
        target: bare(w.target()),
        map: w.map.assignment(),
        collection: w.collection.iter().map(|c| c.iter().cloned().collect()).collect(),
    })
}

pub fn emit_split(r: &SplitResult) -> String {
    to_text(&SplitDoc {
        version: FORMAT_VERSION,
        d: bare(r.t.source()),
        f: bare(&r.f),
        t: r.t.assignment(),
        f_map: r.f_map.assignment(),
    })
}

pub fn emit_elevation(w: &ElevationWitness) -> String {
    to_text(&ElevationDoc {
        version: FORMAT_VERSION,
        pivot: w.pivot.clone(),
        z: bare(&w.z_poset),
        base: bare(&w.base),
        retraction: w.retraction.assignment(),
        elevation: w.elevation.assignment(),
    })
}

/// Serializes any value in the canonical layout.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
