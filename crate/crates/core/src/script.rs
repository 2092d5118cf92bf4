//! Forward construction scripts: grow a poset from a point by elevations and
//! height zero gluings, carrying a saturated embedding of the input along.

use std::fmt;

use crate::error::{Error, Result};
use crate::elevation::elevate_with_ids;
use crate::gext::reduce_dimension;
use crate::gluing::{check_dim_min_preservation, glue_named, is_height_zero_gluing, verify_gluing};
use crate::morphism::{saturated_subset_gap, MapDefect, PosetMap};
use crate::poset::{NodeId, NodeSet, Poset};

/// Extra structure added around a poset before decomposing it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WrapOptions {
    /// Add a fresh node above everything.
    pub single_max: bool,
    /// Add a fresh node below everything.
    pub single_min: bool,
    /// Every original node gets at least this height.
    pub min_height: usize,
    /// The wrapped poset has at least this dimension.
    pub min_dim: usize,
}

/// Embeds `x` as a saturated subset of a larger poset shaped by `opts`.
/// Returns the larger poset and the inclusion.
pub fn wrap(x: &Poset, opts: &WrapOptions) -> Result<(Poset, PosetMap)> {
    if x.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let mut taken = NodeSet::new();
    let fresh = |base: &str, taken: &mut NodeSet| {
        let id = x.fresh_id(base, taken);
        taken.insert(id.clone());
        id
    };
    let mut ids: Vec<NodeId> = x.ids().to_vec();
    let mut edges: Vec<(NodeId, NodeId)> = x.cover_ids();
    if opts.single_max {
        let top = fresh("top", &mut taken);
        edges.extend(x.max_nodes()?.into_iter().map(|m| (m, top.clone())));
        ids.push(top);
    }
    let below = opts.min_height.max(usize::from(opts.single_min));
    if below > 0 {
        let chain: Vec<NodeId> = (0..below).map(|i| fresh(&format!("bot{i}"), &mut taken)).collect();
        edges.extend(chain.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        let last = chain.last().unwrap().clone();
        edges.extend(x.min_nodes()?.into_iter().map(|m| (last.clone(), m)));
        ids.extend(chain);
    }
    let mut k = Poset::build(ids.clone(), edges.clone())?;
    let dim = k.dim()?;
    if dim < opts.min_dim {
        // Lengthen a longest chain at its bottom.
        let m = (0..k.len()).find(|&i| k.is_min_ix(i) && k.depth_ix(i) == dim).expect("longest chain");
        let anchor = k.id(m).clone();
        let pad: Vec<NodeId> = (0..opts.min_dim - dim).map(|i| fresh(&format!("pad{i}"), &mut taken)).collect();
        edges.extend(pad.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        edges.push((pad.last().unwrap().clone(), anchor));
        ids.extend(pad);
        k = Poset::build(ids, edges)?;
    }
    let inclusion = PosetMap::inclusion(x, &k)?;
    Ok((k, inclusion))
}

/// One block of a height zero gluing step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueBlock {
    pub into: NodeId,
    pub members: NodeSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Grow one fresh minimal node per id under the minimal node `target`.
    Elevate { target: NodeId, fresh_ids: Vec<NodeId> },
    /// Glue each block of minimal nodes into one node.
    Glue { partition: Vec<GlueBlock> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub kind: StepKind,
    pub after: Poset,
}

/// A recorded construction from a point, with the embedding of `source`
/// into the final poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionScript {
    pub source: Poset,
    pub start: Poset,
    pub steps: Vec<ScriptStep>,
    pub final_poset: Poset,
    /// `source -> final_poset`.
    pub tracked: PosetMap,
}

/// What a successful replay established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub steps: usize,
    pub elevations: usize,
    pub gluings: usize,
    pub final_nodes: usize,
    pub final_dim: usize,
    pub source_nodes: usize,
}

impl fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps: {} ({} elevations, {} gluings)", self.steps, self.elevations, self.gluings)?;
        writeln!(f, "final poset: {} nodes, dimension {}", self.final_nodes, self.final_dim)?;
        writeln!(f, "tracked embedding: {} nodes, saturated embedding: ok", self.source_nodes)?;
        write!(f, "image is a saturated subset: ok")
    }
}

fn invalid(step: usize, reason: impl fmt::Display) -> Error {
    Error::InvalidStep { step, reason: reason.to_string() }
}

/// Executes one step on `cur` and checks everything it promises.
/// `step` is the 1-based step number used in errors.
pub fn apply_step(cur: &Poset, kind: &StepKind, step: usize) -> Result<Poset> {
    match kind {
        StepKind::Elevate { target, fresh_ids } => {
            let w = elevate_with_ids(cur, target.as_str(), fresh_ids).map_err(|e| invalid(step, e))?;
            w.verify().map_err(|e| invalid(step, e))?;
            let z = &w.z_poset;
            let inclusion = PosetMap::inclusion(cur, z).map_err(|e| invalid(step, e))?;
            if w.elevation != inclusion {
                return Err(invalid(step, "elevation map is not the inclusion"));
            }
            if let Some(d) = inclusion.saturated_embedding_defect() {
                return Err(invalid(step, format!("inclusion is not a saturated embedding: {d}")));
            }
            let mut expected = cur.min_nodes()?;
            expected.remove(target);
            expected.extend(fresh_ids.iter().cloned());
            if z.min_nodes()? != expected {
                return Err(invalid(step, "minimal nodes are not the old ones with the target replaced"));
            }
            let t = cur.require(target.as_str())?;
            if z.dim()? != cur.dim()?.max(cur.depth_ix(t) + 1) {
                return Err(invalid(step, "dimension after elevating does not match the target's depth"));
            }
            Ok(z.clone())
        }
        StepKind::Glue { partition } => {
            for b in partition {
                for m in &b.members {
                    let i = cur.require(m.as_str()).map_err(|e| invalid(step, e))?;
                    if !cur.is_min_ix(i) {
                        return Err(invalid(step, Error::NotHeightZero(m.clone())));
                    }
                }
            }
            let blocks: Vec<(NodeSet, NodeId)> = partition.iter().map(|b| (b.members.clone(), b.into.clone())).collect();
            let w = glue_named(cur, &blocks).map_err(|e| invalid(step, e))?;
            let collection: Vec<NodeSet> = partition.iter().map(|b| b.members.clone()).collect();
            verify_gluing(&w.map, &collection).map_err(|d| invalid(step, d))?;
            if !is_height_zero_gluing(&w) {
                return Err(invalid(step, "gluing is not height zero"));
            }
            check_dim_min_preservation(&w).map_err(|e| invalid(step, e))?;
            Ok(w.target().clone())
        }
    }
}

fn describe_difference(expected: &Poset, got: &Poset) -> String {
    let e: NodeSet = expected.ids().iter().cloned().collect();
    let g: NodeSet = got.ids().iter().cloned().collect();
    if let Some(n) = e.difference(&g).next() {
        return format!("node `{n}` is recorded but not produced");
    }
    if let Some(n) = g.difference(&e).next() {
        return format!("node `{n}` is produced but not recorded");
    }
    let ec = expected.cover_ids();
    let gc = got.cover_ids();
    if let Some((a, b)) = ec.iter().find(|c| !gc.contains(c)) {
        return format!("cover `{a}` < `{b}` is recorded but not produced");
    }
    if let Some((a, b)) = gc.iter().find(|c| !ec.contains(c)) {
        return format!("cover `{a}` < `{b}` is produced but not recorded");
    }
    "posets differ".into()
}

impl ConstructionScript {
    /// Runs `kinds` from `start` and records every intermediate poset.
    pub fn record(source: &Poset, start: &Poset, kinds: Vec<StepKind>, tracked: Vec<(NodeId, NodeId)>) -> Result<Self> {
        let mut cur = start.clone();
        let mut steps = Vec::with_capacity(kinds.len());
        for (k, kind) in kinds.into_iter().enumerate() {
            cur = apply_step(&cur, &kind, k + 1)?;
            steps.push(ScriptStep { kind, after: cur.clone() });
        }
        let tracked = PosetMap::from_pairs(source, &cur, tracked)?;
        Ok(ConstructionScript { source: source.clone(), start: start.clone(), steps, final_poset: cur, tracked })
    }

    /// Re-executes every step from the start, checks each against its record,
    /// and certifies the tracked embedding on the replayed result.
    pub fn replay(&self) -> Result<ReplayReport> {
        if self.start.len() != 1 {
            return Err(invalid(0, "start poset is not a single node"));
        }
        let mut cur = self.start.clone();
        let (mut elevations, mut gluings) = (0, 0);
        for (k, step) in self.steps.iter().enumerate() {
            let next = apply_step(&cur, &step.kind, k + 1)?;
            if next != step.after {
                return Err(Error::StepMismatch { step: k + 1, detail: describe_difference(&step.after, &next) });
            }
            match step.kind {
                StepKind::Elevate { .. } => elevations += 1,
                StepKind::Glue { .. } => gluings += 1,
            }
            cur = next;
        }
        if cur != self.final_poset {
            return Err(Error::StepMismatch {
                step: self.steps.len(),
                detail: format!("final poset: {}", describe_difference(&self.final_poset, &cur)),
            });
        }
        let tracked = PosetMap::from_pairs(&self.source, &cur, self.tracked.pairs())
            .map_err(|e| invalid(self.steps.len() + 1, format!("tracked embedding: {e}")))?;
        if let Some(d) = tracked.saturated_embedding_defect() {
            return Err(Error::BrokenEmbedding(d));
        }
        if let Some((u, v)) = saturated_subset_gap(&cur, tracked.image_ix()) {
            let pre = |y: usize| self.source.id(tracked.image_ix().iter().position(|&j| j == y).unwrap()).clone();
            return Err(Error::BrokenEmbedding(MapDefect::CoverNotPreserved { lower: pre(u), upper: pre(v) }));
        }
        Ok(ReplayReport {
            steps: self.steps.len(),
            elevations,
            gluings,
            final_nodes: cur.len(),
            final_dim: cur.dim()?,
            source_nodes: self.source.len(),
        })
    }
}

/// Wraps `x`, reduces the wrapped poset to a point by G-extensions, and
/// records the reverse as a forward script. A fresh top is added whenever
/// `x` has more than one maximal node, so that the reduction ends at a point.
pub fn decompose_to_point(x: &Poset, opts: &WrapOptions) -> Result<ConstructionScript> {
    let mut opts = *opts;
    if x.max_ix().len() > 1 {
        opts.single_max = true;
    }
    let (k, inclusion) = wrap(x, &opts)?;

    let mut backward = Vec::new();
    let mut cur = k.clone();
    while cur.dim()? > 0 {
        let steps = reduce_dimension(&cur)?;
        cur = steps.last().expect("at least one step").f2().clone();
        backward.extend(steps);
    }
    if cur.len() != 1 {
        return Err(Error::Invariant(format!("reduction ended at {} nodes instead of one", cur.len())));
    }

    let mut taken: NodeSet = k.ids().iter().cloned().collect();
    for g in &backward {
        taken.extend(g.z().ids().iter().cloned());
    }
    let mut kinds = Vec::new();
    for g in backward.iter().rev() {
        let z = g.z();
        let h = &g.gluing.map;
        let elevate_no = kinds.len() + 1;
        let mut i = 0;
        let mut rename = std::collections::BTreeMap::new();
        let grown = g.elevation.grown();
        for id in &grown {
            // Copies that get glued away later are temporaries; rename them.
            if h.preimage(h.apply(id.as_str())?.as_str())?.len() > 1 {
                let fresh = k.fresh_id(&format!("q{elevate_no}.{i}"), &taken);
                i += 1;
                taken.insert(fresh.clone());
                rename.insert(id.clone(), fresh);
            }
        }
        let name = |id: &NodeId| rename.get(id).cloned().unwrap_or_else(|| id.clone());
        kinds.push(StepKind::Elevate { target: g.pivot.clone(), fresh_ids: grown.iter().map(name).collect() });
        let partition: Vec<GlueBlock> = h
            .fibers()
            .into_iter()
            .enumerate()
            .filter(|(_, f)| f.len() > 1)
            .map(|(y, f)| GlueBlock { into: h.target().id(y).clone(), members: f.iter().map(|&v| name(z.id(v))).collect() })
            .collect();
        if !partition.is_empty() {
            kinds.push(StepKind::Glue { partition });
        }
    }
    let tracked = inclusion.pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
    let script = ConstructionScript::record(x, &cur, kinds, tracked)?;
    if script.final_poset != k {
        return Err(Error::Invariant("forward script does not rebuild the wrapped poset".into()));
    }
    Ok(script)
}
