//! Poset maps and their verifiers.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{NodeId, NodeSet, Poset};

/// A total function between the node sets of two posets. Nothing about the
/// order is assumed until one of the verifiers says so.
#[derive(Clone, PartialEq, Eq)]
pub struct PosetMap {
    source: Poset,
    target: Poset,
    image: Vec<usize>,
}

impl fmt::Debug for PosetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// The first violation a verifier found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapDefect {
    /// `lower <= upper` in the source but the images are not ordered.
    NotMonotone { lower: NodeId, upper: NodeId },
    /// `f(a) <= f(b)` in the target but `a <= b` fails in the source.
    NotReflecting { a: NodeId, b: NodeId },
    /// `upper` covers `lower` in the source but the images are not a cover.
    CoverNotPreserved { lower: NodeId, upper: NodeId },
    /// Target node outside the image.
    NotOnto { missed: NodeId },
}

impl fmt::Display for MapDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapDefect::NotMonotone { lower, upper } => {
                write!(f, "`{lower}` <= `{upper}` but their images are not ordered")
            }
            MapDefect::NotReflecting { a, b } => {
                write!(f, "image of `{a}` lies below image of `{b}` but `{a}` is not below `{b}`")
            }
            MapDefect::CoverNotPreserved { lower, upper } => {
                write!(f, "`{upper}` covers `{lower}` but the image pair is not a cover")
            }
            MapDefect::NotOnto { missed } => write!(f, "`{missed}` is not in the image"),
        }
    }
}

impl PosetMap {
    pub(crate) fn from_indices(source: Poset, target: Poset, image: Vec<usize>) -> Self {
        debug_assert_eq!(image.len(), source.len());
        debug_assert!(image.iter().all(|&y| y < target.len()));
        PosetMap { source, target, image }
    }

    /// Builds a map from `(source id, target id)` pairs. Every source node
    /// must be assigned exactly once.
    pub fn from_pairs<I, A, B>(source: &Poset, target: &Poset, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<NodeId>,
        B: Into<NodeId>,
    {
        let mut image = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            let i = source.require(a.as_str())?;
            let j = target.require(b.as_str())?;
            if image[i] != usize::MAX && image[i] != j {
                return Err(Error::MapMismatch(format!("`{a}` is assigned twice")));
            }
            image[i] = j;
        }
        if let Some(i) = image.iter().position(|&j| j == usize::MAX) {
            return Err(Error::PartialMap(source.id(i).clone()));
        }
        Ok(Self::from_indices(source.clone(), target.clone(), image))
    }

    pub fn from_fn(source: &Poset, target: &Poset, f: impl Fn(&NodeId) -> NodeId) -> Result<Self> {
        Self::from_pairs(source, target, source.ids().iter().map(|id| (id.clone(), f(id))))
    }

    pub fn identity(p: &Poset) -> Self {
        Self::from_indices(p.clone(), p.clone(), (0..p.len()).collect())
    }

    /// Sends every node to its namesake in `sup`.
    pub fn inclusion(sub: &Poset, sup: &Poset) -> Result<Self> {
        Self::from_fn(sub, sup, NodeId::clone)
    }

    pub fn constant(source: &Poset, target: &Poset, value: &str) -> Result<Self> {
        let j = target.require(value)?;
        Ok(Self::from_indices(source.clone(), target.clone(), vec![j; source.len()]))
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn apply_ix(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image_ix(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: &str) -> Result<&NodeId> {
        Ok(self.target.id(self.image[self.source.require(x)?]))
    }

    /// `(x, f(x))` for every source node, in source id order.
    pub fn pairs(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> + '_ {
        self.source.ids().iter().zip(&self.image).map(|(x, &j)| (x, self.target.id(j)))
    }

    pub fn assignment(&self) -> BTreeMap<NodeId, NodeId> {
        self.pairs().map(|(a, b)| (a.clone(), b.clone())).collect()
    }

    pub fn image_set(&self) -> NodeSet {
        self.target.to_ids(self.image.iter().copied())
    }

    /// `fibers()[y]` lists the source indices sent to target index `y`.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target.len()];
        for (i, &j) in self.image.iter().enumerate() {
            out[j].push(i);
        }
        out
    }

    pub fn preimage(&self, y: &str) -> Result<NodeSet> {
        let j = self.target.require(y)?;
        Ok(self.source.to_ids((0..self.source.len()).filter(|&i| self.image[i] == j)))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PosetMap) -> Result<PosetMap> {
        if self.target != next.source {
            return Err(Error::MapMismatch("target of the first map is not the source of the second".into()));
        }
        let image = self.image.iter().map(|&j| next.image[j]).collect();
        Ok(Self::from_indices(self.source.clone(), next.target.clone(), image))
    }

    /// Replaces the target by an equal poset (for example one that was rebuilt).
    pub fn retarget(&self, target: &Poset) -> Result<PosetMap> {
        if &self.target != target {
            return Err(Error::MapMismatch("retargeting to a different poset".into()));
        }
        Ok(Self::from_indices(self.source.clone(), target.clone(), self.image.clone()))
    }

    fn defect_pair(&self, i: usize, j: usize, make: fn(NodeId, NodeId) -> MapDefect) -> MapDefect {
        make(self.source.id(i).clone(), self.source.id(j).clone())
    }

    /// First cover pair whose images are not ordered.
    pub fn monotonicity_defect(&self) -> Option<MapDefect> {
        // Checking covers suffices: the order is their transitive closure.
        self.source
            .cover_pairs()
            .into_iter()
            .find(|&(i, j)| !self.target.leq_ix(self.image[i], self.image[j]))
            .map(|(i, j)| self.defect_pair(i, j, |lower, upper| MapDefect::NotMonotone { lower, upper }))
    }

    /// First pair whose image order is not reflected. Assumes monotone.
    pub fn reflection_defect(&self) -> Option<MapDefect> {
        let n = self.source.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.target.leq_ix(self.image[i], self.image[j]) && !self.source.leq_ix(i, j) {
                    return Some(self.defect_pair(i, j, |a, b| MapDefect::NotReflecting { a, b }));
                }
            }
        }
        None
    }

    /// First cover pair not sent to a cover.
    pub fn saturation_defect(&self) -> Option<MapDefect> {
        self.source
            .cover_pairs()
            .into_iter()
            .find(|&(i, j)| !self.target.covers_ix(self.image[i], self.image[j]))
            .map(|(i, j)| self.defect_pair(i, j, |lower, upper| MapDefect::CoverNotPreserved { lower, upper }))
    }

    pub fn surjectivity_defect(&self) -> Option<MapDefect> {
        let mut hit = vec![false; self.target.len()];
        for &j in &self.image {
            hit[j] = true;
        }
        hit.iter()
            .position(|h| !h)
            .map(|j| MapDefect::NotOnto { missed: self.target.id(j).clone() })
    }

    /// The first reason this is not an embedding, if any.
    pub fn embedding_defect(&self) -> Option<MapDefect> {
        self.monotonicity_defect().or_else(|| self.reflection_defect())
    }

    /// The first reason this is not a saturated embedding, if any.
    pub fn saturated_embedding_defect(&self) -> Option<MapDefect> {
        self.embedding_defect().or_else(|| self.saturation_defect())
    }
}

pub fn is_poset_map(f: &PosetMap) -> bool {
    f.monotonicity_defect().is_none()
}

/// Fails with `NotPosetMap` when `f` is not order preserving.
pub fn is_embedding(f: &PosetMap) -> Result<bool> {
    if let Some(d) = f.monotonicity_defect() {
        return Err(Error::NotPosetMap(d));
    }
    Ok(f.reflection_defect().is_none())
}

/// Fails with `NotEmbedding` when `f` is not an embedding.
pub fn is_saturated_embedding(f: &PosetMap) -> Result<bool> {
    if let Some(d) = f.embedding_defect() {
        return Err(Error::NotEmbedding(d));
    }
    Ok(f.saturation_defect().is_none())
}

/// Fails with `NotEmbedding` when `f` is not an embedding.
pub fn is_isomorphism(f: &PosetMap) -> Result<bool> {
    if let Some(d) = f.embedding_defect() {
        return Err(Error::NotEmbedding(d));
    }
    Ok(f.surjectivity_defect().is_none())
}

/// A pair of `ix` that is a cover in the induced subposet but not in `p`.
pub fn saturated_subset_gap(p: &Poset, ix: &[usize]) -> Option<(usize, usize)> {
    for &u in ix {
        for &v in ix {
            if u == v || !p.leq_ix(u, v) || p.covers_ix(u, v) {
                continue;
            }
            let covered_inside = !ix.iter().any(|&w| w != u && w != v && p.leq_ix(u, w) && p.leq_ix(w, v));
            if covered_inside {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn is_saturated_subset(p: &Poset, z: &NodeSet) -> Result<bool> {
    let ix = p.require_set(z)?;
    Ok(saturated_subset_gap(p, &ix).is_none())
}

type Signature = (usize, usize, usize, usize, usize, usize);

fn signature(p: &Poset, i: usize) -> Signature {
    (
        p.height_ix(i),
        p.depth_ix(i),
        p.lower_covers(i).len(),
        p.upper_covers(i).len(),
        p.down_set_size(i),
        p.up_set_size(i),
    )
}

/// Some isomorphism `p -> q`, or `None`. The search order is fixed, so the
/// answer is the same on every call.
pub fn find_isomorphism(p: &Poset, q: &Poset) -> Option<PosetMap> {
    if p.len() != q.len() || p.cover_count() != q.cover_count() {
        return None;
    }
    let sp: Vec<Signature> = (0..p.len()).map(|i| signature(p, i)).collect();
    let sq: Vec<Signature> = (0..q.len()).map(|i| signature(q, i)).collect();
    let (mut a, mut b) = (sp.clone(), sq.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }

    let order = p.bfs_order();
    let mut image = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    let mut search = Search { p, q, sp: &sp, sq: &sq, order: &order, image: &mut image, used: &mut used };
    if search.extend(0) {
        Some(PosetMap::from_indices(p.clone(), q.clone(), image))
    } else {
        None
    }
}

struct Search<'a> {
    p: &'a Poset,
    q: &'a Poset,
    sp: &'a [Signature],
    sq: &'a [Signature],
    order: &'a [usize],
    image: &'a mut Vec<usize>,
    used: &'a mut Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        let Some(&x) = self.order.get(depth) else {
            return true;
        };
        for y in 0..self.q.len() {
            if self.used[y] || self.sp[x] != self.sq[y] || !self.consistent(x, y, depth) {
                continue;
            }
            self.image[x] = y;
            self.used[y] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[y] = false;
        }
        self.image[x] = usize::MAX;
        false
    }

    fn consistent(&self, x: usize, y: usize, depth: usize) -> bool {
        self.order[..depth].iter().all(|&w| {
            let v = self.image[w];
            self.p.leq_ix(w, x) == self.q.leq_ix(v, y) && self.p.leq_ix(x, w) == self.q.leq_ix(y, v)
        })
    }
}
