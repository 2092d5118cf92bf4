//! Quotients of posets along complete subsets and collections of them.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::morphism::{MapDefect, PosetMap};
use crate::poset::{NodeId, NodeSet, Poset};

/// A surjective poset map `g: X -> Y` that glues `X` along `collection`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingWitness {
    pub map: PosetMap,
    pub collection: Vec<NodeSet>,
}

impl GluingWitness {
    pub fn identity(x: &Poset) -> Self {
        GluingWitness { map: PosetMap::identity(x), collection: Vec::new() }
    }

    pub fn source(&self) -> &Poset {
        self.map.source()
    }

    pub fn target(&self) -> &Poset {
        self.map.target()
    }
}

/// Why a claimed gluing is not one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingDefect {
    NotPosetMap(MapDefect),
    NotOnto(NodeId),
    UnknownNode(NodeId),
    /// Two members of one collection set have different images.
    NotConstant { a: NodeId, b: NodeId },
    /// Two nodes share an image but no collection set contains both.
    Unexplained { a: NodeId, b: NodeId },
    /// The collection cannot be glued at all.
    NotGluable(String),
    /// The comparison map from the canonical quotient is not an isomorphism.
    NotCanonical(MapDefect),
}

impl fmt::Display for GluingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingDefect::NotPosetMap(d) => write!(f, "not a poset map: {d}"),
            GluingDefect::NotOnto(y) => write!(f, "`{y}` is not in the image"),
            GluingDefect::UnknownNode(y) => write!(f, "collection names unknown node `{y}`"),
            GluingDefect::NotConstant { a, b } => {
                write!(f, "`{a}` and `{b}` share a collection set but have different images")
            }
            GluingDefect::Unexplained { a, b } => {
                write!(f, "`{a}` and `{b}` are identified but share no collection set")
            }
            GluingDefect::NotGluable(why) => write!(f, "collection cannot be glued: {why}"),
            GluingDefect::NotCanonical(d) => write!(f, "target differs from the canonical quotient: {d}"),
        }
    }
}

fn class_name(x: &Poset, members: &[usize]) -> NodeId {
    let least = x.id(members[0]).as_str();
    if members.len() == 1 {
        return x.id(members[0]).clone();
    }
    let mut name = format!("[{least}]");
    while x.index(&name).is_some_and(|i| members.binary_search(&i).is_err()) {
        name = format!("[{name}]");
    }
    NodeId::from(name)
}

/// Collapses `members` (sorted, complete) to one node named `name`.
fn collapse(x: &Poset, members: &[usize], name: NodeId) -> Result<PosetMap> {
    let keep: Vec<usize> = (0..x.len()).filter(|i| members.binary_search(i).is_err()).collect();
    let mut ids: Vec<NodeId> = keep.iter().map(|&i| x.id(i).clone()).collect();
    let class = ids.len();
    ids.push(name);
    let mut slot = vec![class; x.len()];
    for (k, &i) in keep.iter().enumerate() {
        slot[i] = k;
    }
    // The quotient order is the closure of the image of the cover relation.
    let edges: Vec<(usize, usize)> = x.cover_pairs().into_iter().map(|(i, j)| (slot[i], slot[j])).collect();
    let y = Poset::from_unsorted(ids.clone(), &edges)?;
    let image = slot.iter().map(|&s| y.index(ids[s].as_str()).expect("present")).collect();
    Ok(PosetMap::from_indices(x.clone(), y, image))
}

fn check_complete(x: &Poset, members: &[usize]) -> Result<()> {
    match x.completeness_gap(members) {
        None => Ok(()),
        Some(b) => Err(Error::NotComplete {
            set: members.iter().map(|&i| x.id(i).clone()).collect(),
            between: x.id(b).clone(),
        }),
    }
}

/// Glues `X` along the complete subset `S`. The glued node is named after the
/// least member of `S`, in brackets unless `S` is a singleton.
pub fn glue_along_complete(x: &Poset, s: &NodeSet) -> Result<GluingWitness> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let members = x.require_set(s)?;
    check_complete(x, &members)?;
    let map = collapse(x, &members, class_name(x, &members))?;
    Ok(GluingWitness { map, collection: vec![s.clone()] })
}

/// Merges overlapping members, drops members with fewer than two nodes and
/// sorts by least member.
pub fn normalize_collection(x: &Poset, collection: &[NodeSet]) -> Result<Vec<Vec<usize>>> {
    let mut parent: Vec<usize> = (0..x.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut touched = vec![false; x.len()];
    for c in collection {
        let ix = x.require_set(c)?;
        for &i in &ix {
            touched[i] = true;
        }
        for w in ix.windows(2) {
            let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (0..x.len()).filter(|&i| touched[i]) {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    // Roots are group minima, so the map is already ordered by least member.
    Ok(groups.into_values().filter(|g| g.len() > 1).collect())
}

/// Glues `X` along every member of `collection`, one member at a time.
pub fn glue_along_collection(x: &Poset, collection: &[NodeSet]) -> Result<GluingWitness> {
    let groups = normalize_collection(x, collection)?;
    for g in &groups {
        check_complete(x, g)?;
    }
    let mut map = PosetMap::identity(x);
    for g in &groups {
        let cur = map.target().clone();
        let mut image: Vec<usize> = g.iter().map(|&i| map.apply_ix(i)).collect();
        image.sort_unstable();
        image.dedup();
        check_complete(&cur, &image)?;
        let step = collapse(&cur, &image, class_name(&cur, &image))?;
        map = map.then(&step)?;
    }
    let collection = groups.iter().map(|g| x.to_ids(g.iter().copied())).collect();
    Ok(GluingWitness { map, collection })
}

/// Glues each block into a node with the given name. Blocks must be disjoint.
pub fn glue_named(x: &Poset, blocks: &[(NodeSet, NodeId)]) -> Result<GluingWitness> {
    let collection: Vec<NodeSet> = blocks.iter().map(|(m, _)| m.clone()).collect();
    let mut seen = NodeSet::new();
    for m in &collection {
        if m.is_empty() {
            return Err(Error::EmptySet);
        }
        for id in m {
            if !seen.insert(id.clone()) {
                return Err(Error::OverlappingCollection(id.clone()));
            }
        }
    }
    let w = glue_along_collection(x, &collection)?;
    let mut rename: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for (m, into) in blocks {
        let first = m.iter().next().expect("nonempty");
        rename.insert(w.map.apply(first.as_str())?.clone(), into.clone());
    }
    let y = w.target().relabel(|id| rename.get(id).cloned().unwrap_or_else(|| id.clone()))?;
    let map = PosetMap::from_fn(x, &y, |id| {
        let g = w.map.apply(id.as_str()).expect("source node");
        rename.get(g).cloned().unwrap_or_else(|| g.clone())
    })?;
    Ok(GluingWitness { map, collection: w.collection })
}

pub fn is_height_zero_gluing(w: &GluingWitness) -> bool {
    first_non_minimal(w).is_none()
}

fn first_non_minimal(w: &GluingWitness) -> Option<NodeId> {
    let x = w.source();
    w.collection
        .iter()
        .flatten()
        .find(|id| x.index(id.as_str()).is_none_or(|i| !x.is_min_ix(i)))
        .cloned()
}

/// The unique `phi` with `phi ∘ g = h`.
pub fn induced_map(w: &GluingWitness, h: &PosetMap) -> Result<PosetMap> {
    if h.source() != w.source() {
        return Err(Error::MapMismatch("the map must start at the glued poset's source".into()));
    }
    if let Some(d) = h.monotonicity_defect() {
        return Err(Error::NotPosetMap(d));
    }
    let x = w.source();
    let mut image = vec![usize::MAX; w.target().len()];
    let mut rep = vec![usize::MAX; w.target().len()];
    for i in 0..x.len() {
        let y = w.map.apply_ix(i);
        if image[y] == usize::MAX {
            image[y] = h.apply_ix(i);
            rep[y] = i;
        } else if image[y] != h.apply_ix(i) {
            return Err(Error::NotCompatible { a: x.id(rep[y]).clone(), b: x.id(i).clone() });
        }
    }
    if let Some(y) = image.iter().position(|&v| v == usize::MAX) {
        return Err(Error::PartialMap(w.target().id(y).clone()));
    }
    Ok(PosetMap::from_indices(w.target().clone(), h.target().clone(), image))
}

/// Checks that `g` glues its source along `collection`: the defining
/// conditions directly, then agreement with the canonical quotient.
pub fn verify_gluing(g: &PosetMap, collection: &[NodeSet]) -> std::result::Result<(), GluingDefect> {
    if let Some(d) = g.monotonicity_defect() {
        return Err(GluingDefect::NotPosetMap(d));
    }
    if let Some(MapDefect::NotOnto { missed }) = g.surjectivity_defect() {
        return Err(GluingDefect::NotOnto(missed));
    }
    let x = g.source();
    let mut sets = Vec::new();
    for c in collection {
        let mut ix = Vec::new();
        for id in c {
            ix.push(x.index(id.as_str()).ok_or_else(|| GluingDefect::UnknownNode(id.clone()))?);
        }
        ix.sort_unstable();
        if let Some(&b) = ix.iter().find(|&&i| g.apply_ix(i) != g.apply_ix(ix[0])) {
            return Err(GluingDefect::NotConstant { a: x.id(ix[0]).clone(), b: x.id(b).clone() });
        }
        sets.push(ix);
    }
    for fiber in g.fibers() {
        for (k, &a) in fiber.iter().enumerate() {
            for &b in &fiber[k + 1..] {
                let explained = sets.iter().any(|s| s.binary_search(&a).is_ok() && s.binary_search(&b).is_ok());
                if !explained {
                    return Err(GluingDefect::Unexplained { a: x.id(a).clone(), b: x.id(b).clone() });
                }
            }
        }
    }
    let canonical = glue_along_collection(x, collection).map_err(|e| GluingDefect::NotGluable(e.to_string()))?;
    let phi = induced_map(&canonical, g).map_err(|e| GluingDefect::NotGluable(e.to_string()))?;
    if let Some(d) = phi.embedding_defect().or_else(|| phi.surjectivity_defect()) {
        return Err(GluingDefect::NotCanonical(d));
    }
    Ok(())
}

pub fn is_gluing(g: &PosetMap, collection: &[NodeSet]) -> bool {
    verify_gluing(g, collection).is_ok()
}

/// A sequence in which each step goes up or stays inside one collection set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSequence(pub Vec<NodeId>);

impl CSequence {
    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn is_valid(&self, x: &Poset, collection: &[NodeSet]) -> bool {
        if self.0.is_empty() || self.0.iter().any(|id| !x.contains(id.as_str())) {
            return false;
        }
        self.0.windows(2).all(|w| {
            x.leq(w[0].as_str(), w[1].as_str()).unwrap_or(false)
                || collection.iter().any(|c| c.contains(&w[0]) && c.contains(&w[1]))
        })
    }
}

fn check_disjoint(collection: &[NodeSet]) -> Result<()> {
    let mut seen = NodeSet::new();
    for id in collection.iter().flatten() {
        if !seen.insert(id.clone()) {
            return Err(Error::OverlappingCollection(id.clone()));
        }
    }
    Ok(())
}

/// A shortest sequence from `a` to `b`, if one exists.
pub fn find_c_sequence(x: &Poset, collection: &[NodeSet], a: &str, b: &str) -> Result<Option<CSequence>> {
    check_disjoint(collection)?;
    let (s, t) = (x.require(a)?, x.require(b)?);
    let mut member_of = vec![usize::MAX; x.len()];
    let mut sets = Vec::new();
    for (k, c) in collection.iter().enumerate() {
        let ix = x.require_set(c)?;
        for &i in &ix {
            member_of[i] = k;
        }
        sets.push(ix);
    }
    let mut prev = vec![usize::MAX; x.len()];
    let mut seen = vec![false; x.len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut path = vec![t];
            while *path.last().unwrap() != s {
                path.push(prev[*path.last().unwrap()]);
            }
            path.reverse();
            return Ok(Some(CSequence(path.into_iter().map(|i| x.id(i).clone()).collect())));
        }
        let mut next = x.up_set_ix(u);
        if member_of[u] != usize::MAX {
            next.extend(&sets[member_of[u]]);
        }
        next.sort_unstable();
        for v in next {
            if !seen[v] {
                seen[v] = true;
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// The least cover pair of the source lying over the cover `gx < gy`.
pub fn lift_cover(w: &GluingWitness, gx: &str, gy: &str) -> Result<(NodeId, NodeId)> {
    let x = w.source();
    for c in &w.collection {
        let ix = x.require_set(c)?;
        for &a in &ix {
            if let Some(&b) = ix.iter().find(|&&b| x.lt_ix(a, b)) {
                return Err(Error::NotAntichainCollection { lower: x.id(a).clone(), upper: x.id(b).clone() });
            }
        }
    }
    let y = w.target();
    let (i, j) = (y.require(gx)?, y.require(gy)?);
    if !y.covers_ix(i, j) {
        return Err(Error::NotACover { lower: gx.into(), upper: gy.into() });
    }
    x.cover_pairs()
        .into_iter()
        .find(|&(a, b)| w.map.apply_ix(a) == i && w.map.apply_ix(b) == j)
        .map(|(a, b)| (x.id(a).clone(), x.id(b).clone()))
        .ok_or_else(|| Error::Invariant(format!("cover `{gx}` < `{gy}` has no lift")))
}

/// Dimensions and minima on both sides of a height zero gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub source_dim: usize,
    pub target_dim: usize,
    pub source_min: NodeSet,
    pub min_preimage: NodeSet,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.source_dim == self.target_dim && self.source_min == self.min_preimage
    }
}

/// Fails with `NotHeightZero` on other gluings, and with `Invariant` if
/// dimension or minima are not preserved.
pub fn check_dim_min_preservation(w: &GluingWitness) -> Result<PreservationReport> {
    if let Some(id) = first_non_minimal(w) {
        return Err(Error::NotHeightZero(id));
    }
    let (x, y) = (w.source(), w.target());
    let min_y: Vec<bool> = (0..y.len()).map(|j| y.is_min_ix(j)).collect();
    let report = PreservationReport {
        source_dim: x.dim()?,
        target_dim: y.dim()?,
        source_min: x.min_nodes()?,
        min_preimage: x.to_ids((0..x.len()).filter(|&i| min_y[w.map.apply_ix(i)])),
    };
    if !report.holds() {
        return Err(Error::Invariant(format!("height zero gluing changed dimension or minima: {report:?}")));
    }
    Ok(report)
}
