//! Finite posets stored as Hasse diagrams.
//!
//! A [`Poset`] is immutable once built. Node ids are kept sorted, so a node's
//! index doubles as its rank in lexicographic id order, and every list the
//! type hands out is deterministic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a node, unique within one poset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

impl From<&String> for NodeId {
    fn from(s: &String) -> Self {
        NodeId(s.clone())
    }
}

impl From<&NodeId> for NodeId {
    fn from(s: &NodeId) -> Self {
        s.clone()
    }
}

impl std::borrow::Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

pub type NodeSet = BTreeSet<NodeId>;

/// Collects anything id-like into a [`NodeSet`].
pub fn node_set<I>(ids: I) -> NodeSet
where
    I: IntoIterator,
    I::Item: Into<NodeId>,
{
    ids.into_iter().map(Into::into).collect()
}

/// A saturated chain: consecutive nodes are cover pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(Vec<NodeId>);

impl Chain {
    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    /// Number of cover steps.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.0
    }
}

/// Dense bit rows used for the reachability closure.
#[derive(Clone)]
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitRows { words, bits: vec![0; rows * words] }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] |= v;
        }
    }

    fn ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    fn count(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Inner {
    ids: Vec<NodeId>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    /// Row `i` holds every `j` with `i <= j`.
    up: BitRows,
    /// Row `j` holds every `i` with `i <= j`.
    down: BitRows,
    height: Vec<usize>,
    depth: Vec<usize>,
}

/// A finite partially ordered set, represented by its cover relation.
#[derive(Clone)]
pub struct Poset {
    inner: Arc<Inner>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ids == other.inner.ids && self.inner.upper == other.inner.upper)
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("nodes", &self.inner.ids)
            .field("covers", &self.cover_ids())
            .finish()
    }
}

impl Poset {
    /// Builds a poset from nodes and any relation whose reflexive-transitive
    /// closure is the intended order. The stored covers are the transitive
    /// reduction. Reflexive pairs are ignored and duplicate ids collapse.
    pub fn build<N, R, A, B>(nodes: N, relation: R) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<NodeId>,
        R: IntoIterator<Item = (A, B)>,
        A: Into<NodeId>,
        B: Into<NodeId>,
    {
        let ids: Vec<NodeId> = node_set(nodes).into_iter().collect();
        let find = |id: &NodeId| ids.binary_search(id).map_err(|_| Error::DanglingNode(id.clone()));
        let mut edges = Vec::new();
        for (a, b) in relation {
            let (a, b) = (a.into(), b.into());
            edges.push((find(&a)?, find(&b)?));
        }
        Self::from_indexed(ids, &edges)
    }

    pub fn empty() -> Self {
        Self::from_indexed(Vec::new(), &[]).expect("empty poset")
    }

    /// One-node poset.
    pub fn point(id: impl Into<NodeId>) -> Self {
        Self::from_indexed(vec![id.into()], &[]).expect("point")
    }

    /// `ids` must be sorted and distinct; `edges` index into it.
    pub(crate) fn from_indexed(ids: Vec<NodeId>, edges: &[(usize, usize)]) -> Result<Self> {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let n = ids.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in edges {
            if a != b {
                succ[a].push(b);
                indeg[b] += 1;
            }
        }

        // Kahn's algorithm, smallest index first.
        let mut order = Vec::with_capacity(n);
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() < n {
            let nodes = (0..n).filter(|&i| indeg[i] > 0).map(|i| ids[i].clone()).collect();
            return Err(Error::CycleDetected { nodes });
        }

        let mut up = BitRows::new(n, n);
        for &i in order.iter().rev() {
            up.set(i, i);
            for &j in &succ[i] {
                up.or_row_into(j, i);
            }
        }
        let mut down = BitRows::new(n, n);
        for i in 0..n {
            for j in up.ones(i) {
                down.set(j, i);
            }
        }

        // j covers i iff up(i) and down(j) share only i and j.
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for i in 0..n {
            for j in up.ones(i) {
                if j == i {
                    continue;
                }
                let between = up
                    .row(i)
                    .iter()
                    .zip(down.row(j))
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>();
                if between == 2 {
                    upper[i].push(j);
                    lower[j].push(i);
                }
            }
        }
        for l in &mut lower {
            l.sort_unstable();
        }

        let mut height = vec![0usize; n];
        for &j in &order {
            height[j] = lower[j].iter().map(|&i| height[i] + 1).max().unwrap_or(0);
        }
        let mut depth = vec![0usize; n];
        for &i in order.iter().rev() {
            depth[i] = upper[i].iter().map(|&j| depth[j] + 1).max().unwrap_or(0);
        }

        Ok(Poset { inner: Arc::new(Inner { ids, upper, lower, up, down, height, depth }) })
    }

    pub fn len(&self) -> usize {
        self.inner.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.ids.is_empty()
    }

    /// Node ids in ascending order; positions are the node indices.
    pub fn ids(&self) -> &[NodeId] {
        &self.inner.ids
    }

    pub fn id(&self, i: usize) -> &NodeId {
        &self.inner.ids[i]
    }

    pub fn index(&self, id: &str) -> Option<usize> {
        self.inner.ids.binary_search_by(|p| p.as_str().cmp(id)).ok()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index(id).is_some()
    }

    /// Index of `id`, or `UnknownNode`.
    pub fn require(&self, id: &str) -> Result<usize> {
        self.index(id).ok_or_else(|| Error::UnknownNode(NodeId::from(id)))
    }

    pub fn require_set<'a, I>(&self, ids: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut out: Vec<usize> = ids.into_iter().map(|id| self.require(id.as_str())).collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyPoset)
        } else {
            Ok(())
        }
    }

    pub fn leq_ix(&self, i: usize, j: usize) -> bool {
        self.inner.up.get(i, j)
    }

    pub fn lt_ix(&self, i: usize, j: usize) -> bool {
        i != j && self.leq_ix(i, j)
    }

    pub fn comparable_ix(&self, i: usize, j: usize) -> bool {
        self.leq_ix(i, j) || self.leq_ix(j, i)
    }

    pub fn covers_ix(&self, i: usize, j: usize) -> bool {
        self.inner.upper[i].binary_search(&j).is_ok()
    }

    /// Nodes covering `i`, ascending.
    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.inner.upper[i]
    }

    /// Nodes covered by `j`, ascending.
    pub fn lower_covers(&self, j: usize) -> &[usize] {
        &self.inner.lower[j]
    }

    /// Indices of `{u : i <= u}`, ascending.
    pub fn up_set_ix(&self, i: usize) -> Vec<usize> {
        self.inner.up.ones(i).collect()
    }

    /// Indices of `{u : u <= j}`, ascending.
    pub fn down_set_ix(&self, j: usize) -> Vec<usize> {
        self.inner.down.ones(j).collect()
    }

    pub fn up_set_size(&self, i: usize) -> usize {
        self.inner.up.count(i)
    }

    pub fn down_set_size(&self, j: usize) -> usize {
        self.inner.down.count(j)
    }

    /// Cover pairs `(lower, upper)` as indices, sorted.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, ups) in self.inner.upper.iter().enumerate() {
            out.extend(ups.iter().map(|&j| (i, j)));
        }
        out
    }

    /// Cover pairs `(lower, upper)` by id, sorted.
    pub fn cover_ids(&self) -> Vec<(NodeId, NodeId)> {
        self.cover_pairs().into_iter().map(|(i, j)| (self.id(i).clone(), self.id(j).clone())).collect()
    }

    pub fn cover_count(&self) -> usize {
        self.inner.upper.iter().map(Vec::len).sum()
    }

    pub fn leq(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq_ix(self.require(a)?, self.require(b)?))
    }

    /// True iff `b` covers `a`.
    pub fn covers(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.covers_ix(self.require(a)?, self.require(b)?))
    }

    pub fn is_min_ix(&self, i: usize) -> bool {
        self.inner.lower[i].is_empty()
    }

    pub fn is_max_ix(&self, i: usize) -> bool {
        self.inner.upper[i].is_empty()
    }

    pub fn min_ix(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_min_ix(i)).collect()
    }

    pub fn max_ix(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_max_ix(i)).collect()
    }

    pub fn min_nodes(&self) -> Result<NodeSet> {
        self.nonempty()?;
        Ok(self.min_ix().into_iter().map(|i| self.id(i).clone()).collect())
    }

    pub fn max_nodes(&self) -> Result<NodeSet> {
        self.nonempty()?;
        Ok(self.max_ix().into_iter().map(|i| self.id(i).clone()).collect())
    }

    /// Length of the longest chain from a minimal node up to `i`.
    pub fn height_ix(&self, i: usize) -> usize {
        self.inner.height[i]
    }

    /// Length of the longest chain from `i` up to a maximal node.
    pub fn depth_ix(&self, i: usize) -> usize {
        self.inner.depth[i]
    }

    pub fn height(&self, x: &str) -> Result<usize> {
        Ok(self.height_ix(self.require(x)?))
    }

    /// Length (in cover steps) of a longest chain.
    pub fn dim(&self) -> Result<usize> {
        self.nonempty()?;
        Ok(self.inner.height.iter().copied().max().unwrap_or(0))
    }

    /// Every maximal chain as an index path from a minimal to a maximal node,
    /// ordered lexicographically by id sequence.
    pub fn maximal_chains_ix(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        for m in self.min_ix() {
            path.push(m);
            self.extend_chains(&mut path, &mut out);
            path.pop();
        }
        // Index order is id order, so sorting index paths sorts id sequences.
        out.sort();
        out
    }

    fn extend_chains(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        let ups = self.upper_covers(last);
        if ups.is_empty() {
            out.push(path.clone());
            return;
        }
        for &j in ups {
            path.push(j);
            self.extend_chains(path, out);
            path.pop();
        }
    }

    pub fn maximal_chains(&self) -> Result<Vec<Chain>> {
        self.nonempty()?;
        Ok(self
            .maximal_chains_ix()
            .into_iter()
            .map(|c| Chain(c.into_iter().map(|i| self.id(i).clone()).collect()))
            .collect())
    }

    /// Number of chains of maximal length.
    pub fn eta(&self) -> Result<u128> {
        let dim = self.dim()?;
        // A longest chain climbs exactly one height level per cover.
        let mut ways = vec![0u128; self.len()];
        let mut by_height: Vec<usize> = (0..self.len()).collect();
        by_height.sort_by_key(|&i| self.height_ix(i));
        for j in by_height {
            ways[j] = if self.height_ix(j) == 0 {
                1
            } else {
                self.lower_covers(j)
                    .iter()
                    .filter(|&&i| self.height_ix(i) + 1 == self.height_ix(j))
                    .map(|&i| ways[i])
                    .sum()
            };
        }
        Ok((0..self.len()).filter(|&j| self.height_ix(j) == dim).map(|j| ways[j]).sum())
    }

    pub fn is_antichain(&self, s: &NodeSet) -> Result<bool> {
        let ix = self.require_set(s)?;
        Ok(self.is_antichain_ix(&ix))
    }

    pub fn is_antichain_ix(&self, ix: &[usize]) -> bool {
        ix.iter().all(|&a| ix.iter().all(|&b| a == b || !self.leq_ix(a, b)))
    }

    /// True iff `s` is closed under intervals.
    pub fn is_complete_subset(&self, s: &NodeSet) -> Result<bool> {
        let ix = self.require_set(s)?;
        Ok(self.completeness_gap(&ix).is_none())
    }

    /// A node strictly outside `ix` that lies between two members, if any.
    pub fn completeness_gap(&self, ix: &[usize]) -> Option<usize> {
        let mut inside = vec![false; self.len()];
        for &i in ix {
            inside[i] = true;
        }
        for &u in ix {
            for y in self.inner.up.ones(u) {
                if !inside[y] && ix.iter().any(|&v| self.leq_ix(y, v)) {
                    return Some(y);
                }
            }
        }
        None
    }

    pub fn down_set(&self, x: &str) -> Result<NodeSet> {
        let i = self.require(x)?;
        Ok(self.down_set_ix(i).into_iter().map(|k| self.id(k).clone()).collect())
    }

    pub fn up_set(&self, x: &str) -> Result<NodeSet> {
        let i = self.require(x)?;
        Ok(self.up_set_ix(i).into_iter().map(|k| self.id(k).clone()).collect())
    }

    pub fn to_ids(&self, ix: impl IntoIterator<Item = usize>) -> NodeSet {
        ix.into_iter().map(|i| self.id(i).clone()).collect()
    }

    /// The subposet induced on `ix`, with the inherited order.
    pub fn induced_ix(&self, ix: &[usize]) -> Poset {
        let ids: Vec<NodeId> = ix.iter().map(|&i| self.id(i).clone()).collect();
        let mut edges = Vec::new();
        for (a, &i) in ix.iter().enumerate() {
            for (b, &j) in ix.iter().enumerate() {
                if i != j && self.leq_ix(i, j) {
                    edges.push((a, b));
                }
            }
        }
        // ix ascending keeps ids sorted.
        Poset::from_indexed(ids, &edges).expect("subposet of a poset is a poset")
    }

    /// Renames every node. Fails with `DuplicateId` if two nodes collide.
    pub fn relabel(&self, mut rename: impl FnMut(&NodeId) -> NodeId) -> Result<Poset> {
        let fresh: Vec<NodeId> = self.ids().iter().map(&mut rename).collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| fresh[a].cmp(&fresh[b]));
        if let Some(w) = order.windows(2).find(|w| fresh[w[0]] == fresh[w[1]]) {
            return Err(Error::DuplicateId(fresh[w[0]].clone()));
        }
        let mut pos = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let ids = order.iter().map(|&old| fresh[old].clone()).collect();
        let edges: Vec<(usize, usize)> = self.cover_pairs().into_iter().map(|(i, j)| (pos[i], pos[j])).collect();
        Poset::from_indexed(ids, &edges)
    }

    /// Builds from an arbitrary node list and an index relation over it.
    pub(crate) fn from_unsorted(ids: Vec<NodeId>, edges: &[(usize, usize)]) -> Result<Poset> {
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        if let Some(w) = order.windows(2).find(|w| ids[w[0]] == ids[w[1]]) {
            return Err(Error::DuplicateId(ids[w[0]].clone()));
        }
        let mut pos = vec![0; ids.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let sorted = order.iter().map(|&old| ids[old].clone()).collect();
        let edges: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (pos[i], pos[j])).collect();
        Poset::from_indexed(sorted, &edges)
    }

    /// Picks an id based on `base` that is not used in this poset nor in `taken`.
    pub fn fresh_id(&self, base: &str, taken: &NodeSet) -> NodeId {
        let mut candidate = base.to_owned();
        while self.contains(&candidate) || taken.contains(candidate.as_str()) {
            candidate.push('\'');
        }
        NodeId(candidate)
    }

    /// Nodes in breadth-first order from the minima; used for deterministic search.
    pub(crate) fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        let mut queue: VecDeque<usize> = self.min_ix().into();
        for &m in &queue {
            seen[m] = true;
        }
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in self.upper_covers(i).iter().chain(self.lower_covers(i)) {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order
    }
}
