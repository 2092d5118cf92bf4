//! Chain decompositions and partial regluing of them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gluing::{glue_along_complete, GluingWitness};
use crate::morphism::PosetMap;
use crate::poset::{NodeId, NodeSet, Poset};

/// A disjoint sum of chains `D` with a map onto `X` that sends each chain onto
/// a maximal chain, hitting every maximal chain once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub d: Poset,
    pub phi: PosetMap,
    /// Node ids of each chain of `D`, bottom first.
    pub chains: Vec<Vec<NodeId>>,
}

/// A partial regluing `F` of `D`, with `f ∘ t = phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub f: Poset,
    /// `D -> F`.
    pub t: PosetMap,
    /// `F -> X`.
    pub f_map: PosetMap,
}

fn copy_id(chain: usize, pos: usize) -> NodeId {
    NodeId::new(format!("a{chain}.{pos}"))
}

/// One fresh chain per maximal chain of `X`; chain `k` position `p` is `ak.p`.
pub fn chain_decomposition(x: &Poset) -> Result<ChainDecomposition> {
    let maximal = x.maximal_chains()?;
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    let mut pairs = Vec::new();
    let mut chains = Vec::new();
    for (k, c) in maximal.iter().enumerate() {
        let mut chain = Vec::new();
        for (p, node) in c.nodes().iter().enumerate() {
            let id = copy_id(k, p);
            if p > 0 {
                edges.push((copy_id(k, p - 1), id.clone()));
            }
            ids.push(id.clone());
            pairs.push((id.clone(), node.clone()));
            chain.push(id);
        }
        chains.push(chain);
    }
    let d = Poset::build(ids, edges)?;
    let phi = PosetMap::from_pairs(&d, x, pairs)?;
    Ok(ChainDecomposition { d, phi, chains })
}

impl ChainDecomposition {
    pub fn x(&self) -> &Poset {
        self.phi.target()
    }

    /// The fibers of `phi` with more than one node, ascending by the `X` node
    /// they lie over.
    pub fn fiber_collection(&self) -> Vec<NodeSet> {
        self.fibers_by_target().into_values().filter(|f| f.len() > 1).collect()
    }

    fn fibers_by_target(&self) -> BTreeMap<NodeId, NodeSet> {
        let mut out: BTreeMap<NodeId, NodeSet> = BTreeMap::new();
        for (a, x) in self.phi.pairs() {
            out.entry(x.clone()).or_default().insert(a.clone());
        }
        out
    }

    /// Checks the defining conditions of a chain decomposition.
    pub fn check(&self) -> Result<()> {
        let x = self.x();
        let fail = |m: String| Err(Error::Invariant(m));
        let mut images = Vec::new();
        for chain in &self.chains {
            let image: Vec<NodeId> =
                chain.iter().map(|a| self.phi.apply(a.as_str()).cloned()).collect::<Result<_>>()?;
            for w in chain.windows(2) {
                if !self.d.covers(w[0].as_str(), w[1].as_str())? {
                    return fail(format!("`{}` < `{}` is not a cover of D", w[0], w[1]));
                }
            }
            for w in image.windows(2) {
                if !x.covers(w[0].as_str(), w[1].as_str())? {
                    return fail(format!("chain image steps `{}` to `{}` without a cover", w[0], w[1]));
                }
            }
            images.push(image);
        }
        if self.chains.iter().map(Vec::len).sum::<usize>() != self.d.len() {
            return fail("chains do not partition D".into());
        }
        let mut expected: Vec<Vec<NodeId>> = x.maximal_chains()?.into_iter().map(|c| c.into_nodes()).collect();
        images.sort();
        expected.sort();
        if images != expected {
            return fail("chain images are not exactly the maximal chains".into());
        }
        if let Some(d) = self.phi.surjectivity_defect() {
            return fail(d.to_string());
        }
        Ok(())
    }

    /// Minima and maxima of `D` are exactly the preimages of those of `X`.
    pub fn verify_min_max_lifting(&self) -> Result<()> {
        let x = self.x();
        let pre = |set: NodeSet| -> NodeSet {
            self.phi.pairs().filter(|(_, y)| set.contains(*y)).map(|(a, _)| a.clone()).collect()
        };
        if self.d.min_nodes()? != pre(x.min_nodes()?) {
            return Err(Error::Invariant("minima of D are not the preimage of the minima".into()));
        }
        if self.d.max_nodes()? != pre(x.max_nodes()?) {
            return Err(Error::Invariant("maxima of D are not the preimage of the maxima".into()));
        }
        Ok(())
    }
}

/// Glues `D` along the chosen fibers only, one fiber at a time in ascending
/// order of the `X` node they lie over.
pub fn glue_d_along_subcollection(cd: &ChainDecomposition, sub: &[NodeSet]) -> Result<SplitResult> {
    let by_target = cd.fibers_by_target();
    let mut chosen: BTreeMap<NodeId, NodeSet> = BTreeMap::new();
    for e in sub {
        let over = e
            .iter()
            .next()
            .and_then(|a| cd.phi.apply(a.as_str()).ok())
            .filter(|x| by_target.get(*x) == Some(e) && e.len() > 1)
            .ok_or_else(|| Error::NotASubcollection(e.iter().cloned().collect()))?;
        chosen.insert(over.clone(), e.clone());
    }
    let mut t = PosetMap::identity(&cd.d);
    for e in chosen.values() {
        let image = t.target().to_ids(e.iter().map(|a| t.apply_ix(cd.d.index(a.as_str()).expect("in D"))));
        let step = glue_along_complete(t.target(), &image)?;
        t = t.then(&step.map)?;
    }
    let w = GluingWitness { map: t.clone(), collection: chosen.into_values().collect() };
    let f_map = crate::gluing::induced_map(&w, &cd.phi)?;
    Ok(SplitResult { f: t.target().clone(), t, f_map })
}

impl SplitResult {
    /// Renames `F` through `names`, keeping both maps in step.
    fn relabeled(&self, names: &BTreeMap<NodeId, NodeId>) -> Result<SplitResult> {
        let f = self.f.relabel(|v| names[v].clone())?;
        let back: BTreeMap<&NodeId, &NodeId> = names.iter().map(|(old, new)| (new, old)).collect();
        let t = PosetMap::from_fn(self.t.source(), &f, |a| names[self.t.apply(a.as_str()).expect("in D")].clone())?;
        let f_map = PosetMap::from_fn(&f, self.f_map.target(), |v| {
            self.f_map.apply(back[v].as_str()).expect("in F").clone()
        })?;
        Ok(SplitResult { f, t, f_map })
    }
}

/// Splits the minimal node `u1` of `X` into one copy per maximal chain
/// through it, regluing everything else, so that each copy below `u2` has
/// `u2`'s lift as its only cover.
///
/// Nodes of `F` over a single node of `X` take that node's id; the copies of
/// `u1` are named `u1.0`, `u1.1`, ...
pub fn split_for_cover(x: &Poset, u1: &str, u2: &str) -> Result<SplitResult> {
    let (i, j) = (x.require(u1)?, x.require(u2)?);
    if !x.is_min_ix(i) {
        return Err(Error::NotMinimal(u1.into()));
    }
    if !x.covers_ix(i, j) {
        return Err(Error::NotACover { lower: u1.into(), upper: u2.into() });
    }
    let cd = chain_decomposition(x)?;
    let u1_fiber = cd.phi.preimage(u1)?;
    if u1_fiber.len() == 1 {
        return Ok(SplitResult { f: x.clone(), t: cd.phi.clone(), f_map: PosetMap::identity(x) });
    }
    let sub: Vec<NodeSet> = cd.fiber_collection().into_iter().filter(|e| *e != u1_fiber).collect();
    let raw = glue_d_along_subcollection(&cd, &sub)?;

    let mut names: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut taken = NodeSet::new();
    let mut k = 0;
    for (v, y) in raw.f_map.pairs() {
        if y.as_str() == u1 {
            let name = x.fresh_id(&format!("{u1}.{k}"), &taken);
            k += 1;
            taken.insert(name.clone());
            names.insert(v.clone(), name);
        } else {
            names.insert(v.clone(), y.clone());
        }
    }
    raw.relabeled(&names)
}
