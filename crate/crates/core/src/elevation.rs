//! Retractions of a down-set into its top node, and the inverse elevations.

use crate::error::{Error, Result};
use crate::gluing::{glue_named, verify_gluing};
use crate::morphism::PosetMap;
use crate::poset::{NodeId, NodeSet, Poset};

/// `base` is the retraction of the down-set of `pivot` in `z_poset` into
/// `pivot`; `elevation` is the unique section of `retraction` fixing the pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElevationWitness {
    pub z_poset: Poset,
    pub pivot: NodeId,
    pub base: Poset,
    /// `z_poset -> base`.
    pub retraction: PosetMap,
    /// `base -> z_poset`.
    pub elevation: PosetMap,
}

fn check_pivot(z: &Poset, pivot: &str) -> Result<usize> {
    let p = z.require(pivot)?;
    if z.height_ix(p) != 1 {
        return Err(Error::NotHeightOne(pivot.into()));
    }
    for w in z.down_set_ix(p) {
        if w != p && z.upper_covers(w) != [p] {
            return Err(Error::NotUniqueCover { node: z.id(w).clone(), pivot: pivot.into() });
        }
    }
    Ok(p)
}

/// Glues the down-set of `pivot` into a node that keeps the pivot's id.
pub fn retract(z: &Poset, pivot: &str) -> Result<ElevationWitness> {
    let p = check_pivot(z, pivot)?;
    let down = z.to_ids(z.down_set_ix(p));
    let w = glue_named(z, &[(down, pivot.into())])?;
    let base = w.target().clone();
    let fibers = w.map.fibers();
    let image = fibers.iter().map(|f| if f.len() == 1 { f[0] } else { p }).collect();
    let elevation = PosetMap::from_indices(base.clone(), z.clone(), image);
    Ok(ElevationWitness { z_poset: z.clone(), pivot: pivot.into(), base, retraction: w.map, elevation })
}

/// Grows `n` fresh minimal nodes `q0, q1, ...` under the minimal node `p`.
pub fn elevate(x: &Poset, p: &str, n: usize) -> Result<ElevationWitness> {
    if n == 0 {
        return Err(Error::InvalidCount);
    }
    let mut taken = NodeSet::new();
    let fresh: Vec<NodeId> = (0..n)
        .map(|i| {
            let id = x.fresh_id(&format!("q{i}"), &taken);
            taken.insert(id.clone());
            id
        })
        .collect();
    elevate_with_ids(x, p, &fresh)
}

/// Grows one fresh minimal node per id under the minimal node `p`.
pub fn elevate_with_ids(x: &Poset, p: &str, fresh: &[NodeId]) -> Result<ElevationWitness> {
    if fresh.is_empty() {
        return Err(Error::InvalidCount);
    }
    let i = x.require(p)?;
    if !x.is_min_ix(i) {
        return Err(Error::NotMinimal(p.into()));
    }
    let mut seen = NodeSet::new();
    for id in fresh {
        if x.contains(id.as_str()) || !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    let mut ids: Vec<NodeId> = x.ids().to_vec();
    let mut edges = x.cover_pairs();
    for id in fresh {
        edges.push((ids.len(), i));
        ids.push(id.clone());
    }
    let z = Poset::from_unsorted(ids, &edges)?;
    let w = retract(&z, p)?;
    if &w.base != x {
        return Err(Error::Invariant("retracting an elevation did not give back the original".into()));
    }
    Ok(w)
}

/// Number of minimal nodes below `x` that have some cover other than `x`.
pub fn m_count(f: &Poset, x: &str) -> Result<usize> {
    let i = f.require(x)?;
    Ok(f.down_set_ix(i)
        .into_iter()
        .filter(|&u| u != i && f.is_min_ix(u) && f.upper_covers(u) != [i])
        .count())
}

impl ElevationWitness {
    /// Re-checks every defining property from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Invariant(format!("elevation witness: {m}")));
        let z = &self.z_poset;
        let p = check_pivot(z, self.pivot.as_str())?;
        if self.retraction.source() != z || self.retraction.target() != &self.base {
            return fail("retraction has the wrong ends");
        }
        if self.elevation.source() != &self.base || self.elevation.target() != z {
            return fail("elevation map has the wrong ends");
        }
        let down = z.down_set_ix(p);
        let down_ids = z.to_ids(down.iter().copied());
        if let Err(d) = verify_gluing(&self.retraction, std::slice::from_ref(&down_ids)) {
            return Err(Error::Invariant(format!("retraction is not a gluing along the down-set: {d}")));
        }
        if PosetMap::identity(&self.base) != self.elevation.then(&self.retraction)? {
            return fail("retraction after elevation is not the identity");
        }
        let rp = self.retraction.apply_ix(p);
        if self.elevation.apply_ix(rp) != p {
            return fail("elevation does not send the glued node back to the pivot");
        }
        if let Some(d) = self.elevation.embedding_defect() {
            return Err(Error::Invariant(format!("elevation map is not an embedding: {d}")));
        }
        let mut covered = vec![false; z.len()];
        for &w in down.iter().chain(self.elevation.image_ix()) {
            covered[w] = true;
        }
        if !covered.iter().all(|&c| c) {
            return fail("some node is neither below the pivot nor in the image");
        }
        let mut expected: Vec<usize> = down.iter().copied().filter(|&w| z.is_min_ix(w)).collect();
        expected.extend(
            self.base.min_ix().into_iter().filter(|&x| x != rp).map(|x| self.elevation.apply_ix(x)),
        );
        expected.sort_unstable();
        if expected != z.min_ix() {
            return fail("minimal nodes do not split as expected");
        }
        Ok(())
    }

    /// Nodes below the pivot, excluding the pivot.
    pub fn grown(&self) -> NodeSet {
        let z = &self.z_poset;
        let p = z.index(self.pivot.as_str()).expect("pivot");
        z.to_ids(z.down_set_ix(p).into_iter().filter(|&w| w != p))
    }
}
