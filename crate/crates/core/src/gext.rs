//! G-extension steps: split minimal nodes under a height-one pivot until it
//! is their only cover, then retract the pivot's down-set.

use crate::chains::split_for_cover;
use crate::elevation::{m_count, retract, ElevationWitness};
use crate::error::{Error, Result};
use crate::gluing::{glue_named, induced_map, is_height_zero_gluing, verify_gluing, GluingWitness};
use crate::morphism::PosetMap;
use crate::poset::{NodeId, NodeSet, Poset};

/// `f1` is a height zero gluing of `Z` (via `gluing`), and `Z` is an
/// elevation of `F2` at `pivot` (via `elevation`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GExtension {
    pub f1: Poset,
    pub pivot: NodeId,
    /// `Z -> f1`.
    pub gluing: GluingWitness,
    pub elevation: ElevationWitness,
    /// The pivot's split count before each split and after the last one.
    pub m_trace: Vec<usize>,
}

impl GExtension {
    pub fn z(&self) -> &Poset {
        &self.elevation.z_poset
    }

    pub fn f2(&self) -> &Poset {
        &self.elevation.base
    }

    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(format!("G-extension: {m}")));
        let h = &self.gluing.map;
        if h.source() != self.z() || h.target() != &self.f1 {
            return fail("gluing map has the wrong ends".into());
        }
        if let Err(d) = verify_gluing(h, &self.gluing.collection) {
            return fail(format!("not a gluing: {d}"));
        }
        if !is_height_zero_gluing(&self.gluing) {
            return fail("gluing is not height zero".into());
        }
        self.elevation.verify()?;
        if self.elevation.pivot != self.pivot || h.preimage(self.pivot.as_str())? != NodeSet::from([self.pivot.clone()]) {
            return fail("the pivot of the elevation is not the lift of the chosen node".into());
        }
        if !self.m_trace.windows(2).all(|w| w[0] > w[1]) || self.m_trace.last() != Some(&0) {
            return fail(format!("split counts {:?} do not decrease to zero", self.m_trace));
        }
        Ok(())
    }
}

/// The least height-one node lying on a chain of maximal length.
pub fn choose_pivot(f: &Poset) -> Result<NodeId> {
    let dim = f.dim()?;
    if dim == 0 {
        return Err(Error::ZeroDimensional);
    }
    (0..f.len())
        .find(|&i| f.height_ix(i) == 1 && f.depth_ix(i) + 1 == dim)
        .map(|i| f.id(i).clone())
        .ok_or_else(|| Error::Invariant("no height-one node on a longest chain".into()))
}

/// The lexicographic termination measure `(dim, eta)`.
pub fn measure(f: &Poset) -> Result<(usize, u128)> {
    Ok((f.dim()?, f.eta()?))
}

/// One G-extension step at the least eligible pivot.
///
/// After each split the copies of the split node that are not below the
/// pivot are glued back together, so that a step never multiplies longest
/// chains that avoid the pivot.
pub fn gextension_step(f1: &Poset) -> Result<GExtension> {
    run_step(f1, true)
}

/// Same step with every split taken as is, without regluing the copies away
/// from the pivot.
pub fn gextension_step_uncoalesced(f1: &Poset) -> Result<GExtension> {
    run_step(f1, false)
}

fn run_step(f1: &Poset, coalesce: bool) -> Result<GExtension> {
    let pivot = choose_pivot(f1)?;
    let mut cur = f1.clone();
    let mut h = PosetMap::identity(f1);
    let mut m_trace = Vec::new();
    loop {
        let m = m_count(&cur, pivot.as_str())?;
        if m_trace.last().is_some_and(|&prev| m >= prev) {
            return Err(Error::Invariant(format!("split count did not drop: {m_trace:?} then {m}")));
        }
        m_trace.push(m);
        if m == 0 {
            break;
        }
        let p = cur.require(pivot.as_str())?;
        let u = cur
            .lower_covers(p)
            .iter()
            .copied()
            .find(|&u| cur.upper_covers(u).len() > 1)
            .expect("positive split count has a shared node");
        let u = cur.id(u).clone();
        let split = split_for_cover(&cur, u.as_str(), pivot.as_str())?;
        let mut down = split.f_map.clone();
        if coalesce {
            let f = &split.f;
            let fp = f.require(pivot.as_str())?;
            let off: NodeSet = f.to_ids(
                (0..f.len()).filter(|&v| split.f_map.target().id(split.f_map.apply_ix(v)) == &u && !f.covers_ix(v, fp)),
            );
            if !off.is_empty() {
                let w = glue_named(f, &[(off, u.clone())])?;
                down = induced_map(&w, &split.f_map)?;
            }
        }
        h = down.then(&h)?;
        cur = h.source().clone();
    }
    let collection = h.fibers().into_iter().filter(|f| f.len() > 1).map(|f| cur.to_ids(f)).collect();
    let gluing = GluingWitness { map: h, collection };
    let elevation = retract(&cur, pivot.as_str())?;
    let step = GExtension { f1: f1.clone(), pivot, gluing, elevation, m_trace };
    step.verify()?;
    Ok(step)
}

/// G-extension steps from `f1` until the dimension drops.
pub fn reduce_dimension(f1: &Poset) -> Result<Vec<GExtension>> {
    let start = f1.dim()?;
    if start == 0 {
        return Err(Error::ZeroDimensional);
    }
    let mut steps = Vec::new();
    let mut cur = f1.clone();
    while cur.dim()? == start {
        let step = gextension_step(&cur)?;
        let (before, after) = (measure(&cur)?, measure(step.f2())?);
        if after >= before {
            return Err(Error::Invariant(format!("measure did not drop: {before:?} to {after:?}")));
        }
        cur = step.f2().clone();
        steps.push(step);
    }
    Ok(steps)
}
