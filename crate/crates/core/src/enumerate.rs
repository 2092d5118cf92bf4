//! All posets of a given size, one per isomorphism class.

use std::collections::BTreeMap;

use crate::morphism::find_isomorphism;
use crate::poset::{NodeId, Poset};

type Invariant = Vec<(usize, usize, usize, usize, usize, usize)>;

fn invariant(p: &Poset) -> Invariant {
    let mut v: Invariant = (0..p.len())
        .map(|i| {
            (
                p.height_ix(i),
                p.depth_ix(i),
                p.lower_covers(i).len(),
                p.upper_covers(i).len(),
                p.down_set_size(i),
                p.up_set_size(i),
            )
        })
        .collect();
    v.sort_unstable();
    v
}

fn id(i: usize) -> NodeId {
    NodeId::new(format!("p{i}"))
}

/// Every poset on `n` nodes up to isomorphism, with nodes `p0 .. p{n-1}`.
///
/// Each one arises from a smaller one by adding a new maximal node above a
/// down-closed set, so the classes are grown size by size.
pub fn posets_of_size(n: usize) -> Vec<Poset> {
    let mut level = vec![Poset::empty()];
    for size in 1..=n {
        let mut classes: BTreeMap<Invariant, Vec<Poset>> = BTreeMap::new();
        for base in &level {
            for ideal in down_closed_sets(base) {
                let mut ids: Vec<NodeId> = base.ids().to_vec();
                ids.push(id(size - 1));
                let mut edges: Vec<(NodeId, NodeId)> = base.cover_ids();
                edges.extend(ideal.iter().map(|&i| (base.id(i).clone(), id(size - 1))));
                let p = Poset::build(ids, edges).expect("adding a top over a down-set keeps it acyclic");
                let bucket = classes.entry(invariant(&p)).or_default();
                if !bucket.iter().any(|q| find_isomorphism(q, &p).is_some()) {
                    bucket.push(p);
                }
            }
        }
        level = classes.into_values().flatten().collect();
    }
    level
}

/// Every poset on 1 to `n` nodes up to isomorphism.
pub fn posets_up_to(n: usize) -> Vec<Poset> {
    (1..=n).flat_map(posets_of_size).collect()
}

fn down_closed_sets(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.len();
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|set| set.iter().all(|&j| p.lower_covers(j).iter().all(|i| set.contains(i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| posets_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
        assert_eq!(posets_up_to(3).len(), 8);
    }
}
