//! Shared helpers: fixture loading, random instances, and brute-force order
//! oracles that only look at the raw relation.
#![allow(dead_code)]

use std::path::PathBuf;

use growglue::io::parse_poset;
use growglue::random::random_poset;
use growglue::{NodeId, NodeSet, Poset};
use proptest::prelude::*;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Poset {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_poset(&text).unwrap()
}

pub fn arb_poset(max: usize) -> impl Strategy<Value = Poset> {
    (any::<u64>(), 1..=max, 0.0f64..=1.0).prop_map(|(seed, n, p)| random_poset(seed, n, p).unwrap())
}

/// A poset together with a subset of its nodes, as a bitmask.
pub fn arb_poset_and_mask(max: usize) -> impl Strategy<Value = (Poset, u32)> {
    arb_poset(max).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), 0u32..(1u32 << n))
    })
}

pub fn mask_ids(p: &Poset, mask: u32) -> NodeSet {
    (0..p.len()).filter(|&i| mask >> i & 1 == 1).map(|i| p.id(i).clone()).collect()
}

pub fn mask_ix(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The order relation recomputed by Warshall's algorithm.
pub struct Order {
    pub n: usize,
    pub le: Vec<Vec<bool>>,
}

impl Order {
    pub fn from_relation(n: usize, edges: &[(usize, usize)]) -> Order {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in edges {
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        Order { n, le }
    }

    /// Indices follow `p.ids()`.
    pub fn of(p: &Poset) -> Order {
        let pos = |id: &NodeId| p.ids().iter().position(|x| x == id).unwrap();
        let edges: Vec<(usize, usize)> = p.cover_ids().iter().map(|(a, b)| (pos(a), pos(b))).collect();
        Order::from_relation(p.len(), &edges)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le[i][j]
    }

    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) && !(0..self.n).any(|k| self.lt(i, k) && self.lt(k, j))
    }

    pub fn is_chain(&self, mask: u32) -> bool {
        let ix = mask_ix(self.n, mask);
        ix.iter().all(|&a| ix.iter().all(|&b| self.le[a][b] || self.le[b][a]))
    }

    /// Maximal chains as bitmasks, found by scanning every subset.
    pub fn maximal_chains(&self) -> Vec<u32> {
        let all = 1u32 << self.n;
        (1..all)
            .filter(|&m| self.is_chain(m) && (0..self.n).all(|k| m >> k & 1 == 1 || !self.is_chain(m | 1 << k)))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.maximal_chains().iter().map(|m| m.count_ones() as usize - 1).max().unwrap()
    }

    pub fn eta(&self) -> usize {
        let chains = self.maximal_chains();
        let d = chains.iter().map(|m| m.count_ones()).max().unwrap();
        chains.iter().filter(|m| m.count_ones() == d).count()
    }

    /// Longest chain ending at `i`, counted in edges.
    pub fn height(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.lt(j, i)).map(|j| self.height(j) + 1).max().unwrap_or(0)
    }

    /// Longest chain starting at `i`, counted in edges.
    pub fn depth(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.lt(i, j)).map(|j| self.depth(j) + 1).max().unwrap_or(0)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !(0..self.n).any(|j| self.lt(j, i))).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !(0..self.n).any(|j| self.lt(i, j))).collect()
    }

    pub fn is_complete(&self, s: &[usize]) -> bool {
        s.iter().all(|&u| s.iter().all(|&v| (0..self.n).all(|y| !(self.le[u][y] && self.le[y][v]) || s.contains(&y))))
    }

    pub fn is_antichain(&self, s: &[usize]) -> bool {
        s.iter().all(|&u| s.iter().all(|&v| u == v || !self.le[u][v]))
    }
}

/// Every function `0..n -> 0..m`, as value vectors.
pub fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Position of each id of `p` inside `q.ids()`, for posets on the same ids.
pub fn index_in(q: &Poset, id: &NodeId) -> usize {
    q.index(id.as_str()).unwrap()
}
