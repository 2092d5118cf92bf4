//! Brute-force reference computations that never call into the library's
//! order algorithms: everything starts from the raw cover list.

use std::collections::BTreeSet;

use growglue::{NodeId, Poset};

/// Reflexive-transitive closure, indices in `p.ids()` order.
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

    fn is_chain(&self, mask: u32) -> bool {
        let ix: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
        ix.iter().all(|&a| ix.iter().all(|&b| self.le[a][b] || self.le[b][a]))
    }

    /// Maximal chains as bitmasks, by scanning every subset.
    pub fn maximal_chains(&self) -> Vec<u32> {
        (1..1u32 << self.n)
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

    /// Longest path by relaxing edges `n` times.
    pub fn longest_path(&self) -> usize {
        let mut dist = vec![0usize; self.n];
        for _ in 0..self.n {
            for i in 0..self.n {
                for j in 0..self.n {
                    if self.covers(i, j) {
                        dist[j] = dist[j].max(dist[i] + 1);
                    }
                }
            }
        }
        dist.into_iter().max().unwrap_or(0)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !(0..self.n).any(|j| self.lt(j, i))).collect()
    }

    pub fn is_complete(&self, s: &[usize]) -> bool {
        s.iter().all(|&u| s.iter().all(|&v| (0..self.n).all(|y| !(self.le[u][y] && self.le[y][v]) || s.contains(&y))))
    }
}

/// Every function `0..n -> 0..m`.
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

/// Strict order as an `n * n` bit pattern.
fn pattern(n: usize, lt: impl Fn(usize, usize) -> bool) -> u64 {
    let mut bits = 0u64;
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) {
                bits |= 1 << (i * n + j);
            }
        }
    }
    bits
}

/// Least bit pattern over all relabelings.
pub fn canonical_form(n: usize, lt: &[Vec<bool>], perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|s| pattern(n, |i, j| lt[s[i]][s[j]])).min().unwrap()
}

/// Isomorphism classes of posets on `n` points, found by listing every
/// transitively closed relation that respects the natural order `0 < 1 < ...`
/// (every poset has such a labeling) and reducing each to canonical form.
pub fn poset_classes(n: usize) -> BTreeSet<u64> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let mut lt = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            lt[i][j] = mask >> k & 1 == 1;
        }
        let closed = (0..n).all(|i| (0..n).all(|j| !lt[i][j] || (0..n).all(|k| !lt[j][k] || lt[i][k])));
        if closed {
            classes.insert(canonical_form(n, &lt, &perms));
        }
    }
    classes
}

pub fn canonical_of(p: &Poset, perms: &[Vec<usize>]) -> u64 {
    let o = Order::of(p);
    let lt: Vec<Vec<bool>> = (0..o.n).map(|i| (0..o.n).map(|j| o.lt(i, j)).collect()).collect();
    canonical_form(o.n, &lt, perms)
}
