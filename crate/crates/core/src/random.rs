//! Seeded random posets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{NodeId, Poset};

/// A poset on `n` nodes `n0, n1, ...` where each pair `i < j` of the fixed
/// order is related with probability `p`, then transitively reduced. The same
/// arguments always give the same poset.
pub fn random_poset(seed: u64, n: usize, p: f64) -> Result<Poset> {
    if n == 0 {
        return Err(Error::Field { field: "nodes".into(), message: "need at least one node".into() });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Field { field: "p".into(), message: format!("{p} is not a probability") });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (n - 1).to_string().len();
    let ids: Vec<NodeId> = (0..n).map(|i| NodeId::new(format!("n{i:0width$}"))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    // Zero padding keeps index order equal to id order.
    Poset::from_indexed(ids, &edges)
}
