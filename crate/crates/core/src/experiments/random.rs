//! Random instance generators shared by the experiments and the test suites.

use rand::Rng;

use crate::chain::ReversibleChain;
use crate::metric::WeightedGraph;

/// Chain on `n` states from random symmetric conductances: a random spanning
/// tree, each other pair with probability `density`, and holding weights on
/// roughly half of the states.
pub fn random_chain<R: Rng>(rng: &mut R, n: usize, density: f64) -> ReversibleChain {
    let mut w = vec![vec![0.0; n]; n];
    for v in 1..n {
        let u = rng.random_range(0..v);
        let c = rng.random_range(0.1..2.0);
        w[u][v] = c;
        w[v][u] = c;
    }
    for u in 0..n {
        for v in u + 1..n {
            if w[u][v] == 0.0 && rng.random_bool(density) {
                let c = rng.random_range(0.1..2.0);
                w[u][v] = c;
                w[v][u] = c;
            }
        }
        if n == 1 || rng.random_bool(0.5) {
            w[u][u] = rng.random_range(0.1..2.0);
        }
    }
    ReversibleChain::from_conductances(&w).expect("connected conductances give a chain")
}

/// Chain with a uniformly random number of states in `2..=n_max`.
pub fn random_chain_upto<R: Rng>(rng: &mut R, n_max: usize) -> ReversibleChain {
    let n = rng.random_range(2..=n_max.max(2));
    let density = rng.random_range(0.0..1.0);
    random_chain(rng, n, density)
}

/// `n` vectors in `[-1, 1]^dim`.
pub fn random_vectors<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

/// Random tree on `n` vertices; integer edge lengths in `1..=max_len` when
/// `integer`, otherwise lengths in `[0.2, 3)`.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, integer: bool, max_len: u32) -> WeightedGraph {
    let edges = (1..n)
        .map(|v| {
            let len = if integer { rng.random_range(1..=max_len) as f64 } else { rng.random_range(0.2..3.0) };
            (rng.random_range(0..v), v, len)
        })
        .collect();
    WeightedGraph::new(n, edges).expect("a random tree is a valid graph")
}
