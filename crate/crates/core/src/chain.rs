//! Stationary reversible Markov chains on `{0, .., n-1}`.
//!
//! Constructors always supply the stationary law in closed form (from
//! conductances or a known formula); [`ReversibleChain::new`] then checks
//! stochasticity, positivity and detailed balance. Nothing here solves for
//! `pi` from the transition matrix alone.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use parking_lot::RwLock;
use rand::Rng;
use rayon::prelude::*;

use crate::config::caps;
use crate::error::{Error, Result};
use crate::metric::{shortest_path_metric, MetricSpace, WeightedGraph};
use crate::rng::{self, SeedRecord};

const STOCHASTIC_TOL: f64 = 1e-12;
const POWER_DRIFT_TOL: f64 = 1e-9;

/// Transition matrix `A` plus stationary law `pi` with `pi_i a_ij = pi_j a_ji`.
pub struct ReversibleChain {
    n: usize,
    a: DMatrix<f64>,
    pi: Vec<f64>,
    /// Nonzero entries of each row, `(column, probability)`.
    rows: Vec<Vec<(usize, f64)>>,
    powers: RwLock<HashMap<u64, Arc<DMatrix<f64>>>>,
}

impl Clone for ReversibleChain {
    fn clone(&self) -> Self {
        ReversibleChain {
            n: self.n,
            a: self.a.clone(),
            pi: self.pi.clone(),
            rows: self.rows.clone(),
            powers: RwLock::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for ReversibleChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReversibleChain").field("n", &self.n).field("pi", &self.pi).finish_non_exhaustive()
    }
}

impl ReversibleChain {
    /// Validates row sums and `sum(pi)` to `1 +- 1e-12`, nonnegativity,
    /// `pi > 0` and detailed balance to `1e-12`.
    pub fn new(transition: Vec<Vec<f64>>, pi: Vec<f64>) -> Result<Self> {
        let n = transition.len();
        if n == 0 {
            return Err(Error::InvalidChain("no states".into()));
        }
        if pi.len() != n {
            return Err(Error::InvalidChain(format!("pi has {} entries for {n} states", pi.len())));
        }
        if let Some(i) = transition.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidChain(format!("row {i} has {} entries", transition[i].len())));
        }
        for (i, row) in transition.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| !(x >= 0.0 && x.is_finite())) {
                return Err(Error::InvalidChain(format!("a[{i}][{j}] = {} is not a probability", row[j])));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidChain(format!("row {i} sums to {s}")));
            }
        }
        if let Some(i) = pi.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidChain(format!("pi[{i}] = {} is not positive", pi[i])));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidChain(format!("pi sums to {total}")));
        }
        for i in 0..n {
            for j in 0..i {
                let gap = (pi[i] * transition[i][j] - pi[j] * transition[j][i]).abs();
                if gap > STOCHASTIC_TOL {
                    return Err(Error::InvalidChain(format!("detailed balance fails on ({i},{j}) by {gap:e}")));
                }
            }
        }
        let rows = transition
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(j, &x)| (j, x)).collect())
            .collect();
        let a = DMatrix::from_fn(n, n, |i, j| transition[i][j]);
        Ok(ReversibleChain { n, a, pi, rows, powers: RwLock::new(HashMap::new()) })
    }

    /// Chain with `a_ij = w_ij / w_i` and `pi_i = w_i / sum w` for a symmetric
    /// nonnegative conductance matrix (diagonal entries are holding weights).
    pub fn from_conductances(w: &[Vec<f64>]) -> Result<Self> {
        let n = w.len();
        for i in 0..n {
            if w[i].len() != n {
                return Err(Error::InvalidChain(format!("conductance row {i} has {} entries", w[i].len())));
            }
            for j in 0..n {
                if !(w[i][j] >= 0.0 && w[i][j].is_finite()) {
                    return Err(Error::InvalidChain(format!("conductance ({i},{j}) = {}", w[i][j])));
                }
                if w[i][j] != w[j][i] {
                    return Err(Error::InvalidChain(format!("conductances not symmetric at ({i},{j})")));
                }
            }
        }
        let mass: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
        if let Some(i) = mass.iter().position(|&m| m <= 0.0) {
            return Err(Error::InvalidChain(format!("state {i} has no conductance")));
        }
        let total: f64 = mass.iter().sum();
        let pi: Vec<f64> = mass.iter().map(|m| m / total).collect();
        let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| w[i][j] / mass[i]).collect()).collect();
        let chain = Self::new(a, pi)?;
        if chain.n > 1 && !chain.is_irreducible() {
            return Err(Error::InvalidChain("conductance graph is disconnected".into()));
        }
        Ok(chain)
    }

    /// Random walk on a connected graph with the given edge conductances
    /// (unit conductances when `None`).
    pub fn random_walk(g: &WeightedGraph, conductances: Option<&[f64]>) -> Result<Self> {
        if !g.is_connected() {
            let m = shortest_path_metric(g).err();
            return Err(m.unwrap_or_else(|| Error::InvalidChain("disconnected graph".into())));
        }
        if let Some(c) = conductances {
            if c.len() != g.edge_count() {
                return Err(Error::InvalidChain(format!(
                    "{} conductances for {} edges",
                    c.len(),
                    g.edge_count()
                )));
            }
            if let Some(k) = c.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidChain(format!("conductance of edge {k} is {}", c[k])));
            }
        }
        let n = g.vertex_count();
        let mut w = vec![vec![0.0; n]; n];
        for (k, &(u, v, _)) in g.edges().iter().enumerate() {
            let c = conductances.map_or(1.0, |c| c[k]);
            w[u][v] += c;
            w[v][u] += c;
        }
        Self::from_conductances(&w)
    }

    /// The two-state chain that always switches.
    pub fn flip() -> Self {
        Self::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5]).expect("flip chain")
    }

    /// I.i.d. sampling from `pi` (every row equals `pi`).
    pub fn iid(pi: Vec<f64>) -> Result<Self> {
        let rows = vec![pi.clone(); pi.len()];
        Self::new(rows, pi)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    /// Nonzero `(j, a_ij)` of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    fn is_irreducible(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.rows[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `A^t` by repeated squaring, memoized per `t`. Rows are re-checked to be
    /// stochastic within `1e-9`; larger drift is an error, never renormalized.
    pub fn t_step(&self, t: u64) -> Result<Arc<DMatrix<f64>>> {
        if let Some(m) = self.powers.read().get(&t) {
            return Ok(Arc::clone(m));
        }
        let mut result = DMatrix::<f64>::identity(self.n, self.n);
        let mut base = self.a.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        for i in 0..self.n {
            let s: f64 = result.row(i).iter().sum();
            if (s - 1.0).abs() > POWER_DRIFT_TOL {
                return Err(Error::Drift(format!("row {i} of A^{t} sums to {s}")));
            }
        }
        let m = Arc::new(result);
        self.powers.write().entry(t).or_insert_with(|| Arc::clone(&m));
        Ok(m)
    }

    /// Second largest eigenvalue of `A` on `L^2(pi)`, from the symmetric
    /// matrix `D^{1/2} A D^{-1/2}`.
    pub fn second_eigenvalue(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::Parameter("a one-state chain has no second eigenvalue".into()));
        }
        let sq: Vec<f64> = self.pi.iter().map(|p| p.sqrt()).collect();
        let s = DMatrix::from_fn(self.n, self.n, |i, j| {
            let x = sq[i] * self.a[(i, j)] / sq[j];
            let y = sq[j] * self.a[(j, i)] / sq[i];
            0.5 * (x + y)
        });
        let mut ev: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        let lambda = ev[1].clamp(-1.0, 1.0);
        if lambda >= 1.0 - 1e-12 {
            return Err(Error::Reducible(lambda));
        }
        Ok(lambda)
    }

    fn sample_index(weights: &[(usize, f64)], u: f64) -> usize {
        let mut acc = 0.0;
        for &(j, p) in weights {
            acc += p;
            if u < acc {
                return j;
            }
        }
        weights.last().expect("nonempty row").0
    }

    /// Draw `Z_0 ~ pi`.
    pub fn sample_stationary<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.pi.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.n - 1
    }

    /// Draw `Z_{s+1} ~ A(z, .)`.
    pub fn step<R: Rng>(&self, z: usize, rng: &mut R) -> usize {
        Self::sample_index(&self.rows[z], rng.random())
    }

    /// Stationary trajectory `Z_0..Z_t` from stream `(seed, stream)`.
    pub fn sample_trajectory(&self, t: usize, seed: u64, stream: u64) -> Result<Trajectory> {
        if t < 1 {
            return Err(Error::Parameter("trajectory length must be at least 1".into()));
        }
        let mut r = rng::stream(seed, stream);
        let mut states = Vec::with_capacity(t + 1);
        let mut z = self.sample_stationary(&mut r);
        states.push(z);
        for _ in 0..t {
            z = self.step(z, &mut r);
            states.push(z);
        }
        Ok(Trajectory { states, seed: SeedRecord { seed, stream } })
    }

    /// Iterator over the joint laws `J_t = diag(pi) A^t`, `t = 0, 1, ..`,
    /// propagated through the sparse rows (cost `n * (n + nnz)` per step).
    pub fn joint_laws(&self) -> JointLaws<'_> {
        let n = self.n;
        let mut j = vec![0.0; n * n];
        for i in 0..n {
            j[i * n + i] = self.pi[i];
        }
        JointLaws { chain: self, current: j }
    }
}

/// See [`ReversibleChain::joint_laws`].
pub struct JointLaws<'a> {
    chain: &'a ReversibleChain,
    current: Vec<f64>,
}

impl JointLaws<'_> {
    /// Current `J_t` as a flat row-major `n x n` slice.
    pub fn current(&self) -> &[f64] {
        &self.current
    }

    /// Advance `J_t -> J_{t+1} = J_t A`.
    pub fn advance(&mut self) {
        let n = self.chain.n;
        let rows = &self.chain.rows;
        let cur = &self.current;
        let mut next = vec![0.0; n * n];
        next.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            let src = &cur[i * n..(i + 1) * n];
            for (j, &mass) in src.iter().enumerate() {
                if mass != 0.0 {
                    for &(k, p) in &rows[j] {
                        out[k] += mass * p;
                    }
                }
            }
        });
        self.current = next;
    }
}

/// Sampled states `Z_0..Z_t` with the stream that produced them.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Trajectory {
    pub states: Vec<usize>,
    pub seed: SeedRecord,
}

impl Trajectory {
    /// Horizon `t` (number of steps).
    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }

    /// Integer CSV with header `step,state`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["step", "state"])?;
        for (s, z) in self.states.iter().enumerate() {
            out.write_record([s.to_string(), z.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Depth of heap-indexed vertex `v` (root 0, children `2v+1`, `2v+2`).
pub fn heap_depth(v: usize) -> u32 {
    usize::BITS - 1 - (v + 1).leading_zeros()
}

/// Stationary weight of a vertex at depth `k` for the biased walk on `T_h`.
///
/// Vertices with three neighbors carry `2^{-k}/h`; the root and the leaves,
/// which move to a uniform neighbor, carry half of that. These are the
/// weights that satisfy detailed balance for the kernel in
/// [`biased_tree_chain`]; depths are uniform on `1..h-1` with the two
/// boundary depths carrying `1/(2h)` each.
pub fn biased_tree_weight(h: u32, k: u32) -> f64 {
    let base = 0.5f64.powi(k as i32) / h as f64;
    if k == 0 || k == h {
        base / 2.0
    } else {
        base
    }
}

/// Law of `|Z_0|` for the stationary biased walk on `T_h`.
pub fn biased_tree_depth_law(h: u32) -> Vec<f64> {
    (0..=h).map(|k| biased_tree_weight(h, k) * 2f64.powi(k as i32)).collect()
}

/// Biased walk on the complete binary tree `T_h` (heap indexing): from a
/// vertex with three neighbors, move toward the root w.p. 1/2 and to each
/// child w.p. 1/4; from the root or a leaf, move to a uniform neighbor.
/// Returns the chain and the tree metric.
pub fn biased_tree_chain(h: u32) -> Result<(ReversibleChain, MetricSpace)> {
    if h < 1 {
        return Err(Error::Parameter("tree depth must be at least 1".into()));
    }
    if h > caps().explicit_tree_depth {
        return Err(Error::CapExceeded {
            what: "explicit binary tree depth",
            requested: h as u128,
            cap: caps().explicit_tree_depth as u128,
        });
    }
    let n = (1usize << (h + 1)) - 1;
    let mut a = vec![vec![0.0; n]; n];
    for v in 0..n {
        let depth = heap_depth(v);
        let children = [2 * v + 1, 2 * v + 2];
        if depth == 0 {
            for c in children {
                a[v][c] = 0.5;
            }
        } else if depth == h {
            a[v][(v - 1) / 2] = 1.0;
        } else {
            a[v][(v - 1) / 2] = 0.5;
            for c in children {
                a[v][c] = 0.25;
            }
        }
    }
    let pi: Vec<f64> = (0..n).map(|v| biased_tree_weight(h, heap_depth(v))).collect();
    let chain = ReversibleChain::new(a, pi)?;
    let edges: Vec<(usize, usize)> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    let metric = shortest_path_metric(&WeightedGraph::unit(n, &edges)?)?;
    Ok((chain, metric))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_state() -> ReversibleChain {
        ReversibleChain::new(vec![vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn walk_constructors() {
        let e = ReversibleChain::random_walk(&WeightedGraph::path(2), None).unwrap();
        assert_eq!(e.a(0, 1), 1.0);
        assert_eq!(e.stationary(), &[0.5, 0.5]);
        let p = ReversibleChain::random_walk(&WeightedGraph::path(3), None).unwrap();
        assert_eq!((p.a(1, 0), p.a(1, 2)), (0.5, 0.5));
        assert_eq!(p.stationary(), &[0.25, 0.5, 0.25]);
        let star = WeightedGraph::unit(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = ReversibleChain::random_walk(&star, None).unwrap();
        assert_eq!(s.stationary()[0], 0.5);
        for leaf in 1..4 {
            assert!((s.stationary()[leaf] - 1.0 / 6.0).abs() < 1e-15);
        }
        let split = WeightedGraph::unit(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(ReversibleChain::random_walk(&split, None).is_err());
    }

    #[test]
    fn rejects_non_reversible_input() {
        let cyc = vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]];
        let err = ReversibleChain::new(cyc, vec![1.0 / 3.0; 3]).unwrap_err();
        assert!(matches!(err, Error::InvalidChain(_)));
        assert!(ReversibleChain::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]], vec![0.5, 0.5]).is_err());
        assert!(ReversibleChain::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn powers() {
        let f = ReversibleChain::flip();
        assert_eq!(*f.t_step(0).unwrap(), DMatrix::identity(2, 2));
        assert_eq!(*f.t_step(2).unwrap(), DMatrix::identity(2, 2));
        let c = two_state();
        assert!((c.t_step(2).unwrap()[(0, 1)] - 4.0 / 9.0).abs() < 1e-15);
        // memoized value is reused
        assert!(Arc::ptr_eq(&c.t_step(2).unwrap(), &c.t_step(2).unwrap()));
    }

    #[test]
    fn second_eigenvalues() {
        assert!((ReversibleChain::flip().second_eigenvalue().unwrap() + 1.0).abs() < 1e-12);
        assert!((two_state().second_eigenvalue().unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let iid = ReversibleChain::iid(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(iid.second_eigenvalue().unwrap().abs() < 1e-12);
        let stuck = ReversibleChain::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).unwrap();
        assert!(matches!(stuck.second_eigenvalue(), Err(Error::Reducible(_))));
    }

    #[test]
    fn trajectories_are_reproducible() {
        let c = two_state();
        let a = c.sample_trajectory(50, 7, 3).unwrap();
        assert_eq!(a, c.sample_trajectory(50, 7, 3).unwrap());
        assert_ne!(a, c.sample_trajectory(50, 7, 4).unwrap());
        let f = ReversibleChain::flip().sample_trajectory(20, 1, 0).unwrap();
        assert!(f.states.windows(2).all(|w| w[0] != w[1]));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,state\n0,"));
        assert_eq!(text.lines().count(), 22);
    }

    #[test]
    fn empirical_frequencies_match_pi() {
        let g = WeightedGraph::unit(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let c = ReversibleChain::random_walk(&g, None).unwrap();
        let tr = c.sample_trajectory(1_000_000, 99, 0).unwrap();
        let mut counts = [0usize; 4];
        for &z in &tr.states {
            counts[z] += 1;
        }
        for i in 0..4 {
            let freq = counts[i] as f64 / tr.states.len() as f64;
            assert!((freq - c.stationary()[i]).abs() < 0.01 * c.stationary()[i], "state {i}: {freq}");
        }
    }

    #[test]
    fn biased_tree_small_depths() {
        let (c, m) = biased_tree_chain(1).unwrap();
        assert_eq!(c.stationary(), &[0.5, 0.25, 0.25]);
        assert_eq!((c.a(0, 1), c.a(0, 2)), (0.5, 0.5));
        assert_eq!(c.stationary()[0] * c.a(0, 1), c.stationary()[1] * c.a(1, 0));
        assert_eq!(m.dist(1, 2), 2.0);
        for h in 2..=6 {
            let (c, _) = biased_tree_chain(h).unwrap();
            let pi = c.stationary();
            for i in 0..c.len() {
                let flow: f64 = (0..c.len()).map(|j| pi[j] * c.a(j, i)).sum();
                assert!((flow - pi[i]).abs() < 1e-12);
            }
            let law = biased_tree_depth_law(h);
            assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn heap_depths() {
        assert_eq!(heap_depth(0), 0);
        assert_eq!(heap_depth(1), 1);
        assert_eq!(heap_depth(2), 1);
        assert_eq!(heap_depth(3), 2);
        assert_eq!(heap_depth(6), 2);
        assert_eq!(heap_depth(7), 3);
    }
}
