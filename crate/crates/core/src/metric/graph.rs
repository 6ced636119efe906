use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use rayon::prelude::*;

use super::MetricSpace;
use crate::config::caps;
use crate::error::{Error, Result};

/// Undirected graph with strictly positive edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    /// `adj[u]` lists `(v, edge index)`.
    adj: Vec<Vec<(usize, usize)>>,
    connected: bool,
}

impl WeightedGraph {
    /// Self-loops, repeated edges and nonpositive lengths are rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for (k, &(u, v, len)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {k} = ({u},{v}) leaves 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if !(len > 0.0 && len.is_finite()) {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has length {len}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) appears twice")));
            }
            adj[u].push((v, k));
            adj[v].push((u, k));
        }
        let mut g = WeightedGraph { n, edges, adj, connected: false };
        g.connected = g.bfs_hops(0).iter().all(|d| d.is_some());
        Ok(g)
    }

    /// Unit-length graph.
    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect())
    }

    pub fn path(n: usize) -> Self {
        Self::unit(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).expect("path graph")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("cycle needs at least 3 vertices".into()));
        }
        Self::unit(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    /// `rows x cols` grid with unit edges; vertex `(r, c)` has index `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::unit(rows * cols, &e).expect("grid graph")
    }

    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::unit(10, &e).expect("petersen graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// `(neighbor, edge index)` pairs at `u`.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&(w, _)| w == v)
    }

    pub fn has_unit_lengths(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1.0)
    }

    pub fn is_tree(&self) -> bool {
        self.connected && self.edges.len() + 1 == self.n
    }

    fn bfs_hops(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(v, _) in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Single-source shortest path lengths (Dijkstra).
    pub fn dijkstra(&self, s: usize) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
            }
        }
        let mut dist = vec![f64::INFINITY; self.n];
        dist[s] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, s)]);
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, k) in &self.adj[u] {
                let nd = d + self.edges[k].2;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Item(nd, v));
                }
            }
        }
        dist
    }
}

/// All-pairs shortest-path metric of a connected graph (explicit).
///
/// The triangle inequality holds by construction, so spaces above the
/// validation cap are accepted without the cubic check.
pub fn shortest_path_metric(g: &WeightedGraph) -> Result<MetricSpace> {
    let n = g.n;
    if !g.connected {
        let hops = g.bfs_hops(0);
        let v = hops.iter().position(|d| d.is_none()).unwrap();
        return Err(Error::Disconnected(0, v));
    }
    if n > caps().explicit_points {
        return Err(Error::CapExceeded {
            what: "graph metric (explicit)",
            requested: n as u128,
            cap: caps().explicit_points as u128,
        });
    }
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| g.dijkstra(s)).collect();
    let mut flat = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // Dijkstra sums in a path-dependent order; symmetrize exactly.
            flat.push(rows[i][j].min(rows[j][i]));
        }
    }
    Ok(MetricSpace::from_flat_trusted(n, flat))
}

/// Shortest cycle length of a unit-length graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

/// Girth by one BFS per root: every non-tree edge `(u, v)` met during the
/// BFS from `s` closes a walk of length `h(u) + h(v) + 1` containing a cycle,
/// and the minimum over roots is attained by a root on a shortest cycle.
pub fn girth(g: &WeightedGraph) -> Result<Girth> {
    if !g.has_unit_lengths() {
        return Err(Error::InvalidGraph("girth is defined for unit-length graphs only".into()));
    }
    let best = (0..g.n)
        .into_par_iter()
        .filter_map(|s| {
            let mut hops = vec![usize::MAX; g.n];
            let mut parent_edge = vec![usize::MAX; g.n];
            hops[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut best = usize::MAX;
            while let Some(u) = queue.pop_front() {
                for &(v, k) in &g.adj[u] {
                    if hops[v] == usize::MAX {
                        hops[v] = hops[u] + 1;
                        parent_edge[v] = k;
                        queue.push_back(v);
                    } else if parent_edge[u] != k {
                        best = best.min(hops[u] + hops[v] + 1);
                    }
                }
            }
            (best != usize::MAX).then_some(best)
        })
        .min();
    Ok(best.map_or(Girth::Acyclic, Girth::Cycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_cycle_metrics() {
        let m = shortest_path_metric(&WeightedGraph::path(3)).unwrap();
        assert_eq!(m.dist(0, 2), 2.0);
        let e = WeightedGraph::new(2, vec![(0, 1, 7.0)]).unwrap();
        assert_eq!(shortest_path_metric(&e).unwrap().dist(0, 1), 7.0);
        let c = shortest_path_metric(&WeightedGraph::cycle(4).unwrap()).unwrap();
        assert_eq!(c.dist(0, 2), 2.0);
        assert_eq!(c.dist(0, 1), 1.0);
        c.validate().unwrap();
    }

    #[test]
    fn disconnected_graph_names_unreachable_pair() {
        let g = WeightedGraph::unit(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(shortest_path_metric(&g).unwrap_err(), Error::Disconnected(0, 2));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(WeightedGraph::new(2, vec![(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 2, 1.0)]).is_err());
    }

    /// Independent girth oracle: delete each edge in turn and BFS between its
    /// endpoints.
    fn girth_by_edge_removal(g: &WeightedGraph) -> Option<usize> {
        let mut best = None::<usize>;
        for (k, &(u, v, _)) in g.edges().iter().enumerate() {
            let mut hops = vec![usize::MAX; g.vertex_count()];
            hops[u] = 0;
            let mut q = VecDeque::from([u]);
            while let Some(x) = q.pop_front() {
                for &(y, e) in g.neighbors(x) {
                    if e != k && hops[y] == usize::MAX {
                        hops[y] = hops[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            if hops[v] != usize::MAX {
                let c = hops[v] + 1;
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        best
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&WeightedGraph::cycle(4).unwrap()).unwrap(), Girth::Cycle(4));
        assert_eq!(girth(&WeightedGraph::path(6)).unwrap(), Girth::Acyclic);
        let p = WeightedGraph::petersen();
        assert_eq!(girth_by_edge_removal(&p), Some(5));
        assert_eq!(girth(&p).unwrap(), Girth::Cycle(5));
        let weighted = WeightedGraph::new(3, vec![(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert!(girth(&weighted).is_err());
    }

    #[test]
    fn girth_agrees_with_edge_removal_on_grids_and_random_graphs() {
        use rand::Rng;
        assert_eq!(girth(&WeightedGraph::grid(3, 4)).unwrap(), Girth::Cycle(4));
        let mut rng = crate::rng::stream(11, 0);
        for _ in 0..50 {
            let n = rng.random_range(3..14);
            let mut e = Vec::new();
            for u in 0..n {
                for v in 0..u {
                    if rng.random::<f64>() < 0.25 {
                        e.push((v, u));
                    }
                }
            }
            let g = WeightedGraph::unit(n, &e).unwrap();
            let expect = girth_by_edge_removal(&g).map_or(Girth::Acyclic, Girth::Cycle);
            assert_eq!(girth(&g).unwrap(), expect);
        }
    }
}
