use super::{shortest_path_metric, MetricSpace, WeightedGraph};
use crate::config::caps;
use crate::error::{Error, Result};

/// Laakso graph of level `k`.
///
/// `G_0` is a single edge of length 1 between vertices 0 (left) and 1
/// (right). `G_{k+1}` replaces every edge `s-t` of length `l` by the six-edge
/// gadget `s-a, a-b1, a-b2, b1-c, b2-c, c-t`, each of length `l/4`, so the
/// diameter stays 1 and the edge count is `6^k`.
pub fn laakso_graph(k: u32) -> Result<WeightedGraph> {
    if k > caps().laakso_level {
        return Err(Error::CapExceeded {
            what: "Laakso level",
            requested: k as u128,
            cap: caps().laakso_level as u128,
        });
    }
    let mut n = 2usize;
    let mut edges = vec![(0usize, 1usize, 1.0f64)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(edges.len() * 6);
        for &(s, t, len) in &edges {
            let (a, b1, b2, c) = (n, n + 1, n + 2, n + 3);
            n += 4;
            let l = len / 4.0;
            next.extend([(s, a, l), (a, b1, l), (a, b2, l), (b1, c, l), (b2, c, l), (c, t, l)]);
        }
        edges = next;
    }
    WeightedGraph::new(n, edges)
}

/// A Laakso graph together with its shortest-path metric.
#[derive(Debug, Clone)]
pub struct Laakso {
    level: u32,
    graph: WeightedGraph,
    metric: MetricSpace,
}

impl Laakso {
    pub fn new(level: u32) -> Result<Self> {
        let graph = laakso_graph(level)?;
        let metric = shortest_path_metric(&graph)?;
        Ok(Laakso { level, graph, metric })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn metric(&self) -> &MetricSpace {
        &self.metric
    }

    /// Leftmost point `r`.
    pub fn left(&self) -> usize {
        0
    }

    /// Rightmost point `r'`.
    pub fn right(&self) -> usize {
        1
    }

    /// `|v| = d(v, r)`.
    pub fn height(&self, v: usize) -> f64 {
        self.metric.dist(v, self.left())
    }

    /// First index `j` of `path` with
    /// `d(v_0, v_t) <= ||v_0| - |v_j|| + ||v_j| - |v_t||` (within `1e-12`).
    ///
    /// Consecutive path entries must be adjacent or equal. Failing to find a
    /// witness would contradict the path lemma and is reported as an
    /// internal error.
    pub fn path_lemma_witness(&self, path: &[usize]) -> Result<usize> {
        if path.is_empty() {
            return Err(Error::Parameter("empty path".into()));
        }
        let n = self.graph.vertex_count();
        if let Some(&bad) = path.iter().find(|&&v| v >= n) {
            return Err(Error::Parameter(format!("vertex {bad} not in G_{}", self.level)));
        }
        if let Some(w) = path.windows(2).position(|w| w[0] != w[1] && !self.graph.is_adjacent(w[0], w[1])) {
            return Err(Error::Parameter(format!(
                "path steps {} -> {} between non-adjacent vertices",
                path[w],
                path[w + 1]
            )));
        }
        let (v0, vt) = (path[0], path[path.len() - 1]);
        let target = self.metric.dist(v0, vt);
        let (h0, ht) = (self.height(v0), self.height(vt));
        path.iter()
            .position(|&v| {
                let hj = self.height(v);
                target <= (h0 - hj).abs() + (hj - ht).abs() + 1e-12
            })
            .ok_or_else(|| Error::Internal(format!("no path-lemma witness for path from {v0} to {vt}")))
    }
}

/// Hamming cube `{0,1}^dim` with the Hamming metric (lazy). Point `i` is the
/// bit string of `i`.
pub fn hamming_cube(dim: u32) -> Result<MetricSpace> {
    if dim == 0 || dim >= usize::BITS - 1 {
        return Err(Error::Parameter(format!("cube dimension must lie in 1..{}", usize::BITS - 1)));
    }
    Ok(MetricSpace::lazy_hamming(dim))
}

/// `X x Y` with `d((x,y),(x',y')) = d_X(x,x') + d_Y(y,y')`. Point `(a, b)` has
/// index `a * |Y| + b`.
pub fn product_metric(x: &MetricSpace, y: &MetricSpace) -> Result<MetricSpace> {
    let n = (x.len() as u128) * (y.len() as u128);
    if n > caps().product_points as u128 {
        return Err(Error::CapExceeded { what: "product space", requested: n, cap: caps().product_points as u128 });
    }
    Ok(MetricSpace::lazy_product(x.clone(), y.clone()))
}

/// `(X, d^(1-eps))`. Concavity of `s -> s^(1-eps)` keeps it a metric.
pub fn snowflake(x: &MetricSpace, eps: f64) -> Result<MetricSpace> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("snowflake exponent eps must lie in (0,1), got {eps}")));
    }
    Ok(MetricSpace::lazy_power(x.clone(), 1.0 - eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laakso_counts_and_diameter() {
        let g0 = laakso_graph(0).unwrap();
        assert_eq!((g0.vertex_count(), g0.edge_count()), (2, 1));
        let mut v = 2usize;
        for k in 1..=4u32 {
            let l = Laakso::new(k).unwrap();
            v += 4 * 6usize.pow(k - 1);
            assert_eq!(l.graph().vertex_count(), v, "vertices of G_{k}");
            assert_eq!(l.graph().edge_count(), 6usize.pow(k));
            assert!((l.metric().diameter() - 1.0).abs() <= 1e-12);
            assert_eq!(l.metric().dist(l.left(), l.right()), 1.0);
        }
        assert_eq!(laakso_graph(3).unwrap().vertex_count(), 174);
    }

    #[test]
    fn laakso_right_distance_complements_height() {
        let l = Laakso::new(3).unwrap();
        for v in 0..l.graph().vertex_count() {
            let s = l.height(v) + l.metric().dist(v, l.right());
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn laakso_path_lemma_basic_cases() {
        let l = Laakso::new(2).unwrap();
        assert_eq!(l.path_lemma_witness(&[5]).unwrap(), 0);
        // A geodesic from left to right: follow neighbors with increasing height.
        let mut path = vec![l.left()];
        while *path.last().unwrap() != l.right() {
            let u = *path.last().unwrap();
            let next = l
                .graph()
                .neighbors(u)
                .iter()
                .map(|&(w, _)| w)
                .find(|&w| l.height(w) > l.height(u))
                .unwrap();
            path.push(next);
        }
        assert_eq!(l.path_lemma_witness(&path).unwrap(), 0);
        assert!(l.path_lemma_witness(&[0, 1]).is_err());
    }

    #[test]
    fn cube_distances() {
        assert_eq!(hamming_cube(1).unwrap().dist(0, 1), 1.0);
        assert_eq!(hamming_cube(3).unwrap().dist(0b000, 0b111), 3.0);
        assert_eq!(hamming_cube(2).unwrap().dist(0b01, 0b10), 2.0);
        assert!(hamming_cube(0).is_err());
        hamming_cube(4).unwrap().validate().unwrap();
    }

    #[test]
    fn product_examples() {
        let point = MetricSpace::line(&[3.0]).unwrap();
        let y = MetricSpace::line(&[0.0, 1.0, 4.0]).unwrap();
        let py = product_metric(&point, &y).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(py.dist(i, j), y.dist(i, j));
            }
        }
        let e = MetricSpace::line(&[0.0, 1.0]).unwrap();
        let sq = product_metric(&e, &e).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.dist(sq.product_index(0, 0).unwrap(), sq.product_index(1, 1).unwrap()), 2.0);
        sq.validate().unwrap();
    }

    #[test]
    fn snowflake_examples() {
        let cube = hamming_cube(1).unwrap();
        assert_eq!(snowflake(&cube, 0.3).unwrap().dist(0, 1), 1.0);
        let line = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        let s = snowflake(&line, 0.5).unwrap();
        assert!((s.dist(0, 2) - 2f64.sqrt()).abs() < 1e-15);
        s.validate().unwrap();
        assert!(snowflake(&line, 1.0).is_err());
        assert!(snowflake(&line, 0.0).is_err());
    }
}
