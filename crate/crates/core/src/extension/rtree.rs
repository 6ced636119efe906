//! Finite R-trees: rooted weighted trees whose points include the interiors
//! of edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::WeightedGraph;

/// A point of an [`RTree`]: the point at distance `up` from `vertex` along
/// the edge towards its parent. `up == 0` is the vertex itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RTreePoint {
    pub vertex: usize,
    pub up: f64,
}

impl RTreePoint {
    pub fn vertex(v: usize) -> Self {
        RTreePoint { vertex: v, up: 0.0 }
    }

    pub fn is_vertex(&self) -> bool {
        self.up == 0.0
    }
}

/// Closed ball `{p : d(p, center) <= radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeBall {
    pub center: RTreePoint,
    pub radius: f64,
}

impl TreeBall {
    pub fn new(center: RTreePoint, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::Parameter(format!("ball radius must be nonnegative, got {radius}")));
        }
        Ok(TreeBall { center, radius })
    }

    pub fn contains(&self, tree: &RTree, p: RTreePoint, tol: f64) -> bool {
        tree.dist(self.center, p) <= self.radius + tol
    }
}

/// Weighted tree rooted at vertex 0, stored by parent pointers. Vertices can
/// only be added (by subdividing edges), never removed.
#[derive(Debug, Clone, PartialEq)]
pub struct RTree {
    parent: Vec<Option<usize>>,
    /// Length of the edge to the parent (0 at the root).
    length: Vec<f64>,
    /// Distance to the root.
    height: Vec<f64>,
}

impl RTree {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::from_graph(&WeightedGraph::new(n, edges)?)
    }

    pub fn from_graph(g: &WeightedGraph) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::InvalidGraph("an R-tree needs a connected acyclic graph".into()));
        }
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut length = vec![0.0; n];
        let mut height = vec![0.0; n];
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, e) in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    length[v] = g.edges()[e].2;
                    height[v] = height[u] + length[v];
                    stack.push(v);
                }
            }
        }
        Ok(RTree { parent, length, height })
    }

    /// Segment `[0, len]` with vertex 0 at 0 and vertex 1 at `len`.
    pub fn segment(len: f64) -> Result<Self> {
        Self::new(2, vec![(0, 1, len)])
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn edge_length(&self, child: usize) -> f64 {
        self.length[child]
    }

    /// `(parent, child, length)` for every edge.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        (0..self.vertex_count()).filter_map(|v| self.parent[v].map(|p| (p, v, self.length[v]))).collect()
    }

    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while u != v {
            if self.height[u] >= self.height[v] {
                u = self.parent[u].expect("the root is the deepest common ancestor");
            } else {
                v = self.parent[v].expect("the root is the deepest common ancestor");
            }
        }
        u
    }

    pub fn vertex_dist(&self, u: usize, v: usize) -> f64 {
        let w = self.lca(u, v);
        self.height[u] + self.height[v] - 2.0 * self.height[w]
    }

    fn check(&self, p: RTreePoint) -> Result<()> {
        if p.vertex >= self.vertex_count() {
            return Err(Error::Parameter(format!("vertex {} outside the tree", p.vertex)));
        }
        if !(p.up >= 0.0 && p.up <= self.length[p.vertex]) {
            return Err(Error::Parameter(format!("offset {} outside the edge above vertex {}", p.up, p.vertex)));
        }
        Ok(())
    }

    /// The point at distance `offset` from `u` on the edge `u`–`v`.
    pub fn point_on_edge(&self, u: usize, v: usize, offset: f64) -> Result<RTreePoint> {
        let (child, up) = if self.parent.get(v) == Some(&Some(u)) {
            (v, self.length[v] - offset)
        } else if self.parent.get(u) == Some(&Some(v)) {
            (u, offset)
        } else {
            return Err(Error::Parameter(format!("{u} and {v} are not adjacent")));
        };
        let p = RTreePoint { vertex: child, up };
        self.check(p)?;
        Ok(self.normalize(p))
    }

    /// Snap offsets within relative `1e-12` of an edge end to that vertex.
    pub fn normalize(&self, p: RTreePoint) -> RTreePoint {
        let len = self.length[p.vertex];
        if p.up <= 1e-12 * len {
            RTreePoint::vertex(p.vertex)
        } else if p.up >= len * (1.0 - 1e-12) {
            RTreePoint::vertex(self.parent[p.vertex].expect("the root has no edge above it"))
        } else {
            p
        }
    }

    fn dist_to_vertex(&self, p: RTreePoint, w: usize) -> f64 {
        let d = self.vertex_dist(p.vertex, w);
        if p.up == 0.0 {
            d
        } else if self.lca(p.vertex, w) == p.vertex {
            d + p.up
        } else {
            d - p.up
        }
    }

    pub fn dist(&self, p: RTreePoint, q: RTreePoint) -> f64 {
        if p.vertex == q.vertex {
            return (p.up - q.up).abs();
        }
        if p.up == 0.0 {
            return self.dist_to_vertex(q, p.vertex);
        }
        if q.up == 0.0 {
            return self.dist_to_vertex(p, q.vertex);
        }
        let top = self.parent[p.vertex].expect("interior points lie below the root");
        (p.up + self.dist_to_vertex(q, p.vertex)).min(self.length[p.vertex] - p.up + self.dist_to_vertex(q, top))
    }

    /// End of the edge carrying `p` through which the geodesic to `q` leaves.
    fn exit(&self, p: RTreePoint, q: RTreePoint) -> usize {
        if p.up == 0.0 {
            return p.vertex;
        }
        let top = self.parent[p.vertex].expect("interior points lie below the root");
        if p.up + self.dist(RTreePoint::vertex(p.vertex), q) <= self.length[p.vertex] - p.up + self.dist(RTreePoint::vertex(top), q) {
            p.vertex
        } else {
            top
        }
    }

    /// Coordinate of `x` along the edge above `child`: 0 at `child`, the
    /// edge length at its parent.
    fn coordinate(&self, child: usize, x: RTreePoint) -> f64 {
        if x.vertex == child {
            x.up
        } else {
            self.length[child]
        }
    }

    /// The point at distance `s` from `p` on the geodesic from `p` to `q`.
    pub fn point_along(&self, p: RTreePoint, q: RTreePoint, s: f64) -> RTreePoint {
        let total = self.dist(p, q);
        if s <= 0.0 {
            return p;
        }
        if s >= total {
            return q;
        }
        if p.vertex == q.vertex {
            let dir = if q.up >= p.up { 1.0 } else { -1.0 };
            return self.normalize(RTreePoint { vertex: p.vertex, up: p.up + dir * s });
        }
        let a = self.exit(p, q);
        let b = self.exit(q, p);
        let w = self.lca(a, b);
        let mut way = vec![p, RTreePoint::vertex(a)];
        let mut u = a;
        while u != w {
            u = self.parent[u].unwrap();
            way.push(RTreePoint::vertex(u));
        }
        let mut down = Vec::new();
        let mut v = b;
        while v != w {
            down.push(v);
            v = self.parent[v].unwrap();
        }
        way.extend(down.into_iter().rev().map(RTreePoint::vertex));
        way.push(q);
        let mut walked = 0.0;
        for pair in way.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            let seg = self.dist(x, y);
            if seg == 0.0 {
                continue;
            }
            if walked + seg >= s {
                let child = if !x.is_vertex() {
                    x.vertex
                } else if !y.is_vertex() {
                    y.vertex
                } else if self.parent[x.vertex] == Some(y.vertex) {
                    x.vertex
                } else {
                    y.vertex
                };
                let (cx, cy) = (self.coordinate(child, x), self.coordinate(child, y));
                let up = cx + (cy - cx) * ((s - walked) / seg);
                return self.normalize(RTreePoint { vertex: child, up: up.clamp(0.0, self.length[child]) });
            }
            walked += seg;
        }
        q
    }

    /// Materialize `p` as a vertex, splitting its edge if necessary.
    pub fn subdivide(&mut self, p: RTreePoint) -> usize {
        let p = self.normalize(p);
        if p.is_vertex() {
            return p.vertex;
        }
        let v = p.vertex;
        let w = self.vertex_count();
        let top = self.parent[v];
        self.parent.push(top);
        self.length.push(self.length[v] - p.up);
        self.height.push(self.height[top.unwrap()] + self.length[w]);
        self.parent[v] = Some(w);
        self.length[v] = p.up;
        w
    }

    /// Intersection of two closed balls, or `None` when it is empty.
    ///
    /// Boundary comparisons allow a relative `1e-9` so that tangent balls
    /// produced by floating-point arithmetic still meet.
    pub fn ball_intersect(&self, b1: TreeBall, b2: TreeBall) -> Option<TreeBall> {
        let d = self.dist(b1.center, b2.center);
        let (r1, r2) = (b1.radius, b2.radius);
        let tol = 1e-9 * d.max(r1).max(r2).max(1.0);
        if d > r1 + r2 + tol {
            return None;
        }
        if d + r2 <= r1 {
            return Some(b2);
        }
        if d + r1 <= r2 {
            return Some(b1);
        }
        let s = ((d + r1 - r2) / 2.0).clamp(0.0, d);
        let radius = ((r1 + r2 - d) / 2.0).max(0.0);
        Some(TreeBall { center: self.point_along(b1.center, b2.center, s), radius })
    }
}

/// [`RTree::ball_intersect`] as a free function.
pub fn tree_ball_intersect(b1: TreeBall, b2: TreeBall, tree: &RTree) -> Option<TreeBall> {
    tree.ball_intersect(b1, b2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(t: &RTree, x: f64) -> RTreePoint {
        t.point_on_edge(0, 1, x).unwrap()
    }

    #[test]
    fn segment_examples() {
        let t = RTree::segment(10.0).unwrap();
        let b = tree_ball_intersect(TreeBall::new(at(&t, 2.0), 3.0).unwrap(), TreeBall::new(at(&t, 8.0), 3.0).unwrap(), &t).unwrap();
        assert_eq!(b.radius, 0.0);
        assert!((t.dist(b.center, RTreePoint::vertex(0)) - 5.0).abs() < 1e-12);
        assert!(tree_ball_intersect(TreeBall::new(at(&t, 0.0), 1.0).unwrap(), TreeBall::new(at(&t, 10.0), 1.0).unwrap(), &t).is_none());
        let small = TreeBall::new(at(&t, 5.0), 1.0).unwrap();
        assert_eq!(tree_ball_intersect(TreeBall::new(at(&t, 5.0), 10.0).unwrap(), small, &t), Some(small));
    }

    #[test]
    fn distances_through_subdivisions() {
        let mut t = RTree::new(4, vec![(0, 1, 2.0), (1, 2, 3.0), (1, 3, 1.0)]).unwrap();
        let p = t.point_on_edge(1, 2, 1.0).unwrap();
        let q = t.point_on_edge(0, 1, 0.5).unwrap();
        assert!((t.dist(p, q) - 2.5).abs() < 1e-12);
        assert!((t.dist(p, RTreePoint::vertex(3)) - 2.0).abs() < 1e-12);
        let mid = t.point_along(p, RTreePoint::vertex(3), 1.5);
        assert!((t.dist(mid, RTreePoint::vertex(3)) - 0.5).abs() < 1e-12);
        let w = t.subdivide(p);
        assert_eq!(w, 4);
        assert!((t.vertex_dist(4, 3) - 2.0).abs() < 1e-12);
        assert!((t.vertex_dist(4, 2) - 2.0).abs() < 1e-12);
        assert!((t.vertex_dist(0, 2) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn ball_membership_matches_sampling() {
        let t = RTree::new(5, vec![(0, 1, 1.0), (1, 2, 2.0), (1, 3, 1.5), (0, 4, 2.5)]).unwrap();
        let samples: Vec<RTreePoint> = t
            .edges()
            .iter()
            .flat_map(|&(u, v, len)| (0..=200).map(move |k| (u, v, len * k as f64 / 200.0)))
            .map(|(u, v, s)| t.point_on_edge(u, v, s).unwrap())
            .collect();
        let centers = [t.point_on_edge(1, 2, 0.7).unwrap(), RTreePoint::vertex(4), t.point_on_edge(1, 3, 1.1).unwrap()];
        for &c1 in &centers {
            for &c2 in &centers {
                for (r1, r2) in [(1.0, 2.0), (2.5, 0.3), (3.0, 3.0), (0.2, 0.2)] {
                    let (b1, b2) = (TreeBall::new(c1, r1).unwrap(), TreeBall::new(c2, r2).unwrap());
                    let meet = t.ball_intersect(b1, b2);
                    for &s in &samples {
                        let both = b1.contains(&t, s, 1e-12) && b2.contains(&t, s, 1e-12);
                        match meet {
                            Some(b) => {
                                let inside = b.contains(&t, s, 1e-12);
                                let margin = (t.dist(b.center, s) - b.radius).abs();
                                assert!(inside == both || margin < 1e-9, "{b1:?} {b2:?} {s:?}");
                            }
                            None => assert!(!both),
                        }
                    }
                }
            }
        }
    }
}
