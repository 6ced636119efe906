//! Lipschitz extension of tree-valued maps, one point at a time.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::rtree::{RTree, RTreePoint, TreeBall};
use crate::error::{Error, Result};
use crate::metric::{shortest_path_metric, MetricSpace, WeightedGraph};
use crate::rng;

/// A map from every point of `X` to a vertex of `tree`.
#[derive(Debug, Clone)]
pub struct TreeExtension {
    pub tree: RTree,
    pub values: Vec<usize>,
    pub lipschitz: f64,
}

impl RTree {
    /// Re-express a point given before some subdivisions of its edge.
    pub fn relocate(&self, mut p: RTreePoint) -> RTreePoint {
        while p.up > self.edge_length(p.vertex) * (1.0 + 1e-12) {
            p.up -= self.edge_length(p.vertex);
            p.vertex = self.parent(p.vertex).expect("offsets stay below the root");
        }
        self.normalize(RTreePoint { vertex: p.vertex, up: p.up.min(self.edge_length(p.vertex)) })
    }

    /// Materialize each point as a vertex; points are read relative to the
    /// tree as it was before the call.
    pub fn materialize(&mut self, points: &[RTreePoint]) -> Vec<usize> {
        points.iter().map(|&p| {
            let q = self.relocate(p);
            self.subdivide(q)
        }).collect()
    }
}

/// Extend `phi : A -> tree`, `L`-Lipschitz, to all of `space`.
///
/// Points outside `A` are processed in ascending index; each one is sent to
/// the center of the intersection of the balls `B(value(a), L d(x, a))` over
/// the points already placed. That center becomes a vertex of the returned
/// tree.
pub fn lipschitz_extend_to_tree(
    space: &MetricSpace,
    subset: &[usize],
    phi: &[RTreePoint],
    lipschitz: f64,
    tree: &RTree,
) -> Result<TreeExtension> {
    let n = space.len();
    if subset.len() != phi.len() || subset.is_empty() {
        return Err(Error::Parameter("phi needs one tree point per point of the nonempty subset".into()));
    }
    let mut in_subset = vec![false; n];
    for &a in subset {
        if a >= n || std::mem::replace(&mut in_subset[a], true) {
            return Err(Error::Parameter(format!("subset is not a set of distinct points (at {a})")));
        }
    }
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return Err(Error::Parameter(format!("Lipschitz constant must be finite and nonnegative, got {lipschitz}")));
    }
    for &p in phi {
        if p.vertex >= tree.vertex_count() || !(p.up >= 0.0 && p.up <= tree.edge_length(p.vertex)) {
            return Err(Error::Parameter(format!("{p:?} is not a point of the tree")));
        }
    }
    for i in 0..subset.len() {
        for k in i + 1..subset.len() {
            let (a, b) = (subset[i], subset[k]);
            let dt = tree.dist(phi[i], phi[k]);
            let bound = lipschitz * space.dist(a, b);
            if dt > bound * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::NotLipschitz(a, b, format!("tree distance {dt} exceeds {bound}")));
            }
        }
    }
    let mut tree = tree.clone();
    let placed = tree.materialize(phi);
    let mut values = vec![usize::MAX; n];
    for (&a, &v) in subset.iter().zip(&placed) {
        values[a] = v;
    }
    let mut done: Vec<usize> = subset.to_vec();
    for x in 0..n {
        if in_subset[x] {
            continue;
        }
        let mut ball = TreeBall { center: RTreePoint::vertex(values[done[0]]), radius: lipschitz * space.dist(x, done[0]) };
        for &a in &done[1..] {
            let next = TreeBall { center: RTreePoint::vertex(values[a]), radius: lipschitz * space.dist(x, a) };
            ball = tree.ball_intersect(ball, next).ok_or_else(|| {
                Error::Internal(format!("empty ball intersection while placing point {x} (at {a})"))
            })?;
        }
        values[x] = tree.subdivide(ball.center);
        done.push(x);
    }
    Ok(TreeExtension { tree, values, lipschitz })
}

/// Pairwise audit of an extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionAudit {
    /// Largest distance between `phi(a)` and the extension at `a` over `A`.
    pub agreement_error: f64,
    /// Largest `d_T / d_X` over all pairs.
    pub measured_lipschitz: f64,
    pub lipschitz: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pass: bool,
}

pub fn audit_extension(space: &MetricSpace, subset: &[usize], phi: &[RTreePoint], original: &RTree, ext: &TreeExtension) -> ExtensionAudit {
    let n = space.len();
    let agreement_error = subset
        .iter()
        .zip(phi)
        .map(|(&a, &p)| {
            // Compare against a distinguished vertex present in both trees.
            let before = original.dist(p, RTreePoint::vertex(0));
            let after = ext.tree.dist(RTreePoint::vertex(ext.values[a]), RTreePoint::vertex(0));
            let moved = ext.tree.relocate(p);
            (before - after).abs().max(ext.tree.dist(moved, RTreePoint::vertex(ext.values[a])))
        })
        .fold(0.0, f64::max);
    let (measured, worst) = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best = (0.0f64, None);
            for y in x + 1..n {
                let r = ext.tree.vertex_dist(ext.values[x], ext.values[y]) / space.dist(x, y);
                if r > best.0 {
                    best = (r, Some((x, y)));
                }
            }
            best
        })
        .reduce(|| (0.0, None), |a, b| if b.0 > a.0 { b } else { a });
    let pass = agreement_error <= 1e-9 && measured <= ext.lipschitz * (1.0 + 1e-9) + 1e-12;
    ExtensionAudit { agreement_error, measured_lipschitz: measured, lipschitz: ext.lipschitz, worst_pair: worst, pass }
}

/// A random extension problem: a graph metric, a weighted tree, a subset
/// and the restriction of a random tree-valued map with its Lipschitz
/// constant.
#[derive(Debug, Clone)]
pub struct ExtensionInstance {
    pub space: MetricSpace,
    pub tree: RTree,
    pub subset: Vec<usize>,
    pub phi: Vec<RTreePoint>,
    pub lipschitz: f64,
}

fn random_tree_graph<R: Rng>(r: &mut R, n: usize, extra: usize) -> WeightedGraph {
    let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (r.random_range(0..v), v, r.random_range(0.2..3.0))).collect();
    for _ in 0..extra {
        let (u, v) = (r.random_range(0..n), r.random_range(0..n));
        if u != v && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
            edges.push((u, v, r.random_range(0.2..3.0)));
        }
    }
    WeightedGraph::new(n, edges).expect("random graph is valid")
}

/// Instance `index` of the stream `seed`.
pub fn random_extension_instance(seed: u64, index: u64) -> ExtensionInstance {
    let mut r = rng::stream(seed, index);
    let n = r.random_range(3..=14);
    let extra = r.random_range(0..=n);
    let g = random_tree_graph(&mut r, n, extra);
    let space = shortest_path_metric(&g).expect("connected by construction");
    let m = r.random_range(2..=10);
    let tree = RTree::from_graph(&random_tree_graph(&mut r, m, 0)).expect("a tree by construction");
    let psi: Vec<RTreePoint> = (0..n)
        .map(|_| {
            let v = r.random_range(0..m);
            if v == 0 || r.random_bool(0.4) {
                RTreePoint::vertex(v)
            } else {
                tree.normalize(RTreePoint { vertex: v, up: r.random_range(0.0..tree.edge_length(v)) })
            }
        })
        .collect();
    let mut lipschitz = 0.0f64;
    for x in 0..n {
        for y in x + 1..n {
            lipschitz = lipschitz.max(tree.dist(psi[x], psi[y]) / space.dist(x, y));
        }
    }
    let mut subset: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
    if subset.is_empty() {
        subset.push(r.random_range(0..n));
    }
    let phi = subset.iter().map(|&a| psi[a]).collect();
    ExtensionInstance { space, tree, subset, phi, lipschitz }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_midpoint() {
        let x = MetricSpace::from_matrix(vec![vec![0.0, 2.0, 1.0], vec![2.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let t = RTree::segment(2.0).unwrap();
        let ext = lipschitz_extend_to_tree(&x, &[0, 1], &[RTreePoint::vertex(0), RTreePoint::vertex(1)], 1.0, &t).unwrap();
        assert!((ext.tree.vertex_dist(ext.values[2], 0) - 1.0).abs() < 1e-12);
        assert!((ext.tree.vertex_dist(ext.values[2], 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_subset_is_unchanged() {
        let x = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let t = RTree::segment(5.0).unwrap();
        let phi = [RTreePoint::vertex(0), t.point_on_edge(0, 1, 1.0).unwrap(), t.point_on_edge(0, 1, 3.0).unwrap()];
        let ext = lipschitz_extend_to_tree(&x, &[0, 1, 2], &phi, 1.0, &t).unwrap();
        let a = audit_extension(&x, &[0, 1, 2], &phi, &t, &ext);
        assert!(a.pass && a.agreement_error < 1e-12, "{a:?}");
    }

    #[test]
    fn rejects_non_lipschitz_data() {
        let x = MetricSpace::line(&[0.0, 1.0]).unwrap();
        let t = RTree::segment(5.0).unwrap();
        let r = lipschitz_extend_to_tree(&x, &[0, 1], &[RTreePoint::vertex(0), RTreePoint::vertex(1)], 1.0, &t);
        assert!(matches!(r, Err(Error::NotLipschitz(0, 1, _))));
    }

    #[test]
    fn random_instances_extend() {
        for k in 0..60 {
            let inst = random_extension_instance(17, k);
            let ext = lipschitz_extend_to_tree(&inst.space, &inst.subset, &inst.phi, inst.lipschitz, &inst.tree).unwrap();
            let a = audit_extension(&inst.space, &inst.subset, &inst.phi, &inst.tree, &ext);
            assert!(a.pass, "instance {k}: {a:?}");
        }
    }
}
