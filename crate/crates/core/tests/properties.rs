use markov_type_lab::experiments::random::{random_chain, random_tree, random_vectors};
use markov_type_lab::extension::{tree_ball_intersect, RTree, RTreePoint, TreeBall};
use markov_type_lab::hyperbolic::min_delta;
use markov_type_lab::markov_type::{real_map, weak_type_tail};
use markov_type_lab::martingale::{
    convexity_two_point_check, decompose_states, smoothness_two_point_check, verify_identity, ConvexitySpec,
    SmoothnessSpec,
};
use markov_type_lab::metric::{shortest_path_metric, snowflake};
use markov_type_lab::{rng, WeightedGraph};
use proptest::prelude::*;
use rand::Rng;

fn connected_graph(seed: u64, n: usize, extra: usize) -> WeightedGraph {
    let mut r = rng::stream(seed, 0);
    let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (r.random_range(0..v), v, r.random_range(0.5..3.0))).collect();
    for _ in 0..extra {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b && !edges.iter().any(|e| (e.0.min(e.1), e.0.max(e.1)) == (a.min(b), a.max(b))) {
            edges.push((a, b, r.random_range(0.5..3.0)));
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shortest_path_metrics_satisfy_the_axioms(seed in any::<u64>(), n in 2usize..25, extra in 0usize..12) {
        let m = shortest_path_metric(&connected_graph(seed, n, extra)).unwrap();
        prop_assert!(m.validate().is_ok());
    }

    #[test]
    fn snowflake_preserves_the_order_of_distances(seed in any::<u64>(), n in 3usize..15, eps in 0.05f64..0.95) {
        let m = shortest_path_metric(&connected_graph(seed, n, 5)).unwrap();
        let s = snowflake(&m, eps).unwrap();
        prop_assert!(s.validate().is_ok());
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            for (c, d) in [(0, n - 1), (1, n - 1)] {
                if m.dist(a, b) < m.dist(c, d) {
                    prop_assert!(s.dist(a, b) < s.dist(c, d));
                }
            }
        }
    }

    #[test]
    fn delta_scales_linearly(seed in any::<u64>(), n in 3usize..12, factor in 0.1f64..10.0) {
        let m = shortest_path_metric(&connected_graph(seed, n, 4)).unwrap();
        let d = min_delta(&m).unwrap().delta;
        let ds = min_delta(&m.scaled(factor).unwrap()).unwrap().delta;
        prop_assert!((ds - factor * d).abs() <= 1e-9 * (1.0 + factor * d));
    }

    #[test]
    fn powers_keep_detailed_balance(seed in any::<u64>(), n in 2usize..10, t in 1u64..40) {
        let c = random_chain(&mut rng::stream(seed, 1), n, 0.5);
        let at = c.t_step(t).unwrap();
        let pi = c.stationary();
        for i in 0..n {
            prop_assert!(((0..n).map(|j| at[(i, j)]).sum::<f64>() - 1.0).abs() < 1e-9);
            for j in 0..n {
                prop_assert!((pi[i] * at[(i, j)] - pi[j] * at[(j, i)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weak_tail_is_below_chebyshev(seed in any::<u64>(), n in 2usize..8, t in 1u64..30, zeta in 0.01f64..5.0) {
        let mut r = rng::stream(seed, 2);
        let c = random_chain(&mut r, n, 0.7);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let (space, f) = real_map(&x).unwrap();
        let w = weak_type_tail(&c, &space, &f, t, zeta).unwrap();
        prop_assert!(w.probability <= w.chebyshev * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn random_transcripts_satisfy_the_identity(seed in any::<u64>(), n in 2usize..10, t in 2usize..30) {
        let mut r = rng::stream(seed, 3);
        let c = random_chain(&mut r, n, 0.6);
        let f = random_vectors(&mut r, n, 3);
        let traj = c.sample_trajectory(t, seed, 0).unwrap();
        let tr = decompose_states(&c, &f, &traj.states).unwrap();
        prop_assert!(verify_identity(&tr).pass);
    }

    #[test]
    fn two_point_inequalities(
        x in prop::collection::vec(-10.0f64..10.0, 1..6),
        y in prop::collection::vec(-10.0f64..10.0, 1..6),
        p_smooth in 2.0f64..12.0,
        p_convex in 1.05f64..2.0,
    ) {
        let k = x.len().min(y.len());
        let (x, y) = (&x[..k], &y[..k]);
        prop_assert!(smoothness_two_point_check(x, y, SmoothnessSpec::lp(p_smooth).unwrap(), p_smooth).unwrap().pass);
        prop_assert!(convexity_two_point_check(x, y, ConvexitySpec::lp(p_convex).unwrap(), p_convex).unwrap().pass);
    }

    /// Pairwise intersecting balls in a tree have a common point, and the
    /// folded intersection is exactly the set of common points (checked on
    /// a fine grid of tree points).
    #[test]
    fn helly_property_in_trees(seed in any::<u64>(), n in 2usize..15, k in 2usize..6) {
        let mut r = rng::stream(seed, 4);
        let tree = RTree::from_graph(&random_tree(&mut r, n, false, 0)).unwrap();
        let edges = tree.edges();
        let random_point = |r: &mut rand_chacha::ChaCha8Rng| {
            let (u, v, len) = edges[r.random_range(0..edges.len())];
            tree.point_on_edge(u, v, r.random_range(0.0..=len)).unwrap()
        };
        let centers: Vec<RTreePoint> = (0..k).map(|_| random_point(&mut r)).collect();
        let mut radii: Vec<f64> = (0..k).map(|_| r.random_range(0.1..2.0)).collect();
        // Grow radii until the balls pairwise meet.
        for i in 0..k {
            for j in 0..k {
                let need = tree.dist(centers[i], centers[j]) - radii[j];
                if radii[i] < need {
                    radii[i] = need;
                }
            }
        }
        let balls: Vec<TreeBall> = centers.iter().zip(&radii).map(|(&c, &rad)| TreeBall::new(c, rad).unwrap()).collect();
        let mut acc = Some(balls[0]);
        for b in &balls[1..] {
            acc = acc.and_then(|a| tree_ball_intersect(a, *b, &tree));
        }
        let meet = acc.expect("pairwise intersecting balls in a tree share a point");
        let tol = 1e-7;
        for b in &balls {
            prop_assert!(b.contains(&tree, meet.center, tol));
        }
        for (u, v, len) in &edges {
            for s in 0..=16 {
                let p = tree.point_on_edge(*u, *v, len * s as f64 / 16.0).unwrap();
                let in_all = balls.iter().all(|b| b.contains(&tree, p, 0.0));
                if in_all {
                    prop_assert!(meet.contains(&tree, p, tol));
                }
                if meet.contains(&tree, p, 0.0) {
                    prop_assert!(balls.iter().all(|b| b.contains(&tree, p, tol)));
                }
            }
        }
    }
}
