//! Gromov products, the hyperbolicity constant of a finite metric space and
//! the chaining inequalities that bound Markov type in hyperbolic targets.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::ReversibleChain;
use crate::config::{caps, le_with_slack};
use crate::error::{Error, Result};
use crate::markov_type::{pair_moment, PointMap};
use crate::metric::MetricSpace;

/// `<x|y>_r = (d(x,r) + d(y,r) - d(x,y)) / 2`.
pub fn gromov_product(space: &MetricSpace, x: usize, y: usize, r: usize) -> f64 {
    (space.dist(x, r) + space.dist(y, r) - space.dist(x, y)) / 2.0
}

/// Smallest `delta` for which the space is `delta`-hyperbolic, with a
/// quadruple `(x, y, z, r)` attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub delta: f64,
    pub witness: (usize, usize, usize, usize),
}

/// `max over (x,y,z,r) of min{<x|z>_r, <y|z>_r} - <x|y>_r`, floored at 0.
///
/// Ties are broken towards the lexicographically smallest `(x, y, z, r)`,
/// so the witness does not depend on the thread count. When the space is
/// 0-hyperbolic the witness is `(0, 0, 0, 0)`.
pub fn min_delta(space: &MetricSpace) -> Result<HyperbolicityReport> {
    let n = space.len();
    if n > caps().delta_points {
        return Err(Error::CapExceeded { what: "hyperbolicity scan", requested: n as u128, cap: caps().delta_points as u128 });
    }
    let d: Vec<f64> = (0..n * n).into_par_iter().map(|k| space.dist(k / n, k % n)).collect();
    // Nonnegative doubles order like their bit patterns.
    let best = AtomicU64::new(0f64.to_bits());
    let per_root: Vec<(f64, (usize, usize, usize, usize))> = (0..n)
        .into_par_iter()
        .map(|r| {
            let g: Vec<f64> = (0..n * n).map(|k| (d[k / n * n + r] + d[k % n * n + r] - d[k]) / 2.0).collect();
            let row_max: Vec<f64> = (0..n).map(|x| g[x * n..(x + 1) * n].iter().cloned().fold(f64::MIN, f64::max)).collect();
            let mut local = (0.0f64, (0usize, 0usize, 0usize, r));
            for x in 0..n {
                for y in x..n {
                    let gxy = g[x * n + y];
                    let shared = f64::from_bits(best.load(Ordering::Relaxed)).max(local.0);
                    if row_max[x].min(row_max[y]) - gxy < shared {
                        continue;
                    }
                    for z in 0..n {
                        let v = g[x * n + z].min(g[y * n + z]) - gxy;
                        if v > local.0 {
                            local = (v, (x, y, z, r));
                        }
                    }
                }
            }
            best.fetch_max(local.0.to_bits(), Ordering::Relaxed);
            local
        })
        .collect();
    let mut out = HyperbolicityReport { delta: 0.0, witness: (0, 0, 0, 0) };
    for (v, w) in per_root {
        if v > out.delta || (v == out.delta && v > 0.0 && w < out.witness) {
            out = HyperbolicityReport { delta: v, witness: w };
        }
    }
    Ok(out)
}

/// Both chaining inequalities along a sequence `x_0..x_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainingCheck {
    pub m: usize,
    /// `ceil(log2 m)`.
    pub k: u32,
    /// `<x_0|x_m>_r` against `min_i <x_i|x_{i+1}>_r - k delta`.
    pub product_lhs: f64,
    pub product_rhs: f64,
    /// `d(x_0,x_m)^2` against the four-term bound.
    pub square_lhs: f64,
    pub square_rhs: f64,
    pub pass: bool,
}

fn ceil_log2(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

/// Check the Gromov-product chaining bound and its squared consequence for
/// the points `path` with base point `r`, given a hyperbolicity constant.
pub fn chaining_bound_check(space: &MetricSpace, r: usize, path: &[usize], delta: f64) -> Result<ChainingCheck> {
    if path.len() < 2 {
        return Err(Error::Parameter("a chain needs at least two points".into()));
    }
    if let Some(&x) = path.iter().chain([&r]).find(|&&x| x >= space.len()) {
        return Err(Error::Parameter(format!("point {x} outside the space")));
    }
    if !(delta >= 0.0) {
        return Err(Error::Parameter(format!("delta must be nonnegative, got {delta}")));
    }
    let m = path.len() - 1;
    let k = ceil_log2(m);
    let (x0, xm) = (path[0], path[m]);
    let product_lhs = gromov_product(space, x0, xm, r);
    let min_adjacent = path.windows(2).map(|w| gromov_product(space, w[0], w[1], r)).fold(f64::INFINITY, f64::min);
    let product_rhs = min_adjacent - k as f64 * delta;
    let dr = |x: usize| space.dist(x, r);
    let head = (0..m).map(|j| (dr(x0) - dr(path[j])).powi(2)).fold(0.0, f64::max);
    let tail = (1..=m).map(|j| (dr(xm) - dr(path[j])).powi(2)).fold(0.0, f64::max);
    let steps: f64 = path.windows(2).map(|w| space.dist(w[0], w[1]).powi(2)).sum();
    let square_lhs = space.dist(x0, xm).powi(2);
    let square_rhs = 4.0 * head + 4.0 * tail + 4.0 * steps + 16.0 * (delta * k as f64).powi(2);
    let pass = le_with_slack(product_rhs, product_lhs) && le_with_slack(square_lhs, square_rhs);
    Ok(ChainingCheck { m, k, product_lhs, product_rhs, square_lhs, square_rhs, pass })
}

/// `E d(f(Z_t),f(Z_0))^2` against `C^2 t E_1 + C^2 delta^2 (log t)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicTypeCheck {
    pub t: u64,
    pub c: f64,
    pub delta: f64,
    pub lhs: f64,
    pub e_1: f64,
    /// Natural logarithm; decides `pass`.
    pub rhs: f64,
    pub pass: bool,
    /// Same bound with `log2 t`, reported only.
    pub rhs_log2: f64,
    pub pass_log2: bool,
}

/// Markov type inequality for a hyperbolic target. `delta` defaults to
/// [`min_delta`] of `space`.
pub fn hyperbolic_type_check(
    c: &ReversibleChain,
    space: &MetricSpace,
    f: &PointMap,
    t: u64,
    constant: f64,
    delta: Option<f64>,
) -> Result<HyperbolicTypeCheck> {
    if t < 1 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    let delta = match delta {
        Some(d) if d >= 0.0 => d,
        Some(d) => return Err(Error::Parameter(format!("delta must be nonnegative, got {d}"))),
        None => min_delta(space)?.delta,
    };
    let lhs = pair_moment(c, space, f, 2.0, t)?;
    let e_1 = pair_moment(c, space, f, 2.0, 1)?;
    let c2 = constant * constant;
    let tf = t as f64;
    let rhs = c2 * tf * e_1 + c2 * delta * delta * tf.ln().powi(2);
    let rhs_log2 = c2 * tf * e_1 + c2 * delta * delta * tf.log2().powi(2);
    Ok(HyperbolicTypeCheck {
        t,
        c: constant,
        delta,
        lhs,
        e_1,
        rhs,
        pass: le_with_slack(lhs, rhs),
        rhs_log2,
        pass_log2: le_with_slack(lhs, rhs_log2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{shortest_path_metric, Laakso, WeightedGraph};

    fn four_point_delta(s: &MetricSpace) -> f64 {
        let n = s.len();
        let mut best = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let mut sums = [
                            s.dist(x, y) + s.dist(z, w),
                            s.dist(x, z) + s.dist(y, w),
                            s.dist(x, w) + s.dist(y, z),
                        ];
                        sums.sort_by(|a, b| b.partial_cmp(a).unwrap());
                        best = best.max((sums[0] - sums[1]) / 2.0);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn gromov_examples() {
        let line = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(gromov_product(&line, 0, 2, 1), 0.0);
        assert_eq!(gromov_product(&line, 2, 2, 0), 2.0);
        let star = shortest_path_metric(&WeightedGraph::unit(3, &[(0, 1), (0, 2)]).unwrap()).unwrap();
        assert_eq!(gromov_product(&star, 1, 2, 0), 0.0);
    }

    #[test]
    fn cycle_and_trees() {
        let c4 = shortest_path_metric(&WeightedGraph::cycle(4).unwrap()).unwrap();
        let r = min_delta(&c4).unwrap();
        assert_eq!(r.delta, 1.0);
        assert_eq!(four_point_delta(&c4), 1.0);
        let (x, y, z, w) = r.witness;
        let g = |a, b| gromov_product(&c4, a, b, w);
        assert_eq!(g(x, z).min(g(y, z)) - g(x, y), 1.0);
        let tree = shortest_path_metric(&WeightedGraph::unit(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap()).unwrap();
        assert_eq!(min_delta(&tree).unwrap(), HyperbolicityReport { delta: 0.0, witness: (0, 0, 0, 0) });
        let three = MetricSpace::from_matrix(vec![vec![0.0, 1.0, 1.5], vec![1.0, 0.0, 2.0], vec![1.5, 2.0, 0.0]]).unwrap();
        assert_eq!(min_delta(&three).unwrap().delta, 0.0);
    }

    #[test]
    fn agrees_with_four_point_form() {
        for n in [5, 6, 7, 9] {
            let g = WeightedGraph::cycle(n).unwrap();
            let m = shortest_path_metric(&g).unwrap();
            assert!((min_delta(&m).unwrap().delta - four_point_delta(&m)).abs() < 1e-12);
        }
        let grid = shortest_path_metric(&WeightedGraph::grid(3, 4)).unwrap();
        assert!((min_delta(&grid).unwrap().delta - four_point_delta(&grid)).abs() < 1e-12);
    }

    #[test]
    fn laakso_is_not_a_tree() {
        for k in 1..=2 {
            assert!(min_delta(Laakso::new(k).unwrap().metric()).unwrap().delta > 0.0);
        }
    }

    #[test]
    fn chaining_examples() {
        let path = shortest_path_metric(&WeightedGraph::path(9)).unwrap();
        let walk: Vec<usize> = (0..9).collect();
        let r = chaining_bound_check(&path, 3, &walk, 0.0).unwrap();
        assert!(r.pass && r.k == 3);
        let r = chaining_bound_check(&path, 3, &[2, 7], 0.0).unwrap();
        assert_eq!((r.k, r.product_lhs, r.product_rhs), (0, r.product_rhs, r.product_lhs));
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }

    #[test]
    fn type_check_examples() {
        let (x, _) = crate::markov_type::real_map(&[0.0, 1.0]).unwrap();
        let f = PointMap::identity(2);
        let r = hyperbolic_type_check(&ReversibleChain::flip(), &x, &f, 3, 30.0, Some(0.0)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (1.0, 2700.0, true));
        let r = hyperbolic_type_check(&ReversibleChain::flip(), &x, &PointMap::new(vec![0, 0], 2).unwrap(), 5, 30.0, None).unwrap();
        assert_eq!(r.lhs, 0.0);
    }
}
