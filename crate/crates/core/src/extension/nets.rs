//! Nets, separated partitions and the distance-to-class coordinates used to
//! bound weak Markov type of doubling spaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

fn order_or_identity(space: &MetricSpace, order: Option<&[usize]>) -> Result<Vec<usize>> {
    match order {
        None => Ok((0..space.len()).collect()),
        Some(o) => {
            let mut seen = vec![false; space.len()];
            for &x in o {
                if x >= space.len() || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Parameter(format!("order is not a list of distinct points (at {x})")));
                }
            }
            Ok(o.to_vec())
        }
    }
}

fn greedy(space: &MetricSpace, r: f64, order: Option<&[usize]>, strict: bool) -> Result<Vec<usize>> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("net radius must be positive, got {r}")));
    }
    let order = order_or_identity(space, order)?;
    let mut net: Vec<usize> = Vec::new();
    for x in order {
        let far = net.iter().all(|&a| {
            let d = space.dist(a, x);
            if strict {
                d > r
            } else {
                d >= r
            }
        });
        if far {
            net.push(x);
        }
    }
    Ok(net)
}

/// Maximal `r`-separated subset (pairwise distance `>= r`), built greedily
/// in `order` (ascending index when `None`). Every point is within `< r`.
pub fn greedy_net(space: &MetricSpace, r: f64, order: Option<&[usize]>) -> Result<Vec<usize>> {
    greedy(space, r, order, false)
}

/// Maximal subset with pairwise distances `> r`; every point is within `<= r`.
pub fn greedy_net_strict(space: &MetricSpace, r: f64, order: Option<&[usize]>) -> Result<Vec<usize>> {
    greedy(space, r, order, true)
}

/// Smallest pairwise distance within `set` (infinite for fewer than 2 points).
pub fn separation(space: &MetricSpace, set: &[usize]) -> f64 {
    set.iter()
        .enumerate()
        .flat_map(|(i, &a)| set[i + 1..].iter().map(move |&b| space.dist(a, b)))
        .fold(f64::INFINITY, f64::min)
}

/// Largest distance from a point of the space to `set`.
pub fn covering_radius(space: &MetricSpace, set: &[usize]) -> f64 {
    (0..space.len()).into_par_iter().map(|x| space.dist_to_set(x, set)).reduce(|| 0.0, f64::max)
}

/// Classes of net points, each pairwise farther apart than `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatedPartition {
    pub classes: Vec<Vec<usize>>,
    pub threshold: f64,
    /// Largest degree of the proximity graph.
    pub max_degree: usize,
}

impl SeparatedPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Greedy coloring, in net order, of the graph joining net points at
/// distance `<= threshold`.
pub fn separated_partition(net: &[usize], space: &MetricSpace, threshold: f64) -> Result<SeparatedPartition> {
    if net.iter().any(|&a| a >= space.len()) {
        return Err(Error::Parameter("net point outside the space".into()));
    }
    let k = net.len();
    let adjacency: Vec<Vec<usize>> = (0..k)
        .into_par_iter()
        .map(|i| (0..k).filter(|&j| j != i && space.dist(net[i], net[j]) <= threshold).collect())
        .collect();
    let max_degree = adjacency.iter().map(|a| a.len()).max().unwrap_or(0);
    let mut color = vec![usize::MAX; k];
    for i in 0..k {
        let mut used = vec![false; max_degree + 1];
        for &j in &adjacency[i] {
            if color[j] <= max_degree {
                used[color[j]] = true;
            }
        }
        color[i] = used.iter().position(|u| !u).expect("degree + 1 colors suffice");
    }
    let count = color.iter().max().map_or(0, |c| c + 1);
    let mut classes = vec![Vec::new(); count];
    for (i, &c) in color.iter().enumerate() {
        classes[c].push(net[i]);
    }
    Ok(SeparatedPartition { classes, threshold, max_degree })
}

/// Coordinates `f_j(x) = d(x, A_j)` and the audit of their separation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetFamilyAudit {
    pub r: f64,
    /// `values[j][x] = d(x, A_j)`.
    #[serde(skip)]
    pub values: Vec<Vec<f64>>,
    /// Pairs with `d(x,y)` in `[3R, 4R]`.
    pub pairs_checked: usize,
    /// Smallest `max_j |f_j(x) - f_j(y)|` over those pairs.
    pub min_gap: f64,
    pub min_gap_pair: Option<(usize, usize)>,
    /// Pairs whose best coordinate gap also reaches `2R`.
    pub pairs_with_gap_2r: usize,
    /// Largest `|f_j(x) - f_j(y)| / d(x,y)` over all pairs.
    pub lipschitz: f64,
}

/// Evaluate `f_j = d(., A_j)` and check that every pair at distance in
/// `[3R, 4R]` is separated by some coordinate by at least `R`.
///
/// A failed audit contradicts the construction and is an
/// [`Error::Internal`].
pub fn net_distance_family(space: &MetricSpace, part: &SeparatedPartition, r: f64) -> Result<NetFamilyAudit> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("R must be positive, got {r}")));
    }
    let n = space.len();
    let values: Vec<Vec<f64>> = part.classes.iter().map(|a| (0..n).map(|x| space.dist_to_set(x, a)).collect()).collect();
    let rows: Vec<(usize, f64, Option<(usize, usize)>, usize, f64)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let (mut count, mut gap, mut pair, mut twice, mut lip) = (0, f64::INFINITY, None, 0, 0.0f64);
            for y in x + 1..n {
                let d = space.dist(x, y);
                let best = values.iter().map(|f| (f[x] - f[y]).abs()).fold(0.0, f64::max);
                lip = lip.max(best / d);
                if d >= 3.0 * r && d <= 4.0 * r {
                    count += 1;
                    if best < gap {
                        gap = best;
                        pair = Some((x, y));
                    }
                    if best >= 2.0 * r {
                        twice += 1;
                    }
                }
            }
            (count, gap, pair, twice, lip)
        })
        .collect();
    let mut audit = NetFamilyAudit {
        r,
        values,
        pairs_checked: 0,
        min_gap: f64::INFINITY,
        min_gap_pair: None,
        pairs_with_gap_2r: 0,
        lipschitz: 0.0,
    };
    for (count, gap, pair, twice, lip) in rows {
        audit.pairs_checked += count;
        audit.pairs_with_gap_2r += twice;
        audit.lipschitz = audit.lipschitz.max(lip);
        if gap < audit.min_gap {
            audit.min_gap = gap;
            audit.min_gap_pair = pair;
        }
    }
    if audit.lipschitz > 1.0 + 1e-9 {
        return Err(Error::Internal(format!("a distance coordinate has Lipschitz constant {}", audit.lipschitz)));
    }
    if audit.pairs_checked > 0 && audit.min_gap < r * (1.0 - 1e-12) {
        let (x, y) = audit.min_gap_pair.unwrap();
        return Err(Error::Internal(format!("pair ({x}, {y}) is separated by only {} < R = {r}", audit.min_gap)));
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{shortest_path_metric, WeightedGraph};

    #[test]
    fn net_examples() {
        let line = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(greedy_net(&line, 1.5, None).unwrap(), vec![0, 2]);
        assert_eq!(greedy_net(&line, 5.0, Some(&[1, 0, 2])).unwrap(), vec![1]);
        assert_eq!(greedy_net(&line, 1.0, None).unwrap(), vec![0, 1, 2]);
        assert_eq!(greedy_net_strict(&line, 1.0, None).unwrap(), vec![0, 2]);
        assert!(greedy_net(&line, 0.0, None).is_err());
    }

    #[test]
    fn nets_separate_and_cover() {
        let grid = shortest_path_metric(&WeightedGraph::grid(7, 9)).unwrap();
        for r in [1.0, 2.0, 3.5] {
            let net = greedy_net(&grid, r, None).unwrap();
            assert!(separation(&grid, &net) >= r && covering_radius(&grid, &net) < r);
            let strict = greedy_net_strict(&grid, r, None).unwrap();
            assert!(separation(&grid, &strict) > r && covering_radius(&grid, &strict) <= r);
        }
    }

    #[test]
    fn partition_examples() {
        let ints = MetricSpace::line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let net: Vec<usize> = (0..6).collect();
        assert_eq!(separated_partition(&net, &ints, 0.5).unwrap().len(), 1);
        let part = separated_partition(&net, &ints, 2.4).unwrap();
        assert_eq!(part.classes, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert!(part.len() <= part.max_degree + 1);
        for class in &part.classes {
            assert!(separation(&ints, class) > 2.4);
        }
    }

    #[test]
    fn distance_family_on_grid() {
        let grid = shortest_path_metric(&WeightedGraph::grid(12, 12)).unwrap();
        let r = 1.0;
        let net = greedy_net(&grid, r, None).unwrap();
        let part = separated_partition(&net, &grid, 16.0 * r).unwrap();
        let audit = net_distance_family(&grid, &part, r).unwrap();
        assert!(audit.pairs_checked > 0 && audit.min_gap >= r);
        let a = part.classes[0][0];
        assert_eq!(audit.values[0][a], 0.0);
    }
}
