//! Finite metric spaces and the example families used throughout the crate.
//!
//! A [`MetricSpace`] is a point count plus a distance oracle. Small spaces
//! store an explicit matrix; structured families (Hamming cubes, `l_p` point
//! sets, products, snowflakes) evaluate distances from a formula so that no
//! quadratic storage is needed.

mod embedding;
mod families;
mod graph;

pub use embedding::{cube_lower_bound, distortion, girth_lower_bound, EmbeddingMap, LowerBound};
pub use families::{hamming_cube, laakso_graph, product_metric, snowflake, Laakso};
pub use graph::{girth, shortest_path_metric, Girth, WeightedGraph};

use std::sync::Arc;

use rayon::prelude::*;

use crate::config::caps;
use crate::error::{Error, Result};

/// `l_p` norm of a vector, `p in [1, inf)`.
pub fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `||x - y||_p`.
pub fn lp_dist(x: &[f64], y: &[f64], p: f64) -> f64 {
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    lp_norm(&diff, p)
}

/// A finite set of vectors in `l_p^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpPointSet {
    p: f64,
    points: Vec<Vec<f64>>,
}

impl LpPointSet {
    /// Points must share a dimension and be pairwise distinct.
    pub fn new(p: f64, points: Vec<Vec<f64>>) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("l_p exponent must lie in [1, inf), got {p}")));
        }
        if points.is_empty() {
            return Err(Error::Parameter("l_p point set is empty".into()));
        }
        let dim = points[0].len();
        if let Some(bad) = points.iter().position(|x| x.len() != dim) {
            return Err(Error::Parameter(format!(
                "point {bad} has dimension {}, expected {dim}",
                points[bad].len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("non-finite coordinate".into()));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::MetricAxiom(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(LpPointSet { p, points })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        lp_dist(&self.points[i], &self.points[j], self.p)
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Matrix(Arc<Vec<f64>>),
    Hamming { dim: u32 },
    Lp(Arc<LpPointSet>),
    /// Index `i = a * right.len() + b` for the pair `(a, b)`.
    Product {
        left: Arc<MetricSpace>,
        right: Arc<MetricSpace>,
    },
    Power {
        inner: Arc<MetricSpace>,
        exponent: f64,
    },
    Scaled {
        inner: Arc<MetricSpace>,
        factor: f64,
    },
}

/// A finite metric space on points `0..len()`.
///
/// Immutable once built; cloning is cheap because every representation is
/// reference counted.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    n: usize,
    repr: Repr,
}

impl MetricSpace {
    /// Explicit space from a full distance matrix, validated exhaustively.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parameter("empty distance matrix".into()));
        }
        if n > caps().validation {
            return Err(Error::CapExceeded {
                what: "explicit matrix validation",
                requested: n as u128,
                cap: caps().validation as u128,
            });
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Parameter(format!("row {bad} has {} entries, expected {n}", rows[bad].len())));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let space = MetricSpace { n, repr: Repr::Matrix(Arc::new(flat)) };
        space.validate()?;
        Ok(space)
    }

    /// Explicit space whose axioms hold by construction (graph metrics).
    /// Only the cheap pointwise axioms are checked here.
    pub(crate) fn from_flat_trusted(n: usize, flat: Vec<f64>) -> Self {
        debug_assert_eq!(flat.len(), n * n);
        MetricSpace { n, repr: Repr::Matrix(Arc::new(flat)) }
    }

    pub(crate) fn lazy_hamming(dim: u32) -> Self {
        MetricSpace { n: 1usize << dim, repr: Repr::Hamming { dim } }
    }

    /// The `l_p` metric on a point set (lazy).
    pub fn from_lp(set: LpPointSet) -> Self {
        MetricSpace { n: set.len(), repr: Repr::Lp(Arc::new(set)) }
    }

    /// Points of the real line with `|x - y|`.
    pub fn line(points: &[f64]) -> Result<Self> {
        Ok(Self::from_lp(LpPointSet::new(1.0, points.iter().map(|&x| vec![x]).collect())?))
    }

    pub(crate) fn lazy_product(left: MetricSpace, right: MetricSpace) -> Self {
        MetricSpace {
            n: left.n * right.n,
            repr: Repr::Product { left: Arc::new(left), right: Arc::new(right) },
        }
    }

    pub(crate) fn lazy_power(inner: MetricSpace, exponent: f64) -> Self {
        MetricSpace { n: inner.n, repr: Repr::Power { inner: Arc::new(inner), exponent } }
    }

    /// Every distance multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Parameter(format!("scale factor must be positive, got {factor}")));
        }
        Ok(MetricSpace { n: self.n, repr: Repr::Scaled { inner: Arc::new(self.clone()), factor } })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Matrix(_))
    }

    /// Hamming dimension when this space is a cube.
    pub fn cube_dim(&self) -> Option<u32> {
        match self.repr {
            Repr::Hamming { dim } => Some(dim),
            _ => None,
        }
    }

    /// Underlying point set when this space is an `l_p` set.
    pub fn lp_points(&self) -> Option<&LpPointSet> {
        match &self.repr {
            Repr::Lp(s) => Some(s),
            _ => None,
        }
    }

    /// Distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.repr {
            Repr::Matrix(m) => m[i * self.n + j],
            Repr::Hamming { .. } => ((i ^ j) as u64).count_ones() as f64,
            Repr::Lp(s) => s.dist(i, j),
            Repr::Product { left, right } => {
                let m = right.n;
                left.dist(i / m, j / m) + right.dist(i % m, j % m)
            }
            Repr::Power { inner, exponent } => inner.dist(i, j).powf(*exponent),
            Repr::Scaled { inner, factor } => inner.dist(i, j) * factor,
        }
    }

    /// Index of the product point `(a, b)`; only meaningful for products.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        match &self.repr {
            Repr::Product { right, .. } => Some(a * right.n + b),
            _ => None,
        }
    }

    /// Explicit copy of this space. Refused above the explicit-size cap and,
    /// for cubes, above the cube-dimension cap.
    pub fn materialize(&self) -> Result<MetricSpace> {
        if let Repr::Matrix(_) = self.repr {
            return Ok(self.clone());
        }
        if let Repr::Hamming { dim } = self.repr {
            if dim > caps().cube_dim {
                return Err(Error::CapExceeded {
                    what: "Hamming cube materialization (dimension)",
                    requested: dim as u128,
                    cap: caps().cube_dim as u128,
                });
            }
        }
        if self.n > caps().explicit_points {
            return Err(Error::CapExceeded {
                what: "explicit distance matrix",
                requested: self.n as u128,
                cap: caps().explicit_points as u128,
            });
        }
        let n = self.n;
        let flat: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .collect();
        Ok(MetricSpace::from_flat_trusted(n, flat))
    }

    pub fn diameter(&self) -> f64 {
        (0..self.n)
            .into_par_iter()
            .map(|i| (0..self.n).map(|j| self.dist(i, j)).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    /// Check the metric axioms: zero diagonal, symmetry, positivity off the
    /// diagonal, and (for `len() <= validation cap`) the triangle inequality
    /// with additive slack `1e-9 * diameter`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let mut max_d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = self.dist(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::MetricAxiom(format!("d({i},{j}) = {d} is not a nonnegative real")));
                }
                max_d = max_d.max(d);
            }
        }
        let tol = 1e-9 * max_d.max(1e-300);
        for i in 0..n {
            if self.dist(i, i) != 0.0 {
                return Err(Error::MetricAxiom(format!("d({i},{i}) = {} != 0", self.dist(i, i))));
            }
            for j in 0..i {
                let (a, b) = (self.dist(i, j), self.dist(j, i));
                if (a - b).abs() > tol {
                    return Err(Error::MetricAxiom(format!("d({i},{j}) = {a} but d({j},{i}) = {b}")));
                }
                if a <= 0.0 {
                    return Err(Error::MetricAxiom(format!("distinct points {j} and {i} at distance {a}")));
                }
            }
        }
        if n > caps().validation {
            return Ok(());
        }
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let dij = self.dist(i, j);
                for k in 0..n {
                    if self.dist(i, k) > dij + self.dist(j, k) + tol {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(Error::MetricAxiom(format!(
                "triangle inequality fails: d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {}",
                self.dist(i, k),
                self.dist(i, j) + self.dist(j, k)
            ))),
            None => Ok(()),
        }
    }

    /// Distance from `x` to the nearest point of `set` (`inf` for an empty set).
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> f64 {
        set.iter().map(|&a| self.dist(x, a)).fold(f64::INFINITY, f64::min)
    }

    /// Induced subspace on `points` (explicit).
    pub fn subspace(&self, points: &[usize]) -> MetricSpace {
        let m = points.len();
        let mut flat = Vec::with_capacity(m * m);
        for &a in points {
            for &b in points {
                flat.push(self.dist(a, b));
            }
        }
        MetricSpace::from_flat_trusted(m, flat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_rejects_asymmetry_and_triangle_violations() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(MetricSpace::from_matrix(asym), Err(Error::MetricAxiom(_))));
        let tri = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(MetricSpace::from_matrix(tri), Err(Error::MetricAxiom(_))));
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(MetricSpace::from_matrix(zero).is_err());
    }

    #[test]
    fn lp_distances() {
        let s = LpPointSet::new(4.0, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!((s.dist(0, 1) - 2f64.powf(0.25)).abs() < 1e-15);
        assert!(LpPointSet::new(0.5, vec![vec![0.0]]).is_err());
        assert!(LpPointSet::new(2.0, vec![vec![0.0], vec![0.0]]).is_err());
        assert!(LpPointSet::new(2.0, vec![vec![0.0], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn scaling_multiplies_distances() {
        let x = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let y = x.scaled(2.5).unwrap();
        assert_eq!(y.dist(0, 2), 7.5);
        assert!(x.scaled(0.0).is_err());
    }
}
