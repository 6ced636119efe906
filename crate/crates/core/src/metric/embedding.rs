use std::collections::HashMap;

use rayon::prelude::*;

use super::MetricSpace;
use crate::error::{Error, Result};

/// An injective map from the points of `source` to the points of `target`.
#[derive(Debug, Clone)]
pub struct EmbeddingMap {
    source: MetricSpace,
    target: MetricSpace,
    assignment: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(source: MetricSpace, target: MetricSpace, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::Parameter(format!(
                "assignment has {} entries for {} source points",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return Err(Error::Parameter(format!("image {bad} outside target of size {}", target.len())));
        }
        let mut first = HashMap::new();
        for (x, &y) in assignment.iter().enumerate() {
            if let Some(&x0) = first.get(&y) {
                return Err(Error::NotInjective(x0, x));
            }
            first.insert(y, x);
        }
        Ok(EmbeddingMap { source, target, assignment })
    }

    pub fn identity(space: MetricSpace) -> Self {
        let n = space.len();
        EmbeddingMap { source: space.clone(), target: space, assignment: (0..n).collect() }
    }

    pub fn source(&self) -> &MetricSpace {
        &self.source
    }

    pub fn target(&self) -> &MetricSpace {
        &self.target
    }

    pub fn image(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// `(||f||_Lip, ||f^{-1}||_Lip)` over all pairs.
    pub fn lipschitz_constants(&self) -> (f64, f64) {
        let n = self.source.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = (0.0f64, 0.0f64);
                for j in 0..i {
                    let ds = self.source.dist(i, j);
                    let dt = self.target.dist(self.assignment[i], self.assignment[j]);
                    acc.0 = acc.0.max(dt / ds);
                    acc.1 = acc.1.max(ds / dt);
                }
                acc
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)))
    }
}

/// `dist(f) = ||f||_Lip * ||f^{-1}||_Lip`; 1 for a single-point source.
pub fn distortion(f: &EmbeddingMap) -> f64 {
    if f.source.len() < 2 {
        return 1.0;
    }
    let (lip, inv) = f.lipschitz_constants();
    lip * inv
}

/// Result of a lower-bound calculator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerBound {
    Value(f64),
    /// The hypothesis that makes the bound informative fails.
    Vacuous,
}

impl LowerBound {
    pub fn value(self) -> Option<f64> {
        match self {
            LowerBound::Value(v) => Some(v),
            LowerBound::Vacuous => None,
        }
    }
}

/// Distortion lower bound `(deg - 2) / (2 mp) * g^((p-1)/p)` for embedding a
/// graph of average degree `deg` and girth `g` into a space of Markov type
/// `p` with constant `mp`.
pub fn girth_lower_bound(avg_degree: f64, girth: usize, p: f64, mp: f64) -> Result<LowerBound> {
    if girth < 3 {
        return Err(Error::Parameter(format!("girth must be at least 3, got {girth}")));
    }
    if !(mp > 0.0) {
        return Err(Error::Parameter(format!("Markov type constant must be positive, got {mp}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("exponent must be at least 1, got {p}")));
    }
    if avg_degree <= 2.0 {
        return Ok(LowerBound::Vacuous);
    }
    Ok(LowerBound::Value((avg_degree - 2.0) / (2.0 * mp) * (girth as f64).powf((p - 1.0) / p)))
}

/// Distortion lower bound `max{1, sqrt(d/p)} / 20` for the Hamming cube of
/// dimension `d` in a space of Markov type 2, `p > 2`.
pub fn cube_lower_bound(d: u32, p: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Parameter("cube dimension must be at least 1".into()));
    }
    if !(p > 2.0) {
        return Err(Error::Parameter(format!("cube bound needs p > 2, got {p}")));
    }
    Ok(f64::max(1.0, (d as f64 / p).sqrt()) / 20.0)
}

#[cfg(test)]
mod tests {
    use super::super::{hamming_cube, LpPointSet};
    use super::*;

    #[test]
    fn identity_has_distortion_one() {
        let x = MetricSpace::line(&[0.0, 1.0, 5.0]).unwrap();
        assert_eq!(distortion(&EmbeddingMap::identity(x)), 1.0);
    }

    #[test]
    fn square_into_l2_has_distortion_sqrt2() {
        // Oracle: brute force over the 6 pairs of {0,1}^2.
        let pts: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let mut lip: f64 = 0.0;
        let mut inv: f64 = 0.0;
        for i in 0..4usize {
            for j in 0..i {
                let h = ((i ^ j) as u32).count_ones() as f64;
                let e = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt();
                lip = lip.max(e / h);
                inv = inv.max(h / e);
            }
        }
        let oracle = lip * inv;
        assert!((oracle - 2f64.sqrt()).abs() < 1e-15);
        let target = MetricSpace::from_lp(LpPointSet::new(2.0, pts).unwrap());
        let f = EmbeddingMap::new(hamming_cube(2).unwrap(), target, vec![0, 1, 2, 3]).unwrap();
        assert!((distortion(&f) - oracle).abs() < 1e-15);
    }

    #[test]
    fn scaling_target_keeps_distortion() {
        let x = MetricSpace::line(&[0.0, 1.0, 3.0, 7.0]).unwrap();
        let y = MetricSpace::line(&[0.0, 2.0, 2.5, 9.0]).unwrap();
        let f = EmbeddingMap::new(x.clone(), y.clone(), vec![0, 1, 2, 3]).unwrap();
        let g = EmbeddingMap::new(x, y.scaled(13.0).unwrap(), vec![0, 1, 2, 3]).unwrap();
        let (a, b) = (distortion(&f), distortion(&g));
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn non_injective_rejected() {
        let x = MetricSpace::line(&[0.0, 1.0]).unwrap();
        assert_eq!(EmbeddingMap::new(x.clone(), x, vec![1, 1]).unwrap_err(), Error::NotInjective(0, 1));
    }

    #[test]
    fn lower_bound_calculators() {
        let v = girth_lower_bound(3.0, 5, 2.0, 1.0).unwrap().value().unwrap();
        assert!((v - 0.5 * 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(girth_lower_bound(2.0, 5, 2.0, 1.0).unwrap(), LowerBound::Vacuous);
        assert_eq!(girth_lower_bound(4.0, 7, 1.0, 2.0).unwrap(), LowerBound::Value(0.5));
        assert_eq!(cube_lower_bound(16, 4.0).unwrap(), 0.1);
        assert_eq!(cube_lower_bound(3, 4.0).unwrap(), 0.05);
        assert_eq!(cube_lower_bound(100, 4.0).unwrap(), 0.25);
        assert!(cube_lower_bound(16, 2.0).is_err());
    }
}
