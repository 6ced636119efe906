//! Gluing local bi-Lipschitz charts into one map `F : X -> Z^N`, and the
//! composite embedding `x -> (phi(x), F(x))` into `Y x Z^N`.

use rayon::prelude::*;
use serde::Serialize;

use super::nets::greedy_net_strict;
use crate::error::{Error, Result};
use crate::metric::{lp_dist, lp_norm, MetricSpace};

/// Local embeddings `psi_x : B(x, radius) -> l_p^n` with `psi_x(x) = 0`.
pub trait ChartAtlas: Sync {
    /// Dimension `n` of the chart target.
    fn dim(&self) -> usize;
    /// Exponent of the target norm.
    fn norm_p(&self) -> f64;
    /// `psi_center(point)`, for `point` within the chart radius of `center`.
    fn chart(&self, center: usize, point: usize) -> Vec<f64>;
}

/// Charts `psi_x(y) = y - x` for a point set in `l_p^n` (distortion 1).
#[derive(Debug, Clone)]
pub struct IdentityCharts {
    points: Vec<Vec<f64>>,
    p: f64,
}

impl IdentityCharts {
    pub fn new(space: &MetricSpace) -> Result<Self> {
        let set = space
            .lp_points()
            .ok_or_else(|| Error::Parameter("identity charts need a space given by l_p coordinates".into()))?;
        Ok(IdentityCharts { points: set.points().to_vec(), p: set.p() })
    }
}

impl ChartAtlas for IdentityCharts {
    fn dim(&self) -> usize {
        self.points.first().map_or(0, |v| v.len())
    }

    fn norm_p(&self) -> f64 {
        self.p
    }

    fn chart(&self, center: usize, point: usize) -> Vec<f64> {
        self.points[point].iter().zip(&self.points[center]).map(|(a, b)| a - b).collect()
    }
}

/// `F = f_1 (+) ... (+) f_N`; the distance on `Z^N` is the sum of the block
/// norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlueEmbedding {
    pub eps: f64,
    pub distortion: f64,
    pub dim: usize,
    pub norm_p: f64,
    /// The nets `A_1..A_N`.
    pub blocks: Vec<Vec<usize>>,
    /// Sizes of `X_0, X_1, ...`.
    pub layer_sizes: Vec<usize>,
    /// `values[x][j] = f_j(x)`.
    #[serde(skip)]
    pub values: Vec<Vec<Vec<f64>>>,
}

impl GlueEmbedding {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `(8D + 1)^n`.
    pub fn block_bound(&self) -> f64 {
        (8.0 * self.distortion + 1.0).powi(self.dim as i32)
    }

    /// `4 N D`.
    pub fn lipschitz_bound(&self) -> f64 {
        4.0 * self.block_count() as f64 * self.distortion
    }

    pub fn block_dist(&self, j: usize, x: usize, y: usize) -> f64 {
        lp_dist(&self.values[x][j], &self.values[y][j], self.norm_p)
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        (0..self.block_count()).map(|j| self.block_dist(j, x, y)).sum()
    }
}

fn validate_charts(space: &MetricSpace, atlas: &dyn ChartAtlas, centers: &[usize], radius: f64, d: f64) -> Result<()> {
    let p = atlas.norm_p();
    let bad = centers.par_iter().find_map_first(|&a| {
        let ball: Vec<usize> = (0..space.len()).filter(|&y| space.dist(a, y) <= radius).collect();
        let images: Vec<Vec<f64>> = ball.iter().map(|&y| atlas.chart(a, y)).collect();
        if lp_norm(&atlas.chart(a, a), p) > 1e-12 {
            return Some(format!("chart at {a} does not send its center to 0"));
        }
        for i in 0..ball.len() {
            for k in i + 1..ball.len() {
                let dist = space.dist(ball[i], ball[k]);
                let img = lp_dist(&images[i], &images[k], p);
                if img < dist * (1.0 - 1e-9) || img > d * dist * (1.0 + 1e-9) {
                    return Some(format!(
                        "chart at {a} has distortion outside [1, {d}] on ({}, {}): {img} vs {dist}",
                        ball[i], ball[k]
                    ));
                }
            }
        }
        None
    });
    bad.map_or(Ok(()), |m| Err(Error::Hypothesis(m)))
}

/// Glue the charts of `atlas` (each of distortion at most `d` on balls of
/// radius `eps`) into `F : X -> Z^N`.
///
/// `A_i` is a net of `X_i` with pairwise distances `> eps`, and `X_{i+1}`
/// removes the closed balls `B(a, eps/4)`, `a` in `A_i`. Charts are
/// validated on the balls around the net points that use them.
pub fn glue_embedding(space: &MetricSpace, eps: f64, d: f64, atlas: &dyn ChartAtlas) -> Result<GlueEmbedding> {
    if !(eps > 0.0 && d >= 1.0) {
        return Err(Error::Parameter(format!("need eps > 0 and D >= 1, got eps={eps}, D={d}")));
    }
    let n = space.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut layer_sizes = Vec::new();
    let bound = (8.0 * d + 1.0).powi(atlas.dim() as i32);
    while !remaining.is_empty() {
        layer_sizes.push(remaining.len());
        let sub = space.subspace(&remaining);
        let net: Vec<usize> = greedy_net_strict(&sub, eps, None)?.into_iter().map(|k| remaining[k]).collect();
        remaining.retain(|&x| net.iter().all(|&a| space.dist(a, x) > eps / 4.0));
        blocks.push(net);
        if blocks.len() as f64 > bound {
            return Err(Error::Internal(format!("more than (8D+1)^n = {bound} blocks")));
        }
    }
    let centers: Vec<usize> = blocks.iter().flatten().copied().collect();
    validate_charts(space, atlas, &centers, eps, d)?;
    let dim = atlas.dim();
    let values: Vec<Vec<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|x| {
            blocks
                .iter()
                .map(|net| {
                    // At most one center of a block lies within eps/2.
                    match net.iter().map(|&a| (a, space.dist(x, a))).find(|&(_, da)| da <= eps / 2.0) {
                        None => vec![0.0; dim],
                        Some((a, da)) => {
                            let psi = atlas.chart(a, x);
                            if da <= 3.0 * eps / 8.0 {
                                psi
                            } else {
                                let w = 4.0 - 8.0 * da / eps;
                                psi.into_iter().map(|v| w * v).collect()
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(GlueEmbedding { eps, distortion: d, dim, norm_p: atlas.norm_p(), blocks, layer_sizes, values })
}

/// Pairwise audit of a [`GlueEmbedding`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlueAudit {
    pub blocks: usize,
    pub block_bound: f64,
    /// Measured Lipschitz constant of `F`.
    pub lipschitz: f64,
    pub lipschitz_bound: f64,
    /// Largest measured Lipschitz constant of a single block `f_j`.
    pub block_lipschitz: f64,
    /// Pairs with `d(x,y) <= eps/8`.
    pub close_pairs: usize,
    /// Smallest `||F(x)-F(y)|| / d(x,y)` over those pairs.
    pub close_ratio: f64,
    pub close_witness: Option<(usize, usize)>,
    pub pass: bool,
}

pub fn audit_glue(space: &MetricSpace, g: &GlueEmbedding) -> GlueAudit {
    let n = space.len();
    let rows: Vec<(f64, f64, usize, f64, Option<(usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let (mut lip, mut block, mut close, mut ratio, mut witness) = (0.0f64, 0.0f64, 0usize, f64::INFINITY, None);
            for y in x + 1..n {
                let d = space.dist(x, y);
                let parts: Vec<f64> = (0..g.block_count()).map(|j| g.block_dist(j, x, y)).collect();
                let total: f64 = parts.iter().sum();
                lip = lip.max(total / d);
                block = parts.iter().fold(block, |m, v| m.max(v / d));
                if d <= g.eps / 8.0 {
                    close += 1;
                    if total / d < ratio {
                        ratio = total / d;
                        witness = Some((x, y));
                    }
                }
            }
            (lip, block, close, ratio, witness)
        })
        .collect();
    let mut audit = GlueAudit {
        blocks: g.block_count(),
        block_bound: g.block_bound(),
        lipschitz: 0.0,
        lipschitz_bound: g.lipschitz_bound(),
        block_lipschitz: 0.0,
        close_pairs: 0,
        close_ratio: f64::INFINITY,
        close_witness: None,
        pass: false,
    };
    for (lip, block, close, ratio, witness) in rows {
        audit.lipschitz = audit.lipschitz.max(lip);
        audit.block_lipschitz = audit.block_lipschitz.max(block);
        audit.close_pairs += close;
        if ratio < audit.close_ratio {
            audit.close_ratio = ratio;
            audit.close_witness = witness;
        }
    }
    audit.pass = audit.blocks as f64 <= audit.block_bound
        && audit.lipschitz <= audit.lipschitz_bound * (1.0 + 1e-9)
        && audit.close_ratio >= 1.0 - 1e-9;
    audit
}

/// `g(x) = (phi(x), F(x))` in `Y x Z^N` with the sum metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeEmbedding {
    pub c: f64,
    pub eps: f64,
    pub glue: GlueEmbedding,
    pub phi: Vec<usize>,
}

/// Audit of [`CompositeEmbedding`] on every pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeAudit {
    /// `Delta`, the Lipschitz bound `4ND` of the glued map.
    pub delta: f64,
    pub lipschitz: f64,
    /// Pairs with `d <= 8 eps / c`, and the smallest `d(g x, g y) / d`.
    pub near_pairs: usize,
    pub near_ratio: f64,
    /// Pairs with `d > 8 eps / c`, and the smallest `d(g x, g y) / (c d / 2)`.
    pub far_pairs: usize,
    pub far_ratio: f64,
    pub distortion: f64,
    pub pass: bool,
}

impl CompositeEmbedding {
    pub fn dist(&self, image: &MetricSpace, x: usize, y: usize) -> f64 {
        image.dist(self.phi[x], self.phi[y]) + self.glue.dist(x, y)
    }
}

/// Build `g` from a 1-Lipschitz `phi : X -> Y` that expands distances by at
/// least `c` on the `eps`-dense subset `dense`, gluing charts on balls of
/// radius `64 eps / c`.
pub fn composite_embedding(
    space: &MetricSpace,
    image: &MetricSpace,
    phi: &[usize],
    dense: &[usize],
    c: f64,
    eps: f64,
    d: f64,
    atlas: &dyn ChartAtlas,
) -> Result<CompositeEmbedding> {
    if !(c > 0.0 && c <= 1.0 && eps > 0.0) {
        return Err(Error::Parameter(format!("need 0 < c <= 1 and eps > 0, got c={c}, eps={eps}")));
    }
    let n = space.len();
    if phi.len() != n || phi.iter().any(|&y| y >= image.len()) {
        return Err(Error::Parameter("phi must send every point into the image space".into()));
    }
    if dense.is_empty() || dense.iter().any(|&a| a >= n) {
        return Err(Error::Parameter("dense subset must be a nonempty set of points".into()));
    }
    for x in 0..n {
        for y in x + 1..n {
            if image.dist(phi[x], phi[y]) > space.dist(x, y) * (1.0 + 1e-9) {
                return Err(Error::Hypothesis(format!("phi is not 1-Lipschitz on ({x}, {y})")));
            }
        }
    }
    for (i, &a) in dense.iter().enumerate() {
        for &b in &dense[i + 1..] {
            if image.dist(phi[a], phi[b]) < c * space.dist(a, b) * (1.0 - 1e-9) {
                return Err(Error::Hypothesis(format!("phi does not expand ({a}, {b}) by {c}")));
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| space.dist_to_set(x, dense) > eps * (1.0 + 1e-12)) {
        return Err(Error::Hypothesis(format!("point {x} is farther than eps from the dense subset")));
    }
    let glue = glue_embedding(space, 64.0 * eps / c, d, atlas)?;
    Ok(CompositeEmbedding { c, eps, glue, phi: phi.to_vec() })
}

pub fn audit_composite(space: &MetricSpace, image: &MetricSpace, g: &CompositeEmbedding) -> CompositeAudit {
    let n = space.len();
    let cut = 8.0 * g.eps / g.c;
    let rows: Vec<(f64, usize, f64, usize, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let (mut lip, mut near, mut nr, mut far, mut fr, mut low) = (0.0f64, 0, f64::INFINITY, 0, f64::INFINITY, f64::INFINITY);
            for y in x + 1..n {
                let d = space.dist(x, y);
                let dg = g.dist(image, x, y);
                lip = lip.max(dg / d);
                low = low.min(dg / d);
                if d <= cut {
                    near += 1;
                    nr = nr.min(dg / d);
                } else {
                    far += 1;
                    fr = fr.min(dg / (g.c * d / 2.0));
                }
            }
            (lip, near, nr, far, fr, low)
        })
        .collect();
    let delta = g.glue.lipschitz_bound();
    let mut a = CompositeAudit {
        delta,
        lipschitz: 0.0,
        near_pairs: 0,
        near_ratio: f64::INFINITY,
        far_pairs: 0,
        far_ratio: f64::INFINITY,
        distortion: 1.0,
        pass: false,
    };
    let mut low = f64::INFINITY;
    for (lip, near, nr, far, fr, l) in rows {
        a.lipschitz = a.lipschitz.max(lip);
        a.near_pairs += near;
        a.near_ratio = a.near_ratio.min(nr);
        a.far_pairs += far;
        a.far_ratio = a.far_ratio.min(fr);
        low = low.min(l);
    }
    if n > 1 {
        a.distortion = a.lipschitz / low;
    }
    a.pass = a.lipschitz <= (delta + 1.0) * (1.0 + 1e-9) && a.near_ratio >= 1.0 - 1e-9 && a.far_ratio >= 1.0 - 1e-9;
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::LpPointSet;

    fn line(points: &[f64]) -> MetricSpace {
        MetricSpace::from_lp(LpPointSet::new(2.0, points.iter().map(|&x| vec![x]).collect()).unwrap())
    }

    #[test]
    fn glue_on_the_line() {
        let x = line(&(0..60).map(|k| k as f64 * 0.37 + (k as f64).sin() * 0.1).collect::<Vec<_>>());
        let charts = IdentityCharts::new(&x).unwrap();
        for eps in [0.5, 2.0, 8.0] {
            let g = glue_embedding(&x, eps, 1.0, &charts).unwrap();
            let audit = audit_glue(&x, &g);
            assert!(audit.pass, "eps={eps}: {audit:?}");
            assert!(audit.blocks <= 9);
        }
    }

    #[test]
    fn tiny_space_single_chart() {
        let x = line(&[0.0, 0.01, 0.02, 0.05]);
        let g = glue_embedding(&x, 1.0, 1.0, &IdentityCharts::new(&x).unwrap()).unwrap();
        assert_eq!(g.block_count(), 1);
        for a in 0..4 {
            for b in 0..4 {
                assert!((g.dist(a, b) - x.dist(a, b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chart_validation_rejects_bad_charts() {
        struct Squash;
        impl ChartAtlas for Squash {
            fn dim(&self) -> usize {
                1
            }
            fn norm_p(&self) -> f64 {
                2.0
            }
            fn chart(&self, center: usize, point: usize) -> Vec<f64> {
                vec![(point as f64 - center as f64) * 0.5]
            }
        }
        let x = line(&[0.0, 1.0, 2.0]);
        assert!(matches!(glue_embedding(&x, 4.0, 1.0, &Squash), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn composite_identity() {
        let pts: Vec<f64> = (0..30).map(|k| k as f64 * 0.5).collect();
        let x = line(&pts);
        let image = MetricSpace::line(&pts).unwrap();
        let phi: Vec<usize> = (0..30).collect();
        let g = composite_embedding(&x, &image, &phi, &phi, 1.0, 0.25, 1.0, &IdentityCharts::new(&x).unwrap()).unwrap();
        let a = audit_composite(&x, &image, &g);
        assert!(a.pass && a.distortion <= a.delta + 1.0, "{a:?}");
        assert!(a.near_pairs > 0 && a.far_pairs > 0);
    }
}
