//! Markov-type moment functionals.
//!
//! For a chain `Z` on `{0..n-1}`, a metric space `X` and a map `f`, the
//! central quantity is `E_t = E d(f(Z_t), f(Z_0))^p = sum_ij pi_i (A^t)_ij
//! d(f(i), f(j))^p`, evaluated exactly from the chain's joint laws. The
//! type ratio `K(t) = (E_t / (t E_1))^(1/p)` is a witness lower bound for the
//! Markov type `p` constant of `X`.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::ReversibleChain;
use crate::config::{caps, le_with_slack};
use crate::error::{Error, Result};
use crate::metric::{LpPointSet, MetricSpace};
use crate::rng;

/// Map from chain states to point indices of a metric space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointMap {
    images: Vec<usize>,
}

impl PointMap {
    /// `images[i]` is the point assigned to state `i`; every image must lie
    /// in `0..target_len`.
    pub fn new(images: Vec<usize>, target_len: usize) -> Result<Self> {
        if let Some(s) = images.iter().position(|&y| y >= target_len) {
            return Err(Error::Parameter(format!(
                "state {s} maps to point {} outside a space of {target_len} points",
                images[s]
            )));
        }
        Ok(PointMap { images })
    }

    pub fn identity(n: usize) -> Self {
        PointMap { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, state: usize) -> usize {
        self.images[state]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Real-valued map as a line metric plus point map (equal values share a point).
pub fn real_map(values: &[f64]) -> Result<(MetricSpace, PointMap)> {
    vector_map(1.0, &values.iter().map(|&v| vec![v]).collect::<Vec<_>>())
}

/// Vector-valued map into `l_p` as a point set plus point map.
pub fn vector_map(p: f64, values: &[Vec<f64>]) -> Result<(MetricSpace, PointMap)> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut images = Vec::with_capacity(values.len());
    for v in values {
        match points.iter().position(|q| q == v) {
            Some(k) => images.push(k),
            None => {
                images.push(points.len());
                points.push(v.clone());
            }
        }
    }
    let n = points.len();
    let space = MetricSpace::from_lp(LpPointSet::new(p, points)?);
    Ok((space, PointMap::new(images, n)?))
}

fn check_inputs(c: &ReversibleChain, x: &MetricSpace, f: &PointMap, p: f64) -> Result<()> {
    if f.len() != c.len() {
        return Err(Error::Parameter(format!("map covers {} states, chain has {}", f.len(), c.len())));
    }
    if let Some(&y) = f.images().iter().find(|&&y| y >= x.len()) {
        return Err(Error::Parameter(format!("image {y} outside space of {} points", x.len())));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("moment exponent must be at least 1, got {p}")));
    }
    Ok(())
}

/// `d(f(i), f(j))^p` for all state pairs, row-major.
fn powered_distances(x: &MetricSpace, f: &PointMap, p: f64) -> Vec<f64> {
    let n = f.len();
    (0..n * n)
        .into_par_iter()
        .map(|k| {
            let d = x.dist(f.image(k / n), f.image(k % n));
            if p == 2.0 {
                d * d
            } else {
                d.powf(p)
            }
        })
        .collect()
}

/// Exact `E d(f(Z_t), f(Z_0))^p`.
pub fn pair_moment(c: &ReversibleChain, x: &MetricSpace, f: &PointMap, p: f64, t: u64) -> Result<f64> {
    check_inputs(c, x, f, p)?;
    if t == 0 {
        return Ok(0.0);
    }
    let at = c.t_step(t)?;
    let dp = powered_distances(x, f, p);
    let n = c.len();
    let pi = c.stationary();
    Ok((0..n).map(|i| pi[i] * (0..n).map(|j| at[(i, j)] * dp[i * n + j]).sum::<f64>()).sum())
}

/// Exact `E_0, E_1, .., E_{t_max}` in one pass over the joint laws.
pub fn moment_curve(c: &ReversibleChain, x: &MetricSpace, f: &PointMap, p: f64, t_max: u64) -> Result<Vec<f64>> {
    check_inputs(c, x, f, p)?;
    let dp = powered_distances(x, f, p);
    let mut laws = c.joint_laws();
    let mut out = Vec::with_capacity(t_max as usize + 1);
    out.push(0.0);
    for _ in 0..t_max {
        laws.advance();
        let e: f64 = laws.current().par_iter().zip(dp.par_iter()).map(|(j, d)| j * d).sum();
        out.push(e);
    }
    Ok(out)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let m = samples.len();
        let mean = samples.iter().sum::<f64>() / m as f64;
        let var = if m > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0)
        } else {
            0.0
        };
        Estimate { mean, stderr: (var / m as f64).sqrt(), trials: m }
    }

    /// `|mean - value| <= k * stderr` (with a tiny absolute floor).
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr + 1e-12 * value.abs().max(1.0)
    }
}

/// Monte Carlo estimates of `E_1..E_{t_max}` from `trials` stationary
/// trajectories; trial `k` uses stream `k` of `seed`.
pub fn moment_curve_montecarlo(
    c: &ReversibleChain,
    x: &MetricSpace,
    f: &PointMap,
    p: f64,
    t_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    check_inputs(c, x, f, p)?;
    if trials == 0 || t_max == 0 {
        return Err(Error::Parameter("need at least one trial and one step".into()));
    }
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, k as u64);
            let z0 = c.sample_stationary(&mut r);
            let mut z = z0;
            (0..t_max)
                .map(|_| {
                    z = c.step(z, &mut r);
                    x.dist(f.image(z0), f.image(z)).powf(p)
                })
                .collect()
        })
        .collect();
    Ok((0..t_max)
        .map(|t| Estimate::from_samples(&per_trial.iter().map(|s| s[t]).collect::<Vec<_>>()))
        .collect())
}

/// One row of a Markov-type experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeReport {
    pub p: f64,
    pub t: u64,
    pub e_t: f64,
    pub e_1: f64,
    /// `(E_t / (t E_1))^(1/p)`; `None` when the map is degenerate.
    pub ratio: Option<f64>,
    pub certificate: Option<f64>,
    pub pass: Option<bool>,
    pub degenerate: bool,
}

impl TypeReport {
    fn build(p: f64, t: u64, e_t: f64, e_1: f64, certificate: Option<f64>) -> Self {
        let degenerate = e_1 <= 0.0;
        let ratio = (!degenerate).then(|| (e_t / (t as f64 * e_1)).powf(1.0 / p));
        let pass = match (ratio, certificate) {
            (Some(r), Some(c)) => Some(le_with_slack(r, c)),
            _ => None,
        };
        TypeReport { p, t, e_t, e_1, ratio, certificate, pass, degenerate }
    }
}

/// `K(t)` with an optional certificate to compare against.
pub fn type_ratio(
    c: &ReversibleChain,
    x: &MetricSpace,
    f: &PointMap,
    p: f64,
    t: u64,
    certificate: Option<f64>,
) -> Result<TypeReport> {
    if t == 0 {
        return Err(Error::Parameter("type ratio needs t >= 1".into()));
    }
    let e_t = pair_moment(c, x, f, p, t)?;
    let e_1 = pair_moment(c, x, f, p, 1)?;
    Ok(TypeReport::build(p, t, e_t, e_1, certificate))
}

/// `K(1), .., K(t_max)` from one exact moment curve.
pub fn type_ratio_curve(
    c: &ReversibleChain,
    x: &MetricSpace,
    f: &PointMap,
    p: f64,
    t_max: u64,
    certificate: Option<f64>,
) -> Result<Vec<TypeReport>> {
    let curve = moment_curve(c, x, f, p, t_max)?;
    Ok((1..=t_max).map(|t| TypeReport::build(p, t, curve[t as usize], curve[1], certificate)).collect())
}

/// Markov type 2 certificate `4 sqrt(p-1)` for `l_p` targets, `p >= 2`.
pub fn lp_type2_certificate(p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::Parameter(format!("the l_p certificate needs p >= 2, got {p}")));
    }
    Ok(4.0 * (p - 1.0).sqrt())
}

/// `t^(-p/q) E_t / E_1` for `t = 1..t_max`; reported only, no threshold.
pub fn moment_scaling_curve(
    c: &ReversibleChain,
    x: &MetricSpace,
    f: &PointMap,
    p: f64,
    q: f64,
    t_max: u64,
) -> Result<Vec<(u64, f64)>> {
    let curve = moment_curve(c, x, f, p, t_max)?;
    if curve.len() < 2 || curve[1] <= 0.0 {
        return Err(Error::Parameter("degenerate map: E_1 = 0".into()));
    }
    Ok((1..=t_max).map(|t| (t, (t as f64).powf(-p / q) * curve[t as usize] / curve[1])).collect())
}

/// Outcome of the spectral inequality on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCertificate {
    pub t: u64,
    pub lambda: f64,
    /// `1 + lambda + .. + lambda^(t-1)`.
    pub big_lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `1 + lambda + .. + lambda^(t-1)`.
pub fn lambda_sum(lambda: f64, t: u64) -> f64 {
    let mut acc = 0.0;
    let mut pow = 1.0;
    for _ in 0..t {
        acc += pow;
        pow *= lambda;
    }
    acc
}

/// `sum pi_i (A^t)_ij (x_i - x_j)^2 <= Lambda(t) sum pi_i a_ij (x_i - x_j)^2`.
pub fn spectral_certificate(c: &ReversibleChain, x: &[f64], t: u64) -> Result<SpectralCertificate> {
    let lambda = c.second_eigenvalue()?;
    spectral_certificate_with(c, x, t, lambda)
}

/// [`spectral_certificate`] with a precomputed second eigenvalue.
pub fn spectral_certificate_with(c: &ReversibleChain, x: &[f64], t: u64, lambda: f64) -> Result<SpectralCertificate> {
    let n = c.len();
    if x.len() != n {
        return Err(Error::Parameter(format!("vector has {} entries for {n} states", x.len())));
    }
    let pi = c.stationary();
    let form = |m: &nalgebra::DMatrix<f64>| -> f64 {
        (0..n).map(|i| pi[i] * (0..n).map(|j| m[(i, j)] * (x[i] - x[j]).powi(2)).sum::<f64>()).sum()
    };
    let lhs = form(c.t_step(t)?.as_ref());
    let e1 = form(c.transition());
    let big_lambda = lambda_sum(lambda, t);
    let rhs = big_lambda * e1;
    let scale = lhs.abs().max(rhs.abs()).max(e1.abs()).max(1.0);
    Ok(SpectralCertificate { t, lambda, big_lambda, lhs, rhs, pass: lhs <= rhs + 1e-9 * scale })
}

/// How to evaluate a maximal moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    MonteCarlo { trials: usize, seed: u64 },
}

/// `E max_{0<=s<=t} d(f(Z_s), f(Z_0))^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximalMoment {
    pub value: f64,
    /// Present for Monte Carlo estimates.
    pub stderr: Option<f64>,
    pub trials: Option<usize>,
}

/// Maximal moment by exhaustive path enumeration (`n^(t+1)` within the
/// exact-path cap) or seeded Monte Carlo.
pub fn maximal_moment(c: &ReversibleChain, x: &MetricSpace, f: &PointMap, t: usize, mode: Mode) -> Result<MaximalMoment> {
    check_inputs(c, x, f, 2.0)?;
    if t == 0 {
        return Ok(MaximalMoment { value: 0.0, stderr: None, trials: None });
    }
    let d2 = powered_distances(x, f, 2.0);
    let n = c.len();
    match mode {
        Mode::Exact => {
            let paths = (n as u128).checked_pow(t as u32 + 1).unwrap_or(u128::MAX);
            if paths > caps().exact_paths {
                return Err(Error::CapExceeded { what: "exact path enumeration", requested: paths, cap: caps().exact_paths });
            }
            fn walk(c: &ReversibleChain, d2: &[f64], n: usize, z0: usize, z: usize, left: usize, w: f64, mx: f64) -> f64 {
                if left == 0 {
                    return w * mx;
                }
                c.row(z)
                    .iter()
                    .map(|&(j, p)| walk(c, d2, n, z0, j, left - 1, w * p, mx.max(d2[z0 * n + j])))
                    .sum()
            }
            let value = (0..n)
                .into_par_iter()
                .map(|z0| walk(c, &d2, n, z0, z0, t, c.stationary()[z0], 0.0))
                .sum();
            Ok(MaximalMoment { value, stderr: None, trials: None })
        }
        Mode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::Parameter("need at least one trial".into()));
            }
            let samples: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|k| {
                    let mut r = rng::stream(seed, k as u64);
                    let z0 = c.sample_stationary(&mut r);
                    let mut z = z0;
                    let mut mx: f64 = 0.0;
                    for _ in 0..t {
                        z = c.step(z, &mut r);
                        mx = mx.max(d2[z0 * n + z]);
                    }
                    mx
                })
                .collect();
            let e = Estimate::from_samples(&samples);
            Ok(MaximalMoment { value: e.mean, stderr: Some(e.stderr), trials: Some(trials) })
        }
    }
}

/// Tail probability against the weak-type reference bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakTail {
    /// `Pr(d(f(Z_0), f(Z_t))^2 >= t zeta)`.
    pub probability: f64,
    /// `E_1 / zeta` (weak type constant 1; callers scale by `C^2`).
    pub bound: f64,
    /// `E_t / (t zeta)`, which always dominates `probability`.
    pub chebyshev: f64,
}

/// Exact weak-type tail at time `t` and level `zeta`.
pub fn weak_type_tail(c: &ReversibleChain, x: &MetricSpace, f: &PointMap, t: u64, zeta: f64) -> Result<WeakTail> {
    check_inputs(c, x, f, 2.0)?;
    if !(zeta > 0.0) {
        return Err(Error::Parameter(format!("zeta must be positive, got {zeta}")));
    }
    if t == 0 {
        return Err(Error::Parameter("weak type tail needs t >= 1".into()));
    }
    let n = c.len();
    let d2 = powered_distances(x, f, 2.0);
    let at = c.t_step(t)?;
    let pi = c.stationary();
    let level = t as f64 * zeta;
    let mut probability = 0.0;
    let mut e_t = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = pi[i] * at[(i, j)];
            e_t += w * d2[i * n + j];
            if d2[i * n + j] >= level {
                probability += w;
            }
        }
    }
    let e_1 = pair_moment(c, x, f, 2.0, 1)?;
    Ok(WeakTail { probability, bound: e_1 / zeta, chebyshev: e_t / level })
}

/// Real-valued `p`-moment comparison for `p > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `(E|f(Z_t)-f(Z_0)|^p)^(1/p) <= 16 sqrt(p t) (E|f(Z_1)-f(Z_0)|^p)^(1/p)`.
pub fn real_lp_moment_check(c: &ReversibleChain, f: &[f64], p: f64, t: u64) -> Result<MomentCheck> {
    if !(p > 2.0) {
        return Err(Error::Parameter(format!("this check needs p > 2, got {p}")));
    }
    if t == 0 {
        return Err(Error::Parameter("this check needs t >= 1".into()));
    }
    let (x, map) = real_map(f)?;
    let lhs = pair_moment(c, &x, &map, p, t)?.powf(1.0 / p);
    let rhs = 16.0 * (p * t as f64).sqrt() * pair_moment(c, &x, &map, p, 1)?.powf(1.0 / p);
    Ok(MomentCheck { lhs, rhs, pass: le_with_slack(lhs, rhs) })
}

/// Exact `E d_H(Z_0, Z_t)^2` for the walk on `{0,1}^d` that flips one
/// uniform coordinate per step, via the birth-death chain of the distance
/// from the start (`k -> k+1` w.p. `(d-k)/d`, `k -> k-1` w.p. `k/d`).
pub fn hamming_moment(d: u32, t: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Parameter("cube dimension must be at least 1".into()));
    }
    let dim = d as usize;
    let df = d as f64;
    let mut law = vec![0.0; dim + 1];
    law[0] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; dim + 1];
        for (k, &m) in law.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            if k < dim {
                next[k + 1] += m * (df - k as f64) / df;
            }
            if k > 0 {
                next[k - 1] += m * k as f64 / df;
            }
        }
        law = next;
    }
    Ok(law.iter().enumerate().map(|(k, m)| m * (k * k) as f64).sum())
}

/// Monte Carlo estimate of `E d_H(Z_0, Z_t)^2` on `{0,1}^d`.
pub fn hamming_moment_montecarlo(d: u32, t: u64, trials: usize, seed: u64) -> Result<Estimate> {
    use rand::Rng;
    if d == 0 || d >= 64 || trials == 0 {
        return Err(Error::Parameter("need 1 <= d < 64 and trials >= 1".into()));
    }
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, k as u64);
            let start: u64 = r.random::<u64>() & ((1u64 << d) - 1);
            let mut z = start;
            for _ in 0..t {
                z ^= 1u64 << r.random_range(0..d);
            }
            ((z ^ start).count_ones() as f64).powi(2)
        })
        .collect();
    Ok(Estimate::from_samples(&samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::WeightedGraph;

    fn two_state() -> ReversibleChain {
        ReversibleChain::new(vec![vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn pair_moment_examples() {
        let (x, f) = real_map(&[0.0, 1.0]).unwrap();
        let flip = ReversibleChain::flip();
        assert_eq!(pair_moment(&flip, &x, &f, 2.0, 2).unwrap(), 0.0);
        assert_eq!(pair_moment(&flip, &x, &f, 2.0, 3).unwrap(), 1.0);
        assert_eq!(pair_moment(&flip, &x, &f, 2.0, 0).unwrap(), 0.0);
        let e2 = pair_moment(&two_state(), &x, &f, 2.0, 2).unwrap();
        assert!((e2 - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn curve_matches_pointwise_powers() {
        let g = WeightedGraph::unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        let c = ReversibleChain::random_walk(&g, None).unwrap();
        let (x, f) = real_map(&[0.0, 2.0, -1.0, 0.5, 3.0]).unwrap();
        let curve = moment_curve(&c, &x, &f, 3.0, 20).unwrap();
        for t in [1u64, 2, 7, 20] {
            let e = pair_moment(&c, &x, &f, 3.0, t).unwrap();
            assert!((curve[t as usize] - e).abs() <= 1e-12 * e.max(1.0));
        }
    }

    #[test]
    fn type_ratio_examples() {
        let (x, f) = real_map(&[0.0, 1.0]).unwrap();
        let r = type_ratio(&ReversibleChain::flip(), &x, &f, 2.0, 3, None).unwrap();
        assert!((r.ratio.unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let r = type_ratio(&two_state(), &x, &f, 2.0, 2, Some(4.0)).unwrap();
        assert!((r.ratio.unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(r.pass, Some(true));
        let (x, f) = real_map(&[5.0, 5.0]).unwrap();
        let r = type_ratio(&ReversibleChain::flip(), &x, &f, 2.0, 3, Some(1.0)).unwrap();
        assert!(r.degenerate);
        assert_eq!((r.ratio, r.pass), (None, None));
    }

    #[test]
    fn spectral_examples() {
        let flip = ReversibleChain::flip();
        let s = spectral_certificate(&flip, &[0.0, 1.0], 2).unwrap();
        assert!(s.big_lambda.abs() < 1e-12 && s.lhs == 0.0 && s.pass);
        let s = spectral_certificate(&two_state(), &[0.0, 1.0], 2).unwrap();
        assert!((s.lhs - 4.0 / 9.0).abs() < 1e-15);
        assert!((s.rhs - 4.0 / 9.0).abs() < 1e-12);
        assert!(s.pass);
    }

    #[test]
    fn maximal_moment_examples() {
        let (x, f) = real_map(&[0.0, 1.0]).unwrap();
        let flip = ReversibleChain::flip();
        assert_eq!(maximal_moment(&flip, &x, &f, 2, Mode::Exact).unwrap().value, 1.0);
        assert_eq!(maximal_moment(&flip, &x, &f, 0, Mode::Exact).unwrap().value, 0.0);
        let mc = maximal_moment(&flip, &x, &f, 2, Mode::MonteCarlo { trials: 100, seed: 1 }).unwrap();
        assert_eq!(mc.value, 1.0);
        assert_eq!(mc.stderr, Some(0.0));
    }

    #[test]
    fn maximal_moment_montecarlo_agrees_with_exact() {
        let g = WeightedGraph::unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let c = ReversibleChain::random_walk(&g, None).unwrap();
        let (x, f) = real_map(&[0.0, 1.0, 3.0, -2.0]).unwrap();
        let exact = maximal_moment(&c, &x, &f, 5, Mode::Exact).unwrap().value;
        let mc = maximal_moment(&c, &x, &f, 5, Mode::MonteCarlo { trials: 200_000, seed: 5 }).unwrap();
        assert!((mc.value - exact).abs() <= 4.0 * mc.stderr.unwrap(), "{exact} vs {mc:?}");
    }

    #[test]
    fn exact_mode_respects_cap() {
        let c = ReversibleChain::iid(vec![0.1; 10]).unwrap();
        let (x, f) = real_map(&(0..10).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        assert!(matches!(maximal_moment(&c, &x, &f, 8, Mode::Exact), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn weak_tail_examples() {
        let (x, f) = real_map(&[0.0, 1.0]).unwrap();
        let flip = ReversibleChain::flip();
        let w = weak_type_tail(&flip, &x, &f, 1, 1.0).unwrap();
        assert_eq!((w.probability, w.bound), (1.0, 1.0));
        let w = weak_type_tail(&flip, &x, &f, 1, 1.5).unwrap();
        assert_eq!(w.probability, 0.0);
        assert!(weak_type_tail(&flip, &x, &f, 1, 0.0).is_err());
    }

    #[test]
    fn real_lp_examples() {
        let flip = ReversibleChain::flip();
        for t in [1u64, 3, 5, 9] {
            let m = real_lp_moment_check(&flip, &[0.0, 1.0], 3.0, t).unwrap();
            assert_eq!(m.lhs, 1.0);
            assert!(m.pass && m.rhs >= 16.0 * 3f64.sqrt());
        }
        let m = real_lp_moment_check(&flip, &[2.0, 2.0], 4.0, 3).unwrap();
        assert_eq!((m.lhs, m.rhs, m.pass), (0.0, 0.0, true));
        assert!(real_lp_moment_check(&flip, &[0.0, 1.0], 2.0, 1).is_err());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_moment(1, 1).unwrap(), 1.0);
        assert_eq!(hamming_moment(2, 2).unwrap(), 2.0);
        for d in 1..20 {
            assert_eq!(hamming_moment(d, 1).unwrap(), 1.0);
        }
        let exact = hamming_moment(10, 5).unwrap();
        let mc = hamming_moment_montecarlo(10, 5, 200_000, 3).unwrap();
        assert!(mc.agrees_with(exact, 3.0), "{exact} vs {mc:?}");
    }

    #[test]
    fn hamming_moment_matches_explicit_chain() {
        // Oracle: the cube walk as an explicit chain on 2^4 states.
        let d = 4u32;
        let n = 1usize << d;
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for b in 0..d {
                row[i ^ (1 << b)] = 1.0 / d as f64;
            }
        }
        let c = ReversibleChain::new(a, vec![1.0 / n as f64; n]).unwrap();
        let cube = crate::metric::hamming_cube(d).unwrap();
        let f = PointMap::identity(n);
        for t in 0..8u64 {
            let e = pair_moment(&c, &cube, &f, 2.0, t).unwrap();
            assert!((e - hamming_moment(d, t).unwrap()).abs() < 1e-12);
        }
    }
}
