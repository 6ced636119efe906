//! Forward and backward martingales along a reversible chain, and the
//! two-point and martingale inequalities of smooth normed spaces.
//!
//! With `Lf(i) = sum_j a_ij (f(j) - f(i))`, the forward martingale is
//! `M_s = f(Z_s) - sum_{r<s} Lf(Z_r)` and the backward one is
//! `N_s = f(Z_{t-s}) - sum_{r=t-s+1}^{t} Lf(Z_r)`. Their increments recover
//! the two-step increments of `f(Z)`:
//! `f(Z_{s+1}) - f(Z_{s-1}) = (M_{s+1} - M_s) - (N_{t-s+1} - N_{t-s})`.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ReversibleChain, Trajectory};
use crate::config::{caps, le_with_slack};
use crate::error::{Error, Result};
use crate::markov_type::Estimate;
use crate::metric::lp_norm;
use crate::rng;

type Vector = Vec<f64>;

fn sub(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_assign(a: &mut [f64], b: &[f64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
}

fn check_map(c: &ReversibleChain, f: &[Vector]) -> Result<usize> {
    if f.len() != c.len() {
        return Err(Error::Parameter(format!("map covers {} states, chain has {}", f.len(), c.len())));
    }
    let dim = f.first().map_or(0, |v| v.len());
    if f.iter().any(|v| v.len() != dim) {
        return Err(Error::Parameter("map values have different dimensions".into()));
    }
    Ok(dim)
}

/// `Lf(i) = sum_j a_ij (f(j) - f(i))`, componentwise.
pub fn generator(c: &ReversibleChain, f: &[Vector]) -> Result<Vec<Vector>> {
    let dim = check_map(c, f)?;
    Ok((0..c.len())
        .map(|i| {
            let mut out = vec![0.0; dim];
            for &(j, a) in c.row(i) {
                for k in 0..dim {
                    out[k] += a * (f[j][k] - f[i][k]);
                }
            }
            out
        })
        .collect())
}

/// A trajectory together with `f(Z_s)`, `M_s`, `N_s` and the generator table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionTranscript {
    pub states: Vec<usize>,
    pub values: Vec<Vector>,
    pub m: Vec<Vector>,
    pub n: Vec<Vector>,
    pub lf: Vec<Vector>,
}

impl DecompositionTranscript {
    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }
}

fn forward_backward(states: &[usize], f: &[Vector], lf: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let t = states.len() - 1;
    let dim = f[0].len();
    let mut m = Vec::with_capacity(t + 1);
    let mut acc = vec![0.0; dim];
    for s in 0..=t {
        m.push(sub(&f[states[s]], &acc));
        add_assign(&mut acc, &lf[states[s]]);
    }
    let mut n = Vec::with_capacity(t + 1);
    let mut acc = vec![0.0; dim];
    for s in 0..=t {
        n.push(sub(&f[states[t - s]], &acc));
        add_assign(&mut acc, &lf[states[t - s]]);
    }
    (m, n)
}

/// Forward and backward martingales of `f` along `traj` (horizon at least 2).
pub fn decompose(c: &ReversibleChain, f: &[Vector], traj: &Trajectory) -> Result<DecompositionTranscript> {
    decompose_states(c, f, &traj.states)
}

/// [`decompose`] on a bare state sequence.
pub fn decompose_states(c: &ReversibleChain, f: &[Vector], states: &[usize]) -> Result<DecompositionTranscript> {
    check_map(c, f)?;
    if states.len() < 3 {
        return Err(Error::Parameter("decomposition needs a horizon of at least 2".into()));
    }
    if let Some(&z) = states.iter().find(|&&z| z >= c.len()) {
        return Err(Error::Parameter(format!("state {z} outside the chain")));
    }
    let lf = generator(c, f)?;
    let (m, n) = forward_backward(states, f, &lf);
    let values = states.iter().map(|&z| f[z].clone()).collect();
    Ok(DecompositionTranscript { states: states.to_vec(), values, m, n, lf })
}

/// Worst componentwise error of the increment identity over `1 <= s <= t-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub max_error: f64,
    pub worst_s: usize,
    pub pass: bool,
}

/// Check `f(Z_{s+1}) - f(Z_{s-1}) = (M_{s+1} - M_s) - (N_{t-s+1} - N_{t-s})`
/// componentwise within `1e-10` (relative to the magnitudes involved).
pub fn verify_identity(tr: &DecompositionTranscript) -> IdentityCheck {
    let t = tr.horizon();
    let mut worst = (0.0f64, 1usize, true);
    for s in 1..t {
        for k in 0..tr.values[0].len() {
            let lhs = tr.values[s + 1][k] - tr.values[s - 1][k];
            let rhs = (tr.m[s + 1][k] - tr.m[s][k]) - (tr.n[t - s + 1][k] - tr.n[t - s][k]);
            let scale = [tr.m[s + 1][k], tr.m[s][k], tr.n[t - s + 1][k], tr.n[t - s][k], lhs]
                .iter()
                .fold(1.0f64, |a, b| a.max(b.abs()));
            let err = (lhs - rhs).abs();
            if err > 1e-10 * scale {
                worst.2 = false;
            }
            if err > worst.0 {
                worst = (err, s, worst.2);
            }
        }
    }
    IdentityCheck { max_error: worst.0, worst_s: worst.1, pass: worst.2 }
}

/// Visit every path `Z_0..Z_t` with its probability.
fn for_each_path<F: FnMut(&[usize], f64)>(c: &ReversibleChain, t: usize, mut visit: F) -> Result<()> {
    let paths = (c.len() as u128).checked_pow(t as u32 + 1).unwrap_or(u128::MAX);
    if paths > caps().exact_paths {
        return Err(Error::CapExceeded { what: "exact path enumeration", requested: paths, cap: caps().exact_paths });
    }
    fn rec<F: FnMut(&[usize], f64)>(c: &ReversibleChain, t: usize, path: &mut Vec<usize>, w: f64, visit: &mut F) {
        if path.len() == t + 1 {
            visit(path, w);
            return;
        }
        let z = *path.last().unwrap();
        for &(j, a) in c.row(z) {
            path.push(j);
            rec(c, t, path, w * a, visit);
            path.pop();
        }
    }
    let mut path = Vec::with_capacity(t + 1);
    for z0 in 0..c.len() {
        path.push(z0);
        rec(c, t, &mut path, c.stationary()[z0], &mut visit);
        path.pop();
    }
    Ok(())
}

/// Largest violation of the martingale property of `M` (natural filtration)
/// and `N` (reversed filtration), by exact enumeration of all paths of
/// length `t`. Both values are zero up to roundoff for reversible chains.
pub fn martingale_property_gaps(c: &ReversibleChain, f: &[Vector], t: usize) -> Result<(f64, f64)> {
    check_map(c, f)?;
    let lf = generator(c, f)?;
    let dim = f[0].len();
    use std::collections::HashMap;
    // For each s and each conditioning key: (total weight, weighted next value, weighted current value).
    let mut fwd: HashMap<(usize, Vec<usize>), (f64, Vector, Vector)> = HashMap::new();
    let mut bwd: HashMap<(usize, Vec<usize>), (f64, Vector, Vector)> = HashMap::new();
    for_each_path(c, t, |path, w| {
        let (m, n) = forward_backward(path, f, &lf);
        for s in 0..t {
            let e = fwd.entry((s, path[..=s].to_vec())).or_insert_with(|| (0.0, vec![0.0; dim], vec![0.0; dim]));
            e.0 += w;
            for k in 0..dim {
                e.1[k] += w * m[s + 1][k];
                e.2[k] += w * m[s][k];
            }
            // N_s depends on Z_{t-s}..Z_t.
            let e = bwd.entry((s, path[t - s..].to_vec())).or_insert_with(|| (0.0, vec![0.0; dim], vec![0.0; dim]));
            e.0 += w;
            for k in 0..dim {
                e.1[k] += w * n[s + 1][k];
                e.2[k] += w * n[s][k];
            }
        }
    })?;
    let gap = |table: &HashMap<(usize, Vec<usize>), (f64, Vector, Vector)>| {
        table
            .values()
            .filter(|e| e.0 > 0.0)
            .flat_map(|e| (0..dim).map(move |k| ((e.1[k] - e.2[k]) / e.0).abs()))
            .fold(0.0, f64::max)
    };
    Ok((gap(&fwd), gap(&bwd)))
}

/// Exact stationary increment moments of `M` and `N` against `2^q E_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncrementBound {
    pub lhs_m: f64,
    pub lhs_n: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `max(E||dM||^q, E||dN||^q) <= 2^q E||f(Z_1) - f(Z_0)||^q`, with norms in
/// `l_norm_p`.
///
/// By stationarity `M_{s+1} - M_s = f(Z_{s+1}) - f(Z_s) - Lf(Z_s)` has the law
/// of `f(j) - f(i) - Lf(i)` under `pi_i a_ij`; the backward increment is
/// evaluated under the time-reversed kernel `pi_j a_ji / pi_i`.
pub fn increment_moment_bound(c: &ReversibleChain, f: &[Vector], q: f64, norm_p: f64) -> Result<IncrementBound> {
    if !(q >= 1.0) {
        return Err(Error::Parameter(format!("q must be at least 1, got {q}")));
    }
    let lf = generator(c, f)?;
    let pi = c.stationary();
    let n = c.len();
    let mut lhs_m = 0.0;
    let mut lhs_n = 0.0;
    let mut rhs = 0.0;
    for i in 0..n {
        for &(j, a) in c.row(i) {
            let step = sub(&f[j], &f[i]);
            let inc = sub(&step, &lf[i]);
            lhs_m += pi[i] * a * lp_norm(&inc, norm_p).powf(q);
            rhs += pi[i] * a * lp_norm(&step, norm_p).powf(q);
        }
        for j in 0..n {
            let reversed = pi[j] * c.a(j, i) / pi[i];
            if reversed > 0.0 {
                let inc = sub(&sub(&f[j], &f[i]), &lf[i]);
                lhs_n += pi[i] * reversed * lp_norm(&inc, norm_p).powf(q);
            }
        }
    }
    let rhs = 2f64.powf(q) * rhs;
    Ok(IncrementBound { lhs_m, lhs_n, rhs, pass: le_with_slack(lhs_m.max(lhs_n), rhs) })
}

/// Power-type `q` smoothness constant `S_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessSpec {
    pub q: f64,
    pub s: f64,
}

impl SmoothnessSpec {
    pub fn new(q: f64, s: f64) -> Result<Self> {
        if !(q > 1.0 && q <= 2.0) {
            return Err(Error::Parameter(format!("smoothness power must lie in (1,2], got {q}")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Parameter(format!("smoothness constant must be positive, got {s}")));
        }
        Ok(SmoothnessSpec { q, s })
    }

    /// `q = 2`, `S_2 = sqrt(p-1)` for `l_p`, `p >= 2`.
    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 2.0) {
            return Err(Error::Parameter(format!("S_2 = sqrt(p-1) needs p >= 2, got {p}")));
        }
        Self::new(2.0, (p - 1.0).sqrt())
    }

    /// `S_q^q / (2^(q-1) - 1)`.
    pub fn martingale_factor(&self) -> f64 {
        self.s.powf(self.q) / (2f64.powf(self.q - 1.0) - 1.0)
    }
}

/// Power-type `q` convexity constant `K_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexitySpec {
    pub q: f64,
    pub k: f64,
}

impl ConvexitySpec {
    pub fn new(q: f64, k: f64) -> Result<Self> {
        if !(q >= 2.0) {
            return Err(Error::Parameter(format!("convexity power must be at least 2, got {q}")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter(format!("convexity constant must be positive, got {k}")));
        }
        Ok(ConvexitySpec { q, k })
    }

    /// `q = 2`, `K_2 = 1/sqrt(p-1)` for `l_p`, `1 < p <= 2`.
    pub fn lp(p: f64) -> Result<Self> {
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::Parameter(format!("K_2 = 1/sqrt(p-1) needs 1 < p <= 2, got {p}")));
        }
        Self::new(2.0, 1.0 / (p - 1.0).sqrt())
    }
}

/// Both sides of a two-point inequality `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn two_point(lhs: f64, rhs: f64) -> TwoPointCheck {
    TwoPointCheck { lhs, rhs, pass: lhs <= rhs * (1.0 + 1e-9) + 1e-300 }
}

/// `||x+y||^q + ||x-y||^q <= 2||x||^q + 2 S^q ||y||^q` in `l_norm_p`.
pub fn smoothness_two_point_check(x: &[f64], y: &[f64], spec: SmoothnessSpec, norm_p: f64) -> Result<TwoPointCheck> {
    if x.len() != y.len() {
        return Err(Error::Parameter("vectors of different dimension".into()));
    }
    let q = spec.q;
    let plus: Vector = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let minus = sub(x, y);
    let lhs = lp_norm(&plus, norm_p).powf(q) + lp_norm(&minus, norm_p).powf(q);
    let rhs = 2.0 * lp_norm(x, norm_p).powf(q) + 2.0 * spec.s.powf(q) * lp_norm(y, norm_p).powf(q);
    Ok(two_point(lhs, rhs))
}

/// `2||x||^q + (2/K^q) ||y||^q <= ||x+y||^q + ||x-y||^q` in `l_norm_p`.
pub fn convexity_two_point_check(x: &[f64], y: &[f64], spec: ConvexitySpec, norm_p: f64) -> Result<TwoPointCheck> {
    if x.len() != y.len() {
        return Err(Error::Parameter("vectors of different dimension".into()));
    }
    let q = spec.q;
    let plus: Vector = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let minus = sub(x, y);
    let lhs = 2.0 * lp_norm(x, norm_p).powf(q) + 2.0 / spec.k.powf(q) * lp_norm(y, norm_p).powf(q);
    let rhs = lp_norm(&plus, norm_p).powf(q) + lp_norm(&minus, norm_p).powf(q);
    Ok(two_point(lhs, rhs))
}

/// Which increments of a decomposition feed the martingale sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncrementFamily {
    /// `M_{k+1} - M_k`, `k = 0..t-1`.
    Forward,
    /// `N_{k+1} - N_k`, `k = 0..t-1`.
    Backward,
    /// `M_{2k} - M_{2k-1}`, `k = 1..t/2`.
    ForwardOddSteps,
    /// `N_{2k} - N_{2k-1}`, `k = 1..t/2`.
    BackwardOddSteps,
}

impl IncrementFamily {
    fn increments(self, m: &[Vector], n: &[Vector]) -> Vec<Vector> {
        let t = m.len() - 1;
        let seq = match self {
            IncrementFamily::Forward | IncrementFamily::ForwardOddSteps => m,
            IncrementFamily::Backward | IncrementFamily::BackwardOddSteps => n,
        };
        match self {
            IncrementFamily::Forward | IncrementFamily::Backward => (0..t).map(|k| sub(&seq[k + 1], &seq[k])).collect(),
            _ => (1..=t / 2).map(|k| sub(&seq[2 * k], &seq[2 * k - 1])).collect(),
        }
    }
}

/// One step of an independent-increment martingale: a finite law of vectors.
pub type FiniteLaw = Vec<(f64, Vector)>;

/// Registered sources of martingale differences for [`pisier_sum_check`].
#[derive(Debug, Clone, Copy)]
pub enum IncrementSource<'a> {
    Transcript { chain: &'a ReversibleChain, f: &'a [Vector], t: usize, family: IncrementFamily },
    /// Independent increments, each with mean zero.
    Independent(&'a [FiniteLaw]),
}

/// `E||sum dM||^q` against `S^q/(2^(q-1)-1) sum E||dM||^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PisierCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Present for Monte Carlo evaluations.
    pub stderr: Option<f64>,
    pub exact: bool,
    pub pass: bool,
}

/// Martingale-sum inequality in `l_norm_p` for smoothness `spec`.
///
/// Transcript sources are enumerated exactly when `n^(t+1)` is within the
/// exact-path cap and otherwise sampled with `trials` trajectories of
/// `seed`; the pass decision then allows `3 * stderr`.
pub fn pisier_sum_check(
    source: IncrementSource<'_>,
    spec: SmoothnessSpec,
    norm_p: f64,
    trials: usize,
    seed: u64,
) -> Result<PisierCheck> {
    let q = spec.q;
    let factor = spec.martingale_factor();
    let finish = |lhs: f64, sum: f64, stderr: Option<f64>| {
        let rhs = factor * sum;
        let margin = stderr.map_or(0.0, |s| 3.0 * s);
        PisierCheck { lhs, rhs, stderr, exact: stderr.is_none(), pass: le_with_slack(lhs, rhs + margin) }
    };
    match source {
        IncrementSource::Independent(laws) => {
            if laws.is_empty() {
                return Err(Error::Parameter("no increments".into()));
            }
            let dim = laws[0].first().map_or(0, |(_, v)| v.len());
            for (k, law) in laws.iter().enumerate() {
                let total: f64 = law.iter().map(|(p, _)| p).sum();
                if (total - 1.0).abs() > 1e-12 || law.iter().any(|(p, v)| *p < 0.0 || v.len() != dim) {
                    return Err(Error::Hypothesis(format!("increment {k} is not a probability law on R^{dim}")));
                }
                let mean: Vector = (0..dim).map(|c| law.iter().map(|(p, v)| p * v[c]).sum()).collect();
                if lp_norm(&mean, 2.0) > 1e-12 {
                    return Err(Error::Hypothesis(format!(
                        "increment {k} has nonzero mean, so it is not a martingale difference"
                    )));
                }
            }
            let count: u128 = laws.iter().map(|l| l.len() as u128).product();
            if count > caps().exact_paths {
                return Err(Error::CapExceeded { what: "independent increment enumeration", requested: count, cap: caps().exact_paths });
            }
            let sum: f64 = laws
                .iter()
                .map(|law| law.iter().map(|(p, v)| p * lp_norm(v, norm_p).powf(q)).sum::<f64>())
                .sum();
            fn rec(laws: &[FiniteLaw], acc: &mut Vector, w: f64, q: f64, norm_p: f64) -> f64 {
                match laws.split_first() {
                    None => w * lp_norm(acc, norm_p).powf(q),
                    Some((law, rest)) => law
                        .iter()
                        .map(|(p, v)| {
                            add_assign(acc, v);
                            let r = rec(rest, acc, w * p, q, norm_p);
                            acc.iter_mut().zip(v).for_each(|(a, b)| *a -= b);
                            r
                        })
                        .sum(),
                }
            }
            let lhs = rec(laws, &mut vec![0.0; dim], 1.0, q, norm_p);
            Ok(finish(lhs, sum, None))
        }
        IncrementSource::Transcript { chain, f, t, family } => {
            check_map(chain, f)?;
            if t < 2 {
                return Err(Error::Parameter("transcript increments need t >= 2".into()));
            }
            let lf = generator(chain, f)?;
            let eval = |path: &[usize]| -> (f64, f64) {
                let (m, n) = forward_backward(path, f, &lf);
                let inc = family.increments(&m, &n);
                let dim = f[0].len();
                let mut total = vec![0.0; dim];
                let mut each = 0.0;
                for d in &inc {
                    add_assign(&mut total, d);
                    each += lp_norm(d, norm_p).powf(q);
                }
                (lp_norm(&total, norm_p).powf(q), each)
            };
            let paths = (chain.len() as u128).checked_pow(t as u32 + 1).unwrap_or(u128::MAX);
            if paths <= caps().exact_paths {
                let (mut lhs, mut sum) = (0.0, 0.0);
                for_each_path(chain, t, |path, w| {
                    let (a, b) = eval(path);
                    lhs += w * a;
                    sum += w * b;
                })?;
                Ok(finish(lhs, sum, None))
            } else {
                if trials < 2 {
                    return Err(Error::Parameter("Monte Carlo evaluation needs at least 2 trials".into()));
                }
                let samples: Vec<(f64, f64)> = (0..trials)
                    .into_par_iter()
                    .map(|k| {
                        let tr = chain.sample_trajectory(t, seed, k as u64).expect("t >= 2");
                        eval(&tr.states)
                    })
                    .collect();
                // The pass decision uses the stderr of the difference lhs - rhs.
                let diffs: Vec<f64> = samples.iter().map(|(a, b)| a - factor * b).collect();
                let lhs = samples.iter().map(|s| s.0).sum::<f64>() / trials as f64;
                let sum = samples.iter().map(|s| s.1).sum::<f64>() / trials as f64;
                let stderr = Estimate::from_samples(&diffs).stderr;
                Ok(finish(lhs, sum, Some(stderr)))
            }
        }
    }
}

/// Each link of the chain of inequalities that bounds
/// `E||f(Z_t) - f(Z_0)||^2` in a space with smoothness constant `S_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplayReport {
    pub t: usize,
    /// Even horizon the martingale argument runs on (`t` or `t - 1`).
    pub even_t: usize,
    pub e_t: f64,
    pub e_1: f64,
    /// `E||f(Z_even) - f(Z_0)||^2`.
    pub e_even: f64,
    /// `E||sum (M_2k - M_2k-1)||^2` and the backward counterpart.
    pub forward_sum: f64,
    pub backward_sum: f64,
    /// `sum_k E||M_2k - M_2k-1||^2` and the backward counterpart.
    pub forward_increments: f64,
    pub backward_increments: f64,
    /// `16 S^2 t E_1`.
    pub final_bound: f64,
    pub links_pass: [bool; 4],
    pub pass: bool,
}

/// Exact replay of the martingale proof of the Markov type 2 bound for a
/// chain mapped into `l_norm_p` with smoothness constant `s2`.
pub fn markov_type2_replay(c: &ReversibleChain, f: &[Vector], norm_p: f64, s2: f64, t: usize) -> Result<ReplayReport> {
    check_map(c, f)?;
    if t < 2 {
        return Err(Error::Parameter("replay needs t >= 2".into()));
    }
    let even_t = t - t % 2;
    let lf = generator(c, f)?;
    let (mut e_t, mut e_even) = (0.0, 0.0);
    let (mut fs, mut bs, mut fi, mut bi) = (0.0, 0.0, 0.0, 0.0);
    for_each_path(c, t, |path, w| {
        let head = &path[..=even_t];
        let (m, n) = forward_backward(head, f, &lf);
        let sq = |v: &[f64]| lp_norm(v, norm_p).powi(2);
        e_t += w * sq(&sub(&f[path[t]], &f[path[0]]));
        e_even += w * sq(&sub(&f[path[even_t]], &f[path[0]]));
        for (family, sum_acc, inc_acc) in [
            (IncrementFamily::ForwardOddSteps, &mut fs, &mut fi),
            (IncrementFamily::BackwardOddSteps, &mut bs, &mut bi),
        ] {
            let inc = family.increments(&m, &n);
            let mut total = vec![0.0; f[0].len()];
            for d in &inc {
                add_assign(&mut total, d);
                *inc_acc += w * sq(d);
            }
            *sum_acc += w * sq(&total);
        }
    })?;
    let e_1: f64 = (0..c.len())
        .map(|i| c.stationary()[i] * c.row(i).iter().map(|&(j, a)| a * lp_norm(&sub(&f[j], &f[i]), norm_p).powi(2)).sum::<f64>())
        .sum();
    let s2sq = s2 * s2;
    let links_pass = [
        // even/odd split and (a+b)^2 <= 2a^2 + 2b^2
        le_with_slack(e_even, 2.0 * fs + 2.0 * bs),
        // martingale sums
        le_with_slack(fs, s2sq * fi) && le_with_slack(bs, s2sq * bi),
        // increment bound with 2^q = 4 per increment, t/2 increments each
        le_with_slack(fi + bi, 4.0 * even_t as f64 * e_1),
        // odd horizons: one more step
        t == even_t || le_with_slack(e_t, 2.0 * e_even + 2.0 * e_1),
    ];
    let final_bound = 16.0 * s2sq * t as f64 * e_1;
    let pass = links_pass.iter().all(|&b| b) && le_with_slack(e_t, final_bound);
    Ok(ReplayReport {
        t,
        even_t,
        e_t,
        e_1,
        e_even,
        forward_sum: fs,
        backward_sum: bs,
        forward_increments: fi,
        backward_increments: bi,
        final_bound,
        links_pass,
        pass,
    })
}

/// Random point of `[-1, 1]^dim` scaled by a random magnitude.
pub fn random_vector<R: rand::Rng>(rng: &mut R, dim: usize) -> Vector {
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    (0..dim).map(|_| scale * rng.random_range(-1.0..1.0)).collect()
}

/// Reproducible random vector stream used by the two-point suites.
pub fn two_point_pairs(seed: u64, count: usize, max_dim: usize) -> Vec<(Vector, Vector)> {
    use rand::Rng;
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, k as u64);
            let dim = r.random_range(1..=max_dim);
            (random_vector(&mut r, dim), random_vector(&mut r, dim))
        })
        .collect()
}
