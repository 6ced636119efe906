//! The lower-bound experiment for trees: Pitman's `2M - S` transform of the
//! simple random walk, the walk conditioned to stay positive, and a lazy
//! simulator of the biased walk on very deep binary trees.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::caps;
use crate::error::{Error, Result};
use crate::markov_type::Estimate;
use crate::rng;

/// A finitely supported law on the integers at horizon `horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkLaw {
    pub horizon: usize,
    pub support: Vec<i64>,
    pub probabilities: Vec<f64>,
}

impl WalkLaw {
    /// Drops zero-mass points; `offset` is the value of `dense[0]`.
    fn from_dense(horizon: usize, offset: i64, dense: &[f64]) -> Self {
        let (support, probabilities) = dense
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| (offset + k as i64, *p))
            .unzip();
        WalkLaw { horizon, support, probabilities }
    }

    pub fn point_mass(horizon: usize, value: i64) -> Self {
        WalkLaw { horizon, support: vec![value], probabilities: vec![1.0] }
    }

    pub fn probability(&self, value: i64) -> f64 {
        self.support.iter().position(|&v| v == value).map_or(0.0, |k| self.probabilities[k])
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `E X^k`.
    pub fn moment(&self, k: i32) -> f64 {
        self.support.iter().zip(&self.probabilities).map(|(&v, p)| p * (v as f64).powi(k)).sum()
    }

    pub fn total_variation(&self, other: &WalkLaw) -> f64 {
        let mut values: Vec<i64> = self.support.iter().chain(&other.support).copied().collect();
        values.sort_unstable();
        values.dedup();
        values.iter().map(|&v| (self.probability(v) - other.probability(v)).abs()).sum::<f64>() / 2.0
    }
}

fn check_pitman_horizon(n: usize) -> Result<()> {
    if n > caps().pitman_horizon {
        return Err(Error::CapExceeded { what: "Pitman horizon", requested: n as u128, cap: caps().pitman_horizon as u128 });
    }
    Ok(())
}

/// Joint law of `(M_n, M_n - S_n)` for the simple random walk, indexed as
/// `law[m][g]` with `m + g <= n`; one step at a time.
struct PitmanLattice {
    n: usize,
    law: Vec<Vec<f64>>,
}

impl PitmanLattice {
    fn new(n_max: usize) -> Self {
        let mut law = vec![vec![0.0; n_max + 1]; n_max + 1];
        law[0][0] = 1.0;
        PitmanLattice { n: 0, law }
    }

    fn step(&mut self) {
        let n = self.n;
        let mut next = vec![vec![0.0; self.law.len()]; self.law.len()];
        for m in 0..=n {
            for g in 0..=n - m {
                let p = self.law[m][g];
                if p == 0.0 {
                    continue;
                }
                // Down step: the gap to the maximum grows.
                next[m][g + 1] += p / 2.0;
                // Up step: close the gap, or push the maximum.
                if g > 0 {
                    next[m][g - 1] += p / 2.0;
                } else {
                    next[m + 1][0] += p / 2.0;
                }
            }
        }
        self.law = next;
        self.n += 1;
    }

    /// Law of `2M - S = M + (M - S)`.
    fn transform(&self) -> WalkLaw {
        let mut dense = vec![0.0; self.n + 1];
        for m in 0..=self.n {
            for g in 0..=self.n - m {
                dense[m + g] += self.law[m][g];
            }
        }
        WalkLaw::from_dense(self.n, 0, &dense)
    }
}

/// Exact law of `2M_n - S_n`, `M_n = max_{t<=n} S_t`, by a dynamic program
/// on the joint `(M, M - S)` lattice.
pub fn pitman_law(n: usize) -> Result<WalkLaw> {
    check_pitman_horizon(n)?;
    let mut lattice = PitmanLattice::new(n);
    for _ in 0..n {
        lattice.step();
    }
    Ok(lattice.transform())
}

/// `E(2M_k - S_k)^2` for `k = 0..=n` from a single pass of the lattice.
pub fn pitman_moments(n: usize) -> Result<Vec<f64>> {
    check_pitman_horizon(n)?;
    let mut lattice = PitmanLattice::new(n);
    let mut out = vec![0.0];
    for _ in 0..n {
        lattice.step();
        out.push(lattice.transform().moment(2));
    }
    Ok(out)
}

/// Law of `2M_n - S_n` by enumerating all `2^n` paths.
pub fn pitman_law_enumerated(n: usize) -> Result<WalkLaw> {
    let paths = 1u128 << n.min(127);
    if n >= 127 || paths > caps().exact_paths {
        return Err(Error::CapExceeded { what: "walk path enumeration", requested: paths, cap: caps().exact_paths });
    }
    let mut dense = vec![0.0; n + 1];
    let w = 0.5f64.powi(n as i32);
    for bits in 0u64..(1u64 << n) {
        let (mut s, mut m) = (0i64, 0i64);
        for k in 0..n {
            s += if bits >> k & 1 == 1 { 1 } else { -1 };
            m = m.max(s);
        }
        dense[(2 * m - s) as usize] += w;
    }
    Ok(WalkLaw::from_dense(n, 0, &dense))
}

/// Law at time `n` of the chain on `{0, 1, ...}` started at 0 with
/// `p(x, x+1) = (x+2)/(2(x+1))` and `p(x, x-1) = x/(2(x+1))`.
pub fn pitman_chain_law(n: usize) -> Result<WalkLaw> {
    check_pitman_horizon(n)?;
    let mut law = vec![0.0; n + 2];
    law[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; n + 2];
        for (x, &p) in law.iter().enumerate() {
            if p == 0.0 || x + 1 >= law.len() {
                continue;
            }
            let xf = x as f64;
            next[x + 1] += p * (xf + 2.0) / (2.0 * (xf + 1.0));
            if x > 0 {
                next[x - 1] += p * xf / (2.0 * (xf + 1.0));
            }
        }
        law = next;
    }
    Ok(WalkLaw::from_dense(n, 0, &law))
}

/// Law of `S_n` for the walk on `{1, 2, ...}` with `p(x, x+-1) = (x+-1)/(2x)`
/// started at `start`. Its second moment is exactly `3n + start^2`.
pub fn conditioned_walk_law(n: usize, start: i64) -> Result<WalkLaw> {
    if start < 1 {
        return Err(Error::Parameter(format!("the conditioned walk lives on x >= 1, got start {start}")));
    }
    check_pitman_horizon(n)?;
    // dense[k] is the mass at start - n + k, clipped below at 1.
    let offset = start - n as i64;
    let mut law = vec![0.0; 2 * n + 1];
    law[n] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; 2 * n + 1];
        for k in 0..law.len() {
            let p = law[k];
            if p == 0.0 {
                continue;
            }
            let x = (offset + k as i64) as f64;
            next[k + 1] += p * (x + 1.0) / (2.0 * x);
            if x > 1.0 {
                next[k - 1] += p * (x - 1.0) / (2.0 * x);
            }
        }
        law = next;
    }
    Ok(WalkLaw::from_dense(n, offset, &law))
}

/// `E S_k^2` of the conditioned walk from `start` for `k = 0..=n`, from a
/// single pass of the transition table.
pub fn conditioned_walk_moments(n: usize, start: i64) -> Result<Vec<f64>> {
    if start < 1 {
        return Err(Error::Parameter(format!("the conditioned walk lives on x >= 1, got start {start}")));
    }
    check_pitman_horizon(n)?;
    let offset = start - n as i64;
    let mut law = vec![0.0; 2 * n + 1];
    law[n] = 1.0;
    let moment = |law: &[f64]| law.iter().enumerate().map(|(k, p)| p * ((offset + k as i64) as f64).powi(2)).sum::<f64>();
    let mut out = vec![moment(&law)];
    for _ in 0..n {
        let mut next = vec![0.0; 2 * n + 1];
        for k in 0..law.len() {
            let p = law[k];
            if p == 0.0 {
                continue;
            }
            let x = (offset + k as i64) as f64;
            next[k + 1] += p * (x + 1.0) / (2.0 * x);
            if x > 1.0 {
                next[k - 1] += p * (x - 1.0) / (2.0 * x);
            }
        }
        law = next;
        out.push(moment(&law));
    }
    Ok(out)
}

/// Law of the simple random walk `S_n` from 0.
pub fn simple_walk_law(n: usize) -> WalkLaw {
    // Binomial via a running product keeps every term in floating range.
    let mut dense = vec![0.0; 2 * n + 1];
    let logc = |k: usize| -> f64 {
        (1..=n).map(|i| (i as f64).ln()).sum::<f64>()
            - (1..=k).map(|i| (i as f64).ln()).sum::<f64>()
            - (1..=n - k).map(|i| (i as f64).ln()).sum::<f64>()
    };
    for k in 0..=n {
        dense[2 * k] = (logc(k) - n as f64 * 2f64.ln()).exp();
    }
    WalkLaw::from_dense(n, -(n as i64), &dense)
}

/// Law of `d(Z_0, Z_n)` given `M~ = m` and `S~ = s`: the value
/// `2m - s - 2k` with probability `2^{-k-1}` for `k < l` and the remaining
/// mass `2^{-l}` at `k = l`, where `l = min(m, m - s)`.
pub fn conditional_distance_law(m: i64, s: i64) -> Result<WalkLaw> {
    if m < 0 || m < s {
        return Err(Error::Parameter(format!("need M~ >= max(0, S~), got M~={m}, S~={s}")));
    }
    let top = 2 * m - s;
    let l = m.min(m - s);
    let mut support = Vec::with_capacity(l as usize + 1);
    let mut probabilities = Vec::with_capacity(l as usize + 1);
    for k in (0..=l).rev() {
        support.push(top - 2 * k);
        probabilities.push(if k == l { 0.5f64.powi(l as i32) } else { 0.5f64.powi(k as i32 + 1) });
    }
    Ok(WalkLaw { horizon: 0, support, probabilities })
}

/// State of the walk on a complete binary tree of depth `h`, stored relative
/// to the starting vertex: the current vertex shares the first `common`
/// label bits with `Z_0` and then follows `tail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyTreeState {
    pub h: u64,
    pub start_depth: u64,
    /// Bits of `Z_0` at depths `start_depth - window .. start_depth`; deeper
    /// ancestors are never left by a walk of `window` steps.
    start_bits: Vec<bool>,
    window: u64,
    pub common: u64,
    tail: Vec<bool>,
}

impl LazyTreeState {
    fn new<R: Rng>(h: u64, horizon: u64, rng: &mut R) -> Self {
        // Depth law: 1/h on 1..h-1 and 1/(2h) at 0 and h.
        let u = rng.random_range(0..2 * h);
        let start_depth = u.div_ceil(2);
        let window = start_depth.min(horizon);
        let start_bits = (0..window).map(|_| rng.random()).collect();
        LazyTreeState { h, start_depth, start_bits, window, common: start_depth, tail: Vec::new() }
    }

    pub fn depth(&self) -> u64 {
        self.common + self.tail.len() as u64
    }

    pub fn distance_to_start(&self) -> u64 {
        self.start_depth - self.common + self.tail.len() as u64
    }

    fn bit_of_start(&self, depth: u64) -> bool {
        self.start_bits[(depth + self.window - self.start_depth) as usize]
    }

    fn up(&mut self) {
        if self.tail.pop().is_none() {
            self.common -= 1;
        }
    }

    fn down(&mut self, bit: bool) {
        if self.tail.is_empty() && self.common < self.start_depth && self.bit_of_start(self.common) == bit {
            self.common += 1;
        } else {
            self.tail.push(bit);
        }
    }

    fn step<R: Rng>(&mut self, rng: &mut R) {
        let depth = self.depth();
        if depth == self.h {
            self.up();
        } else if depth == 0 {
            self.down(rng.random());
        } else {
            match rng.random_range(0..4u8) {
                0 | 1 => self.up(),
                2 => self.down(false),
                _ => self.down(true),
            }
        }
    }
}

/// One simulated stationary trajectory of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeWalkSample {
    pub start_depth: u64,
    /// `S~_n = |Z_0| - |Z_n|`.
    pub s_tilde: i64,
    /// `M~_n = max_{t<=n} S~_t`.
    pub m_tilde: i64,
    pub distance: u64,
}

/// Trajectories of the stationary biased walk on `T_h`; trial `k` uses
/// stream `k` of `seed`.
pub fn tree_walk_samples(h: u64, n: u64, trials: usize, seed: u64) -> Result<Vec<TreeWalkSample>> {
    if h < 1 || n < 1 || trials < 1 {
        return Err(Error::Parameter(format!("need h, n, trials >= 1, got {h}, {n}, {trials}")));
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, k as u64);
            let mut state = LazyTreeState::new(h, n, &mut r);
            let start = state.start_depth as i64;
            let mut m_tilde = 0i64;
            for _ in 0..n {
                state.step(&mut r);
                m_tilde = m_tilde.max(start - state.depth() as i64);
            }
            TreeWalkSample {
                start_depth: state.start_depth,
                s_tilde: start - state.depth() as i64,
                m_tilde,
                distance: state.distance_to_start(),
            }
        })
        .collect())
}

/// Monte Carlo reproduction of the lower bound `E d(Z_0,Z_n)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeWalkReport {
    pub h: u64,
    pub n: u64,
    pub estimate: Estimate,
    /// `E(2M~_n - S~_n)^2`.
    pub pitman_moment: Estimate,
    /// `3(1 - 2n/(h+1)) n - 8 sqrt(3n)`.
    pub paper_bound: f64,
    /// `estimate / n`.
    pub ratio: f64,
    /// `estimate >= paper_bound - 3 stderr`.
    pub pass: bool,
}

pub fn lower_bound(h: u64, n: u64) -> f64 {
    let (hf, nf) = (h as f64, n as f64);
    3.0 * (1.0 - 2.0 * nf / (hf + 1.0)) * nf - 8.0 * (3.0 * nf).sqrt()
}

pub fn tree_walk_simulate(h: u64, n: u64, trials: usize, seed: u64) -> Result<TreeWalkReport> {
    let samples = tree_walk_samples(h, n, trials, seed)?;
    let d2: Vec<f64> = samples.iter().map(|s| (s.distance as f64).powi(2)).collect();
    let p2: Vec<f64> = samples.iter().map(|s| ((2 * s.m_tilde - s.s_tilde) as f64).powi(2)).collect();
    let estimate = Estimate::from_samples(&d2);
    let paper_bound = lower_bound(h, n);
    Ok(TreeWalkReport {
        h,
        n,
        estimate,
        pitman_moment: Estimate::from_samples(&p2),
        paper_bound,
        ratio: estimate.mean / n as f64,
        pass: estimate.mean >= paper_bound - 3.0 * estimate.stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pitman_small_horizons() {
        assert_eq!(pitman_law(0).unwrap(), WalkLaw::point_mass(0, 0));
        assert_eq!(pitman_law(1).unwrap(), WalkLaw::point_mass(1, 1));
        let two = pitman_law(2).unwrap();
        assert_eq!((two.probability(0), two.probability(2)), (0.25, 0.75));
        assert_eq!(two.moment(2), 3.0);
        assert_eq!(pitman_law(3).unwrap().moment(2), 5.0);
        assert_eq!(pitman_moments(3).unwrap(), vec![0.0, 1.0, 3.0, 5.0]);
    }

    #[test]
    fn pitman_dp_matches_enumeration_and_chain() {
        for n in 0..=14 {
            let dp = pitman_law(n).unwrap();
            assert!(dp.total_variation(&pitman_law_enumerated(n).unwrap()) < 1e-12);
            assert!(dp.total_variation(&pitman_chain_law(n).unwrap()) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn conditioned_second_moments() {
        assert_eq!(conditioned_walk_law(1, 1).unwrap(), WalkLaw::point_mass(1, 2));
        let two = conditioned_walk_law(2, 1).unwrap();
        assert_eq!((two.probability(3), two.probability(1)), (0.75, 0.25));
        for start in [1, 2, 5] {
            for n in [1, 7, 40] {
                let law = conditioned_walk_law(n, start).unwrap();
                assert!((law.moment(2) - (3 * n as i64 + start * start) as f64).abs() < 1e-9 * n as f64);
                assert!((law.total_mass() - 1.0).abs() < 1e-12);
            }
        }
        assert!(conditioned_walk_law(3, 0).is_err());
        let table = conditioned_walk_moments(40, 2).unwrap();
        assert!((table[40] - conditioned_walk_law(40, 2).unwrap().moment(2)).abs() < 1e-9);
    }

    #[test]
    fn distance_law_examples() {
        let law = conditional_distance_law(2, 0).unwrap();
        assert_eq!((law.probability(4), law.probability(2), law.probability(0)), (0.5, 0.25, 0.25));
        assert_eq!(conditional_distance_law(0, 0).unwrap().support, vec![0]);
        assert!(conditional_distance_law(1, 2).is_err());
        for m in 0..12 {
            for s in -12..=m {
                let law = conditional_distance_law(m, s).unwrap();
                assert_eq!(law.total_mass(), 1.0);
                let top = (2 * m - s) as f64;
                assert!(law.moment(2) >= top * top - 8.0 * top - 1e-9);
            }
        }
    }

    #[test]
    fn single_step_moves_one_edge() {
        for h in [1, 2, 7, 1000] {
            let samples = tree_walk_samples(h, 1, 2000, 4).unwrap();
            assert!(samples.iter().all(|s| s.distance == 1));
        }
    }

    #[test]
    fn simple_walk_law_is_binomial() {
        let law = simple_walk_law(4);
        assert_eq!(law.support, vec![-4, -2, 0, 2, 4]);
        assert!((law.probability(0) - 6.0 / 16.0).abs() < 1e-14);
        assert!((law.moment(2) - 4.0).abs() < 1e-12);
    }
}
