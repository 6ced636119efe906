//! Under the lazy deep-tree simulator, the depth change of the walk started
//! away from the root and the leaves is a simple random walk.

use markov_type_lab::tree_walk::{simple_walk_law, tree_walk_samples};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn depth_change_matches_the_simple_walk() {
    let (h, n) = (1000u64, 12u64);
    let samples = tree_walk_samples(h, n, 60_000, 17).unwrap();
    let interior: Vec<i64> =
        samples.iter().filter(|s| s.start_depth >= n && s.start_depth <= h - n).map(|s| s.s_tilde).collect();
    let law = simple_walk_law(n as usize);
    let total = interior.len() as f64;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&v, &p) in law.support.iter().zip(&law.probabilities) {
        let expected = p * total;
        if expected < 5.0 {
            continue;
        }
        let observed = interior.iter().filter(|&&s| s == v).count() as f64;
        stat += (observed - expected).powi(2) / expected;
        cells += 1;
    }
    let p_value = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
    assert!(p_value > 1e-3, "chi-square {stat} on {cells} cells, p = {p_value}");
}
