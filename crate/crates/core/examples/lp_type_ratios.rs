//! Type ratios of a random walk on a cycle mapped into l_3, against the
//! `4 sqrt(p-1)` certificate.

use markov_type_lab::markov_type::{lp_type2_certificate, type_ratio_curve, vector_map};
use markov_type_lab::{ReversibleChain, WeightedGraph};

fn main() -> markov_type_lab::Result<()> {
    let n = 12;
    let chain = ReversibleChain::random_walk(&WeightedGraph::cycle(n)?, None)?;
    // Points on a helix in l_3^3.
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            vec![a.cos(), a.sin(), 0.2 * i as f64]
        })
        .collect();
    let (space, map) = vector_map(3.0, &points)?;
    let cert = lp_type2_certificate(3.0)?;
    println!("{:>4} {:>12} {:>10}", "t", "E_t", "K(t)");
    for r in type_ratio_curve(&chain, &space, &map, 2.0, 32, Some(cert))?.iter().step_by(4) {
        println!("{:>4} {:>12.6} {:>10.6}", r.t, r.e_t, r.ratio.unwrap_or(f64::NAN));
    }
    println!("certificate 4 sqrt(p-1) = {cert:.6}");
    Ok(())
}
