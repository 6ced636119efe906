//! Glue identity charts of a planar point set with bump functions and
//! audit the result.

use markov_type_lab::extension::{audit_glue, glue_embedding, IdentityCharts};
use markov_type_lab::{rng, LpPointSet, MetricSpace};
use rand::Rng;

fn main() -> markov_type_lab::Result<()> {
    let mut r = rng::stream(3, 0);
    let pts: Vec<Vec<f64>> = (0..120).map(|_| vec![r.random_range(0.0..8.0), r.random_range(0.0..8.0)]).collect();
    let space = MetricSpace::from_lp(LpPointSet::new(2.0, pts)?);
    let charts = IdentityCharts::new(&space)?;
    for eps in [0.5, 1.0, 2.0] {
        let g = glue_embedding(&space, eps, 1.0, &charts)?;
        let a = audit_glue(&space, &g);
        println!(
            "eps={eps}: {} blocks (<= {}), Lipschitz {:.3} (<= {}), {} close pairs, min ratio {:.3}",
            a.blocks, a.block_bound, a.lipschitz, a.lipschitz_bound, a.close_pairs, a.close_ratio
        );
    }
    Ok(())
}
