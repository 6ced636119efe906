use markov_type_lab::markov_type::{moment_curve_montecarlo, pair_moment, PointMap};
use markov_type_lab::metric::Laakso;
use markov_type_lab::ReversibleChain;

fn main() -> markov_type_lab::Result<()> {
    for level in 1..=3 {
        let g = Laakso::new(level)?;
        println!(
            "G_{level}: {} vertices, {} edges, diameter {}",
            g.graph().vertex_count(),
            g.graph().edge_count(),
            g.metric().diameter()
        );
    }
    let g = Laakso::new(3)?;
    let walk = ReversibleChain::random_walk(g.graph(), None)?;
    let id = PointMap::identity(g.graph().vertex_count());
    let e1 = pair_moment(&walk, g.metric(), &id, 2.0, 1)?;

    let traj = walk.sample_trajectory(30, 4, 0)?;
    let j = g.path_lemma_witness(&traj.states)?;
    println!("path-lemma witness for a 30-step walk: index {j}");

    for (k, est) in moment_curve_montecarlo(&walk, g.metric(), &id, 2.0, 32, 5000, 2)?.iter().enumerate() {
        let t = k + 1;
        if t.is_power_of_two() {
            println!("t={t:>2}  E d^2 / (t E_1) = {:.4} +- {:.4}", est.mean / (t as f64 * e1), est.stderr / (t as f64 * e1));
        }
    }
    Ok(())
}
