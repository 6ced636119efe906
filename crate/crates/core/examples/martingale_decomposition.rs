//! Forward and backward martingales of one sampled trajectory, the
//! increment identity, and the Pisier sum check on the same chain.

use markov_type_lab::martingale::{
    decompose, pisier_sum_check, verify_identity, IncrementFamily, IncrementSource, SmoothnessSpec,
};
use markov_type_lab::{ReversibleChain, WeightedGraph};

fn main() -> markov_type_lab::Result<()> {
    let chain = ReversibleChain::random_walk(&WeightedGraph::petersen(), None)?;
    let f: Vec<Vec<f64>> = (0..10).map(|i| vec![(i % 3) as f64, (i / 3) as f64 - 1.0]).collect();
    let traj = chain.sample_trajectory(12, 5, 0)?;
    let tr = decompose(&chain, &f, &traj)?;
    println!("states {:?}", tr.states);
    let check = verify_identity(&tr);
    println!("identity max error {:.2e} (pass {})", check.max_error, check.pass);

    let spec = SmoothnessSpec::lp(4.0)?;
    for family in [IncrementFamily::Forward, IncrementFamily::BackwardOddSteps] {
        let source = IncrementSource::Transcript { chain: &chain, f: &f, t: 8, family };
        let c = pisier_sum_check(source, spec, 4.0, 20_000, 9)?;
        println!("{family:?}: E|sum|^q = {:.5} <= {:.5} ({})", c.lhs, c.rhs, if c.exact { "exact" } else { "sampled" });
    }
    Ok(())
}
