//! The Pitman transform, the conditioned walk and the deep binary tree
//! experiment.

use markov_type_lab::tree_walk::{conditioned_walk_moments, lower_bound, pitman_moments, tree_walk_simulate};

fn main() -> markov_type_lab::Result<()> {
    let pitman = pitman_moments(40)?;
    let conditioned = conditioned_walk_moments(40, 1)?;
    println!("{:>3} {:>12} {:>12}", "n", "E(2M-S)^2", "E S_hat^2");
    for n in [1, 2, 3, 5, 10, 20, 40] {
        println!("{n:>3} {:>12.4} {:>12.4}", pitman[n], conditioned[n]);
    }

    let (h, n) = (2000, 60);
    let rep = tree_walk_simulate(h, n, 50_000, 1)?;
    println!(
        "h={h} n={n}: E d^2 = {:.3} +- {:.3}, lower bound {:.3}, E d^2 / n = {:.3}",
        rep.estimate.mean,
        rep.estimate.stderr,
        lower_bound(h, n),
        rep.ratio
    );
    Ok(())
}
