use markov_type_lab::markov_type::{hamming_moment, hamming_moment_montecarlo};
use markov_type_lab::metric::cube_lower_bound;

fn main() -> markov_type_lab::Result<()> {
    let d = 10;
    for t in [1, 2, 5, 10, 20] {
        let exact = hamming_moment(d, t)?;
        let mc = hamming_moment_montecarlo(d, t, 20_000, t)?;
        println!("t={t:>2}  exact {exact:.5}  sampled {:.5} +- {:.5}", mc.mean, mc.stderr);
    }
    for (dim, p) in [(8, 2.5), (16, 4.0), (64, 3.0)] {
        println!("distortion of {{0,1}}^{dim} into L_{p} is at least {:.4}", cube_lower_bound(dim, p)?);
    }
    Ok(())
}
