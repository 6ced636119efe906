use markov_type_lab::experiments::random::random_chain;
use markov_type_lab::markov_type::spectral_certificate;
use markov_type_lab::rng;
use rand::Rng;

fn main() -> markov_type_lab::Result<()> {
    let mut r = rng::stream(11, 0);
    let chain = random_chain(&mut r, 8, 0.6);
    let x: Vec<f64> = (0..chain.len()).map(|_| r.random_range(-1.0..1.0)).collect();
    println!("second eigenvalue {:.6}", chain.second_eigenvalue()?);
    for t in [1, 2, 5, 10, 20, 50] {
        let c = spectral_certificate(&chain, &x, t)?;
        println!("t={t:>3}  lhs={:.6}  Lambda(t)*rhs={:.6}  pass={}", c.lhs, c.rhs, c.pass);
    }
    Ok(())
}
