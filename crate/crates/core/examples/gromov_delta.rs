use markov_type_lab::hyperbolic::{hyperbolic_type_check, min_delta};
use markov_type_lab::markov_type::PointMap;
use markov_type_lab::metric::{shortest_path_metric, Laakso};
use markov_type_lab::{ReversibleChain, WeightedGraph};

fn main() -> markov_type_lab::Result<()> {
    for (name, g) in [
        ("path(8)", WeightedGraph::path(8)),
        ("cycle(4)", WeightedGraph::cycle(4)?),
        ("cycle(9)", WeightedGraph::cycle(9)?),
        ("grid 4x4", WeightedGraph::grid(4, 4)),
        ("petersen", WeightedGraph::petersen()),
    ] {
        let rep = min_delta(&shortest_path_metric(&g)?)?;
        println!("{name:<10} delta = {:<6} witness {:?}", rep.delta, rep.witness);
    }
    let laakso = Laakso::new(2)?;
    println!("G_2       delta = {}", min_delta(laakso.metric())?.delta);

    // A walk on a cycle mapped onto a path: hyperbolic target, delta = 0.
    let chain = ReversibleChain::random_walk(&WeightedGraph::cycle(10)?, None)?;
    let path = shortest_path_metric(&WeightedGraph::path(6))?;
    let f = PointMap::new((0..10).map(|i: usize| i.min(10 - i)).collect(), 6)?;
    for t in [1, 4, 16, 64] {
        let h = hyperbolic_type_check(&chain, &path, &f, t, 30.0, None)?;
        println!("t={t:>2}  E d^2 = {:.4}  bound = {:.1}  pass = {}", h.lhs, h.rhs, h.pass);
    }
    Ok(())
}
