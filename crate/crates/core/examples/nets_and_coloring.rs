use markov_type_lab::extension::{covering_radius, greedy_net, net_distance_family, separated_partition, separation};
use markov_type_lab::metric::shortest_path_metric;
use markov_type_lab::WeightedGraph;

fn main() -> markov_type_lab::Result<()> {
    let space = shortest_path_metric(&WeightedGraph::grid(20, 20))?;
    for r in [1.0, 2.0, 3.0] {
        let net = greedy_net(&space, r, None)?;
        let part = separated_partition(&net, &space, 16.0 * r)?;
        let audit = net_distance_family(&space, &part, r)?;
        println!(
            "R={r}: net of {} points (separation {}, covering radius {}), {} classes, min gap {} over {} pairs",
            net.len(),
            separation(&space, &net),
            covering_radius(&space, &net),
            part.len(),
            audit.min_gap,
            audit.pairs_checked
        );
    }
    Ok(())
}
