//! Extend a 1-Lipschitz map from three points of a grid into a star tree.

use markov_type_lab::extension::{audit_extension, lipschitz_extend_to_tree, RTree, RTreePoint};
use markov_type_lab::metric::shortest_path_metric;
use markov_type_lab::WeightedGraph;

fn main() -> markov_type_lab::Result<()> {
    let space = shortest_path_metric(&WeightedGraph::grid(4, 4))?;
    // A star with three legs of length 3.
    let tree = RTree::new(4, vec![(0, 1, 3.0), (0, 2, 3.0), (0, 3, 3.0)])?;
    let subset = vec![0, 3, 15];
    let phi = vec![
        RTreePoint { vertex: 1, up: 1.5 },
        RTreePoint { vertex: 2, up: 1.5 },
        RTreePoint { vertex: 3, up: 2.0 },
    ];
    let ext = lipschitz_extend_to_tree(&space, &subset, &phi, 1.0, &tree)?;
    let audit = audit_extension(&space, &subset, &phi, &tree, &ext);
    println!("tree grew from {} to {} vertices", tree.vertex_count(), ext.tree.vertex_count());
    for x in 0..space.len() {
        let v = ext.values[x];
        println!("grid point {x:>2} -> tree vertex {v:>2} at distance {:.2} from the center", ext.tree.vertex_dist(v, 0));
    }
    println!("agreement error {:.1e}, measured Lipschitz {:.4}", audit.agreement_error, audit.measured_lipschitz);
    Ok(())
}
