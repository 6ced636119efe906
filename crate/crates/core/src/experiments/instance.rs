//! JSON description of spaces, chains and maps.
//!
//! ```json
//! {
//!   "space": {"kind": "graph", "graph": {"kind": "cycle", "n": 6}},
//!   "chain": {"kind": "walk", "graph": {"kind": "cycle", "n": 6}},
//!   "map": {"kind": "identity"}
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::chain::{biased_tree_chain, ReversibleChain};
use crate::error::{Error, Result};
use crate::extension::{RTree, RTreePoint};
use crate::markov_type::{real_map, vector_map, PointMap};
use crate::metric::{
    hamming_cube, product_metric, shortest_path_metric, snowflake, Laakso, LpPointSet, MetricSpace, WeightedGraph,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Edges { vertices: usize, edges: Vec<(usize, usize, f64)> },
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    Petersen,
    Laakso { level: u32 },
}

impl GraphSpec {
    pub fn build(&self) -> Result<WeightedGraph> {
        match self {
            GraphSpec::Edges { vertices, edges } => WeightedGraph::new(*vertices, edges.clone()),
            GraphSpec::Path { n } => Ok(WeightedGraph::path(*n)),
            GraphSpec::Cycle { n } => WeightedGraph::cycle(*n),
            GraphSpec::Grid { rows, cols } => Ok(WeightedGraph::grid(*rows, *cols)),
            GraphSpec::Petersen => Ok(WeightedGraph::petersen()),
            GraphSpec::Laakso { level } => Ok(Laakso::new(*level)?.graph().clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Graph { graph: GraphSpec },
    Laakso { level: u32 },
    Cube { dim: u32 },
    Lp { p: f64, points: Vec<Vec<f64>> },
    Line { points: Vec<f64> },
    Matrix { rows: Vec<Vec<f64>> },
    Product { left: Box<SpaceSpec>, right: Box<SpaceSpec> },
    Snowflake { inner: Box<SpaceSpec>, eps: f64 },
    BiasedTree { h: u32 },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<MetricSpace> {
        match self {
            SpaceSpec::Graph { graph } => shortest_path_metric(&graph.build()?),
            SpaceSpec::Laakso { level } => Ok(Laakso::new(*level)?.metric().clone()),
            SpaceSpec::Cube { dim } => hamming_cube(*dim),
            SpaceSpec::Lp { p, points } => Ok(MetricSpace::from_lp(LpPointSet::new(*p, points.clone())?)),
            SpaceSpec::Line { points } => MetricSpace::line(points),
            SpaceSpec::Matrix { rows } => MetricSpace::from_matrix(rows.clone()),
            SpaceSpec::Product { left, right } => product_metric(&left.build()?, &right.build()?),
            SpaceSpec::Snowflake { inner, eps } => snowflake(&inner.build()?, *eps),
            SpaceSpec::BiasedTree { h } => Ok(biased_tree_chain(*h)?.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainSpec {
    /// Random walk with optional edge conductances (in edge order).
    Walk { graph: GraphSpec, #[serde(default)] conductances: Option<Vec<f64>> },
    BiasedTree { h: u32 },
    Matrix { transition: Vec<Vec<f64>>, stationary: Vec<f64> },
    Conductances { weights: Vec<Vec<f64>> },
    Flip,
    Iid { pi: Vec<f64> },
}

impl ChainSpec {
    pub fn build(&self) -> Result<ReversibleChain> {
        match self {
            ChainSpec::Walk { graph, conductances } => ReversibleChain::random_walk(&graph.build()?, conductances.as_deref()),
            ChainSpec::BiasedTree { h } => Ok(biased_tree_chain(*h)?.0),
            ChainSpec::Matrix { transition, stationary } => ReversibleChain::new(transition.clone(), stationary.clone()),
            ChainSpec::Conductances { weights } => ReversibleChain::from_conductances(weights),
            ChainSpec::Flip => Ok(ReversibleChain::flip()),
            ChainSpec::Iid { pi } => ReversibleChain::iid(pi.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    /// State `i` goes to point `i`.
    Identity,
    Images { images: Vec<usize> },
    /// Values on the line; defines the target space.
    Real { values: Vec<f64> },
    /// Points of `l_p^n`; defines the target space.
    Vectors { p: f64, values: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    /// Target tree, subset and data for tree extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<RTreePoint>>,
}

/// A chain, a target space and a map between them.
#[derive(Debug, Clone)]
pub struct ChainProblem {
    pub chain: ReversibleChain,
    pub space: MetricSpace,
    pub map: PointMap,
    /// Coordinates of the map when it was given by vectors.
    pub vectors: Option<(f64, Vec<Vec<f64>>)>,
}

fn missing(what: &str) -> Error {
    Error::Config(format!("instance needs a `{what}` entry"))
}

impl Instance {
    pub fn space(&self) -> Result<MetricSpace> {
        self.space.as_ref().ok_or_else(|| missing("space"))?.build()
    }

    pub fn chain(&self) -> Result<ReversibleChain> {
        self.chain.as_ref().ok_or_else(|| missing("chain"))?.build()
    }

    pub fn tree(&self) -> Result<RTree> {
        let t = self.tree.as_ref().ok_or_else(|| missing("tree"))?;
        RTree::new(t.vertices, t.edges.clone())
    }

    /// Chain, space and map; the map defaults to the identity.
    pub fn problem(&self) -> Result<ChainProblem> {
        let chain = self.chain()?;
        let map = self.map.clone().unwrap_or(MapSpec::Identity);
        let (space, map, vectors) = match map {
            MapSpec::Real { values } => {
                if self.space.is_some() {
                    return Err(Error::Config("a `real` map defines its own space; drop `space`".into()));
                }
                let (s, m) = real_map(&values)?;
                (s, m, Some((2.0, values.iter().map(|&v| vec![v]).collect())))
            }
            MapSpec::Vectors { p, values } => {
                if self.space.is_some() {
                    return Err(Error::Config("a `vectors` map defines its own space; drop `space`".into()));
                }
                let (s, m) = vector_map(p, &values)?;
                (s, m, Some((p, values)))
            }
            MapSpec::Identity => {
                let s = self.space()?;
                let m = PointMap::new((0..chain.len()).collect(), s.len())?;
                (s, m, None)
            }
            MapSpec::Images { images } => {
                let s = self.space()?;
                let m = PointMap::new(images, s.len())?;
                (s, m, None)
            }
        };
        if map.len() != chain.len() {
            return Err(Error::Config(format!("map covers {} states, chain has {}", map.len(), chain.len())));
        }
        Ok(ChainProblem { chain, space, map, vectors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let inst: Instance = serde_json::from_str(
            r#"{"space": {"kind": "graph", "graph": {"kind": "cycle", "n": 6}},
                "chain": {"kind": "walk", "graph": {"kind": "cycle", "n": 6}}}"#,
        )
        .unwrap();
        let p = inst.problem().unwrap();
        assert_eq!((p.chain.len(), p.space.len()), (6, 6));
        let inst: Instance =
            serde_json::from_str(r#"{"chain": {"kind": "flip"}, "map": {"kind": "real", "values": [0, 1]}}"#).unwrap();
        assert_eq!(inst.problem().unwrap().space.dist(0, 1), 1.0);
        assert!(serde_json::from_str::<Instance>(r#"{"chains": {}}"#).is_err());
        let inst: Instance = serde_json::from_str(r#"{"chain": {"kind": "flip"}}"#).unwrap();
        assert!(matches!(inst.problem(), Err(Error::Config(_))));
    }
}
