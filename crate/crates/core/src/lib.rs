//! Numerical toolkit for Markov type of finite metric spaces.
//!
//! The crate evaluates the moment functionals
//! `E d(f(Z_t), f(Z_0))^p` of stationary reversible chains mapped into finite
//! metric spaces exactly, and checks the inequalities these quantities obey:
//! spectral bounds on the line, martingale decompositions in smooth normed
//! spaces, Gromov-hyperbolic chaining, lower-bound experiments on binary
//! trees, Lipschitz extension into trees and the net/gluing constructions
//! used for doubling spaces.
//!
//! | module | contents |
//! |---|---|
//! | [`metric`] | metric spaces, graphs, Laakso graphs, cubes, distortion |
//! | [`chain`] | reversible chains, powers, spectra, sampling |
//! | [`markov_type`] | moment functionals, type ratios, certificates |
//! | [`martingale`] | generator, forward/backward martingales, two-point inequalities |
//! | [`hyperbolic`] | Gromov products, four-point delta, chaining |
//! | [`tree_walk`] | Pitman transform, conditioned walk, lazy deep-tree simulator |
//! | [`extension`] | nets, colorings, tree balls, Lipschitz extension, gluing |
//! | [`experiments`] | instance schema, reports, the experiment catalog |

pub mod chain;
pub mod config;
pub mod error;
pub mod experiments;
pub mod extension;
pub mod hyperbolic;
pub mod markov_type;
pub mod martingale;
pub mod metric;
pub mod rng;
pub mod tree_walk;

pub use chain::{biased_tree_chain, ReversibleChain, Trajectory};
pub use error::{Error, Result};
pub use metric::{LpPointSet, MetricSpace, WeightedGraph};
