//! Exact and approximate solvers for the (k,r)-Center problem on graphs of
//! bounded treewidth, clique-width, vertex cover and tree-depth, together
//! with brute-force oracles and lower-bound instance generators.
//!
//! ```
//! use krc_core::tw::{approx_tw, solve_tw_exact};
//! use krc_core::witness::{heuristic_decomposition, make_nice};
//! use krc_core::{verify_center, Graph};
//! use num_rational::BigRational;
//!
//! # fn main() -> krc_core::Result<()> {
//! let mut g = Graph::new_undirected(4);
//! g.add_edge(0, 1, 2)?;
//! g.add_edge(1, 2, 2)?;
//! g.add_edge(2, 3, 2)?;
//! let td = heuristic_decomposition(&g);
//! let exact = solve_tw_exact(&g, &make_nice(&td), 1, 4)?.expect("a center exists");
//! assert!(verify_center(&g, &exact, 4)?.covered);
//! let eps = BigRational::new(1.into(), 2.into());
//! let report = approx_tw(&g, &td, 1, 4, &eps)?;
//! assert!(report.outcome.center().unwrap().radius <= 6);
//! # Ok(())
//! # }
//! ```

#![warn(missing_docs)]

pub mod cw;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod param;
pub mod tw;
pub mod witness;

pub use error::{KrcError, Result};
pub use graph::{
    all_pairs, component_diameters, coverage_radius, diameter, is_valid_labeling, labeling_from_center,
    multi_source_distances, shortest_paths, split_components, verify_center, weak_components, Arc, CenterSet,
    CoverageReport, DistanceLabeling, Graph, INF,
};
