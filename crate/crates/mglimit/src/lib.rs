//! Dense multigraph models, multigraphons, and their limit objects.
//!
//! The crate has three layers:
//!
//! * combinatorial core -- [`multigraph`] (adjacency, edge lists, homomorphism
//!   densities, the multisubgraph distance) and [`multigraphon`] (kernel
//!   evaluators, Monte Carlo densities, step embeddings of finite graphs);
//! * random models -- [`generators`] (configuration model and preferential
//!   growth, with exact probability mass functions) and [`dynamics`] (the
//!   edge-reconnection chain and its scaled total-degree observable);
//! * analysis -- [`limit`] (Poisson/Gamma kernels, folded Gaussian paths,
//!   limit-side expectations), [`oracle`] (brute-force enumeration and exact
//!   dynamic programming used to validate everything else) and [`stats`]
//!   (test statistics for the experiment harness).
//!
//! All closed-form probabilities are computed in exact rational arithmetic;
//! floats only appear in Monte Carlo estimates and analytic special
//! functions.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod exact;
pub mod generators;
pub mod limit;
pub mod multigraph;
pub mod multigraphon;
pub mod oracle;
pub mod special;

pub use multigraph::{Multigraph, Pattern};
pub use multigraphon::{Estimate, Multigraphon};
pub mod stats;



