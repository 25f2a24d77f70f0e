//! Popular arborescences in vertex-weighted digraphs.
//!
//! Each vertex ranks its incoming edges (ties allowed) and carries a
//! positive weight. An arborescence `A` rooted at an artificial root `r`
//! is popular when no other arborescence `B` is preferred by vertices of
//! larger total weight than those preferring `A`.
//!
//! [`solver::solve`] finds a popular arborescence when one exists and
//! returns it with a dual certificate that [`certificate`] checks
//! independently. [`oracle`] holds brute-force and min-cost ground truth.
//!
//! ```
//! use popbranch::fixtures::cycle3;
//! use popbranch::solver::{solve, SolveOptions, SolveOutcome};
//!
//! let d = cycle3(&[3, 2, 2]);
//! let outcome = solve(&d, SolveOptions::default()).unwrap();
//! assert!(matches!(outcome, SolveOutcome::PopularFound { .. }));
//! ```

pub mod augment;
pub mod certificate;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod safe;
pub mod solver;

pub use augment::{Arborescence, AugmentedDigraph};
pub use certificate::{DualSet, DualSolution, Report};
pub use error::{ModelError, SolveError};
pub use graph::{Digraph, EdgeId, VertexId, VertexSet};
pub use solver::{solve, SolveOptions, SolveOutcome};
