//! Weighted random intersection graphs and their maximum cuts.
//!
//! An `m × n` 0/1 matrix `R` assigns labels to vertices; two vertices are
//! joined by an edge of weight `|S_u ∩ S_v|`, the number of labels they
//! share. Since `Cut(G, x) = ¼(Σ_{i,j}[RᵀR]_{i,j} − ‖Rx‖²)`, maximizing the
//! cut is minimizing `‖Rx‖²`, which ties max-cut to the discrepancy of the
//! set system whose incidence matrix is `R`.
//!
//! ```
//! use wrig::{Coloring, RepresentationMatrix};
//!
//! // labels {0,1} and {1,2}: a path 0–1–2 with unit weights
//! let r = RepresentationMatrix::from_label_sets(3, vec![vec![0, 1], vec![1, 2]])?;
//! let x = Coloring::new(vec![1, -1, 1])?;
//! assert_eq!(r.cut_weight(&x)?, 2);
//! assert_eq!(r.graph().cut_weight(&x)?, 2);
//! assert_eq!(r.discrepancy(&x)?, 0);
//! # Ok::<(), wrig::Error>(())
//! ```
//!
//! Modules:
//!
//! * [`model`]: the matrix, the derived graph, exact evaluators.
//! * [`io`]: the `WRIG 1` matrix text format and coloring files.
//! * [`sampling`]: seeded `G̅(n, m, p)` instances.
//! * [`cut`]: random cut, majority cut, exhaustive oracles.
//! * [`bipartization`]: weak bipartization and sequence counting.
//!
//! The guide under `book/` walks through each of these; its code listings
//! are compiled and run as doc-tests of this crate.

pub mod bipartization;
pub mod cut;
pub mod error;
pub mod io;
pub mod model;
pub mod sampling;

pub use bipartization::{
    extract_coloring, weak_bipartization, BipartizationOutcome, BipartizationState,
    VertexLabelSequence,
};
pub use cut::{
    beta_lower_bound, brute_force_max_cut, brute_force_min_discrepancy, majority_cut, random_cut,
    Algorithm, CutResult, MajorityConfig, VertexOrder,
};
pub use error::{Error, Result};
pub use model::{
    Coloring, RepresentationMatrix, SetSystem, WeightedEdge, WeightedIntersectionGraph,
};
pub use sampling::{sample_matrix, ModelParams, Seed};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/cuts.md")]
    mod cuts {}
    #[doc = include_str!("../../../book/src/bipartization.md")]
    mod bipartization {}
}
