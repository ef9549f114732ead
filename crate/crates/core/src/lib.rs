//! Exact lattice Voronoi cells, covering radii and polytope second moments,
//! with a verifier for the lower bound `∫_P ‖x‖² dx ≥ (R²/3)·|P|` and its
//! equality case.
//!
//! All geometry is done in lattice coordinates under a rational Gram form, so
//! every quantity is an exact rational. Volumes and moments use the
//! coordinate measure; the Jacobian `√det G` cancels from every identity
//! checked here.

pub mod catalog;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod montecarlo;
pub mod par;
pub mod polytope;
pub mod random;
pub mod verify;
pub mod voronoi;

pub use error::{Error, Result};
pub use exactnum::{Rat, RatMat, RatVec};
pub use lattice::{GramLattice, LatticePoint};
pub use par::Execution;
pub use polytope::Polytope;

/// Default cap on the dimension for anything that enumerates vertices.
pub const DEFAULT_DIMENSION_CAP: usize = 5;
