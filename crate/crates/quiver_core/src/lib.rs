//! Edge lattice, quiver and potential of an ideal triangulation, quiver
//! mutation, and the lattice maps induced by flips and pops.

mod lattice;
mod mat;
mod potential;
mod quiver;

pub use lattice::{c_count, c_matrix, edge_lattice, flip_lattice_map, flip_lattice_map_curly, pop_lattice_map, EdgeLattice, FlipSign, LatticeMap};
pub use mat::IntMatrix;
pub use potential::{potential, Cycle, Potential};
pub use quiver::{mcg_equivalent, mutate, quiver, Quiver};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error(transparent)]
    Surface(#[from] surface_core::SurfaceError),
    #[error("triangulation is degenerate: puncture {0} has valency {1}")]
    DegenerateTriangulation(String, usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("quiver has a loop or 2-cycle at {0}")]
    NotReduced(String),
    #[error("parse error: {0}")]
    Parse(String),
}
