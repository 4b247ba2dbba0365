//! Marked bordered surfaces and their ideal, signed and tagged triangulations.
//!
//! Triangulations are oriented combinatorial maps: every triangle lists its
//! three sides counterclockwise together with the marked point at the start
//! of each side. Side `i` of a triangle runs from corner `i` to corner `i+1`.

mod builders;
mod canonical;
mod error;
mod io;
mod signed;
mod surface;
mod triangulation;

pub use builders::{annulus, once_punctured_disc, polygon, star_subdivide, three_punctured_sphere, torus_one_puncture};
pub use canonical::{bfs_tagged, bfs_triangulations, flip_corpus, CanonicalCode};
pub use error::SurfaceError;
pub use io::{TriangulationFile, SurfaceFile};
pub use signed::{tagged_arcs, tagged_equal, tagged_flip, pop, EndTag, SignedTriangulation, TaggedArc, TaggedArcSet};
pub use surface::{arc_count, classify_surface, MarkedSurface, SurfaceClass};
pub use triangulation::{IdealTriangulation, SelfFolded, Side};
