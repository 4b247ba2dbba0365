//! Numerical analysis of meromorphic quadratic differentials on the Riemann
//! sphere: critical points, residues, horizontal trajectories, strip
//! decompositions, WKB triangulations, periods and walls.

pub mod chart;
pub mod decomposition;
pub mod differential;
pub mod error;
pub mod inventory;
pub mod monodromy;
pub mod poly;
pub mod real;
pub mod scan;
pub mod trace;
pub mod wkb;

pub use differential::{canonical_sign, CriticalPointReport, FiniteCrit, FiniteCritKind, Pole, PoleId, QuadraticDifferential};
pub use error::{DiffError, Inconclusive};
pub use real::Real;
pub use trace::{trace_ray, trace_through, zero_ray_directions, Crossing, End, Start, Terminal, TraceConfig, Trajectory};

pub type Differential = QuadraticDifferential<f64>;
pub type Config = TraceConfig<f64>;
pub use decomposition::{is_saddle_free, strip_decomposition, trace_rays, HalfPlane, PoleRotation, RaySet, SaddleFreeReport, Strip, StripDecomposition, Vertex};
pub use wkb::{puncture_sign, standard_periods, vertex_label, wkb_triangulation, wkb_with_labels, WkbTriangulation};
pub use scan::{saddle_phase_scan, wall_cross_check, Accumulation, PhaseScan, ScanSettings, WallCrossing, WallEvent, WallKind};
pub use inventory::{finite_trajectories, RingDomain, Saddle, TrajectoryInventory};
pub use monodromy::{residue_monodromy_demo, LoopKind, LoopReport, MonodromyTranscript};
