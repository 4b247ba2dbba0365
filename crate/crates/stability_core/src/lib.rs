//! Central charges, King stability of small representations over `F_2` and
//! `F_3`, closed-form stable spectra of the Kronecker, affine A2 and A_n
//! quivers, and the comparison of stable spectra with the finite-length
//! trajectories of a differential.

pub mod charge;
pub mod compare;
pub mod field;
pub mod jacobi;
pub mod rep;
pub mod spectrum;

use thiserror::Error;

pub use charge::{cross, in_half_plane, CentralCharge};
pub use compare::{saddle_vs_stable, ComparisonReport, ExampleFamily};
pub use field::{FpMatrix, Subspace};
pub use jacobi::{jacobi_indecomposables_3punct, satisfies_relations, three_punctured_sphere_quiver, JacobiIndecomposable};
pub use rep::{
    absolutely_stable, find_stable, king_stable, rep_by_index, rep_count, stable_class_count, Direction, FiniteRep, RepQuiver,
    Verdict,
};
pub use spectrum::{a_n_spectrum, affine_a2_spectrum, kronecker_spectrum, AffineA2Spectrum, SpectrumEntry, StableSpectrum};

pub type Charge = CentralCharge<f64>;
pub type Spectrum = StableSpectrum<f64>;
pub type Comparison = ComparisonReport<f64>;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("central charge is invalid: {0}")]
    InvalidCharge(String),
    #[error("central charges of the two vertices are collinear")]
    CollinearCharge,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Numerics(#[from] differential_core::DiffError),
}
