//! Exact diagonalization of bosons and fermions on a rotating
//! one-dimensional ring lattice.
//!
//! The crate covers closed-form single-particle results ([`analytic`]),
//! many-body Fock bases ([`basis`]), the rotating-frame Hubbard Hamiltonians
//! ([`hamiltonian`]), dense and Krylov eigensolvers ([`eigen`]), ring-current
//! observables ([`observables`]) and parameter sweeps with level-crossing and
//! fast-mode boundary detection ([`sweep`]). [`verify`] bundles the built-in
//! consistency checks.

pub mod analytic;
pub mod basis;
pub mod eigen;
mod error;
pub mod hamiltonian;
pub mod model;
pub mod observables;
pub mod sweep;
pub mod verify;

pub use basis::{FockBasis, Sector};
pub use eigen::{EigenConfig, EigenResult, GroundState};
pub use error::{Error, Result};
pub use hamiltonian::HermitianOperator;
pub use model::{ContinuumSpec, RingSpec, SpeciesSpec};
pub use observables::CurrentReport;
pub use sweep::{Control, SweepResult, SweepRow, SweepSpec};
