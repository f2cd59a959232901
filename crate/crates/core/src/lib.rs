//! Hamiltonian lattice gauge theory on small abelian systems: Gauss-law
//! constrained bases, sparse Kogut-Susskind Hamiltonians, exact and Krylov
//! time evolution, and a Ramsey-style meson interferometer that reads the
//! string tension out of interference fringes.
//!
//! The crate is organized bottom-up:
//!
//! - [`lattice`]: chains and rectangular grids with indexed links/plaquettes.
//! - [`group`]: abelian gauge groups (Z2, ZN clock, truncated U(1)).
//! - [`sector`]: charge sectors: enumeration of all link-field
//!   configurations satisfying Gauss's law, and bare flux-string states.
//! - [`hamiltonian`]: sparse Hermitian assembly (electric diagonal,
//!   magnetic plaquette off-diagonal).
//! - [`engine`]: ground states (dense or Lanczos) and unitary evolution
//!   (dense eigendecomposition or adaptive Krylov propagation).
//! - [`protocol`]: the two-branch interferometric sequence
//!   rotate → evolve → rotate → measure, plus return amplitudes.
//! - [`analysis`]: fringe frequency fitting, static potentials, and the
//!   area-law probe over (R, L) grids.
//!
//! With the default `parallel` feature, fringe sweeps, potential scans, and
//! large mat-vecs run on rayon; without it every path falls back to the
//! identical sequential kernels.

pub mod analysis;
mod cvec;
mod error;
pub mod engine;
pub mod group;
pub mod hamiltonian;
pub mod lattice;
pub(crate) mod par;
pub mod protocol;
pub mod rng;
pub mod sector;

pub use cvec::C64;
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
