//! Entanglement structure of the open transverse-field Ising chain
//!
//! ```text
//! H = -Σ_n σˣ_n σˣ_{n+1} - h Σ_n σᶻ_n
//! ```
//!
//! The chain maps onto free Majorana fermions. Its ground state is then fully
//! described by a real antisymmetric correlation matrix, and any contiguous
//! block of sites is described by the corresponding sub-matrix. The canonical
//! mode values `ν_k` of that sub-matrix give every eigenvalue of the reduced
//! density matrix as a product of factors `(1 ± ν_k)/2`.
//!
//! Pipeline:
//!
//! 1. [`model`]: chain parameters to the Majorana coupling matrix.
//! 2. [`freefermion`]: ground-state correlations, region restriction, mode values.
//! 3. [`spectrum`]: Schmidt weights, entropy, overlaps, truncation errors.
//! 4. [`experiments`]: sweeps, scaling runs and least-squares fits.
//!
//! [`oracle`] is an independent exact diagonalization in the spin basis
//! (N ≤ 12) used to cross-check the free-fermion route. [`cli`] wraps the
//! experiments behind the `fermispec` binary.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod freefermion;
pub mod model;
pub mod oracle;
pub mod spectrum;

pub use error::{Error, Result};
pub use freefermion::{canonical_form, ground_state_correlation, reduce, CorrelationMatrix, EntanglementSpectrum, GroundState, Region};
pub use model::{build_majorana_hamiltonian, ChainSpec, MajoranaHamiltonian};
pub use spectrum::{SchmidtTerm, SpectrumSummary};
