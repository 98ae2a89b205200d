//! Chain specification and its quadratic Majorana form.
//!
//! With Majorana operators (normalized so that `γ² = 1`)
//!
//! ```text
//! γ_{2n-1} = (Π_{k<n} σᶻ_k) σˣ_n,    γ_{2n} = (Π_{k<n} σᶻ_k) σʸ_n
//! ```
//!
//! one has `σᶻ_n = -i γ_{2n-1} γ_{2n}` and `σˣ_n σˣ_{n+1} = -i γ_{2n} γ_{2n+1}`,
//! so the Ising Hamiltonian becomes `H = (i/4) Σ_{mn} A_{mn} γ_m γ_n` with
//!
//! ```text
//! A_{2n-1, 2n} = 2h,    A_{2n, 2n+1} = 2,    A = -Aᵀ.
//! ```
//!
//! Indices in this crate are 0-based, so site `n` (0-based) owns Majoranas
//! `2n` and `2n + 1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Boundary conditions of the chain. Only open chains are modeled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    #[default]
    Open,
}

/// The physical model: `n_sites` spins in a transverse field `field`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    field: f64,
    boundary: Boundary,
}

impl ChainSpec {
    /// Validate and create an open chain.
    pub fn new(n_sites: usize, field: f64) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::invalid("chain needs at least one site"));
        }
        if !field.is_finite() {
            return Err(Error::invalid(format!("field must be finite, got {field}")));
        }
        if field < 0.0 {
            return Err(Error::invalid(format!("field must be non-negative, got {field}")));
        }
        Ok(Self { n_sites, field, boundary: Boundary::Open })
    }

    pub fn n_sites(&self) -> usize { self.n_sites }

    pub fn field(&self) -> f64 { self.field }

    pub fn boundary(&self) -> Boundary { self.boundary }
}

/// Real antisymmetric `2N × 2N` coupling matrix `A` with
/// `H = (i/4) Σ A_{mn} γ_m γ_n`.
///
/// Couplings only connect an even (0-based) Majorana index to an odd one, so
/// `A` is fully described by the `N × N` block
/// `W[n][m] = A_{2n, 2m+1}`, which is what the ground-state solver works on.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaHamiltonian {
    spec: ChainSpec,
    couplings: DMatrix<f64>,
}

impl MajoranaHamiltonian {
    pub fn spec(&self) -> &ChainSpec { &self.spec }

    /// `2N`.
    pub fn dim(&self) -> usize { self.couplings.nrows() }

    /// The full antisymmetric matrix `A`.
    pub fn couplings(&self) -> &DMatrix<f64> { &self.couplings }

    /// The even-to-odd block `W[n][m] = A_{2n, 2m+1}`.
    pub fn bipartite_block(&self) -> DMatrix<f64> {
        let n = self.spec.n_sites;
        DMatrix::from_fn(n, n, |r, c| self.couplings[(2 * r, 2 * c + 1)])
    }

    /// Number of independent (upper-triangle) nonzero couplings.
    pub fn nonzero_couplings(&self) -> usize {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .filter(|&(i, j)| self.couplings[(i, j)] != 0.0)
            .count()
    }
}

/// Build `A` for the open transverse-field Ising chain.
///
/// The scale is fixed so that the free-fermion ground energy
/// `-½ Σ_k ε_k` (with `ε_k` the singular values of `A`) equals the spin-basis
/// ground energy of `-Σ σˣσˣ - h Σ σᶻ`.
pub fn build_majorana_hamiltonian(spec: ChainSpec) -> MajoranaHamiltonian {
    let n = spec.n_sites;
    let h = spec.field;
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    let mut couple = |i: usize, j: usize, v: f64| {
        a[(i, j)] = v;
        a[(j, i)] = -v;
    };
    for site in 0..n {
        // The field term is skipped at h = 0 so the sparsity pattern stays exact.
        if h != 0.0 {
            couple(2 * site, 2 * site + 1, 2.0 * h);
        }
        if site + 1 < n {
            couple(2 * site + 1, 2 * site + 2, 2.0);
        }
    }
    MajoranaHamiltonian { spec, couplings: a }
}
