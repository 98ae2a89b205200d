//! Brute-force ground truth in the spin basis, for chains of up to 12 sites.
//!
//! Basis states are bit strings in the `σᶻ` product basis: bit value 1 means
//! spin down, and site 0 is the most significant bit so that a cut after
//! `cut` sites splits an index into `(x >> (N - cut), x & mask)`.
//!
//! `σˣσˣ` flips two adjacent bits and so preserves `P = Π σᶻ`. The Hamiltonian
//! is diagonalized inside one parity sector; the even sector holds the ground
//! state for `h > 0` and the cat state at `h = 0`, which is the same state
//! the free-fermion solver selects.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::model::ChainSpec;

/// Largest chain the oracle accepts.
pub const MAX_SITES: usize = 12;
/// Sector dimension above which the Lanczos solver replaces dense
/// diagonalization.
const DENSE_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Exact lowest eigenpair within a parity sector.
#[derive(Clone, Debug)]
pub struct DenseGroundState {
    pub n_sites: usize,
    pub energy: f64,
    /// Unit-norm amplitudes over all `2^N` basis states.
    pub amplitudes: DVector<f64>,
}

/// Exact Schmidt decomposition across one cut.
#[derive(Clone, Debug)]
pub struct OracleSchmidt {
    /// Number of sites on the left of the cut.
    pub cut: usize,
    /// Squared singular values, descending.
    pub values: Vec<f64>,
    pub entropy_bits: f64,
}

struct SectorHamiltonian {
    n: usize,
    field: f64,
    states: Vec<usize>,
    position: Vec<usize>,
}

impl SectorHamiltonian {
    fn new(spec: &ChainSpec, parity: Parity) -> Self {
        let n = spec.n_sites();
        let want = match parity { Parity::Even => 0, Parity::Odd => 1 };
        let states: Vec<usize> = (0..1usize << n).filter(|x| x.count_ones() % 2 == want).collect();
        let mut position = vec![usize::MAX; 1 << n];
        for (i, &x) in states.iter().enumerate() {
            position[x] = i;
        }
        Self { n, field: spec.field(), states, position }
    }

    fn dim(&self) -> usize { self.states.len() }

    fn diagonal(&self, x: usize) -> f64 {
        let down = x.count_ones() as f64;
        -self.field * (self.n as f64 - 2.0 * down)
    }

    fn bond_masks(&self) -> impl Iterator<Item = usize> {
        (0..self.n.saturating_sub(1)).map(|b| 0b11 << b)
    }

    fn dense(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        for (i, &x) in self.states.iter().enumerate() {
            h[(i, i)] = self.diagonal(x);
            for mask in self.bond_masks() {
                h[(self.position[x ^ mask], i)] -= 1.0;
            }
        }
        h
    }

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for (i, &x) in self.states.iter().enumerate() {
            let mut acc = self.diagonal(x) * v[i];
            for mask in self.bond_masks() {
                acc -= v[self.position[x ^ mask]];
            }
            out[i] = acc;
        }
        out
    }
}

/// Ground state of the chain, resolved into the even parity sector.
pub fn dense_ground_state(spec: &ChainSpec) -> Result<DenseGroundState> {
    sector_ground_state(spec, Parity::Even)
}

/// Lowest state of `spec` inside the given parity sector.
///
/// Dense symmetric diagonalization for sectors up to 512 states (N ≤ 10),
/// restarted Lanczos with full reorthogonalization above that.
pub fn sector_ground_state(spec: &ChainSpec, parity: Parity) -> Result<DenseGroundState> {
    let n = spec.n_sites();
    if n > MAX_SITES {
        return Err(Error::invalid(format!("oracle is limited to {MAX_SITES} sites, got {n}")));
    }
    let ham = SectorHamiltonian::new(spec, parity);
    if ham.dim() == 0 {
        return Err(Error::invalid("empty parity sector"));
    }
    let (energy, mut vec) = if ham.dim() <= DENSE_LIMIT {
        let eig = SymmetricEigen::try_new(ham.dense(), f64::EPSILON, 0)
            .ok_or_else(|| Error::numerical("dense eigensolver did not converge"))?;
        let i = eig.eigenvalues.imin();
        (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned())
    } else {
        lanczos_lowest(&ham)?
    };
    if vec.sum() < 0.0 {
        vec.neg_mut();
    }
    vec.normalize_mut();

    let residual = (ham.apply(&vec) - energy * &vec).norm();
    if residual > 1e-9 * energy.abs().max(1.0) {
        return Err(Error::numerical(format!("ground state residual {residual:.3e} too large")));
    }
    let mut amplitudes = DVector::zeros(1 << n);
    for (i, &x) in ham.states.iter().enumerate() {
        amplitudes[x] = vec[i];
    }
    Ok(DenseGroundState { n_sites: n, energy, amplitudes })
}

fn lanczos_lowest(ham: &SectorHamiltonian) -> Result<(f64, DVector<f64>)> {
    const KRYLOV: usize = 80;
    const RESTARTS: usize = 60;
    let dim = ham.dim();
    let mut start = DVector::from_element(dim, 1.0 / (dim as f64).sqrt());
    for _ in 0..RESTARTS {
        let mut basis: Vec<DVector<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..KRYLOV.min(dim) {
            let mut w = ham.apply(&basis[j]);
            alpha.push(w.dot(&basis[j]));
            // Two passes of full Gram-Schmidt.
            for _ in 0..2 {
                for b in &basis {
                    let c = w.dot(b);
                    w.axpy(-c, b, 1.0);
                }
            }
            let norm = w.norm();
            if norm < 1e-14 || j + 1 == KRYLOV.min(dim) {
                break;
            }
            beta.push(norm);
            basis.push(w / norm);
        }
        let m = alpha.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let i = eig.eigenvalues.imin();
        let theta = eig.eigenvalues[i];
        let mut ritz = DVector::zeros(dim);
        for (k, b) in basis.iter().take(m).enumerate() {
            ritz.axpy(eig.eigenvectors[(k, i)], b, 1.0);
        }
        ritz.normalize_mut();
        let residual = (ham.apply(&ritz) - theta * &ritz).norm();
        if residual < 1e-12 * theta.abs().max(1.0) {
            return Ok((theta, ritz));
        }
        start = ritz;
    }
    Err(Error::numerical("Lanczos did not converge"))
}

/// Schmidt decomposition of `state` between the first `cut` sites and the
/// rest.
pub fn oracle_schmidt(state: &DenseGroundState, cut: usize) -> Result<OracleSchmidt> {
    let n = state.n_sites;
    if cut == 0 || cut >= n {
        return Err(Error::invalid(format!("cut must lie in 1..{n}, got {cut}")));
    }
    let right = n - cut;
    let mask = (1usize << right) - 1;
    let psi = DMatrix::from_fn(1 << cut, 1 << right, |a, b| state.amplitudes[(a << right) | (b & mask)]);
    let svd = SVD::try_new(psi, false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("SVD of the reshaped state did not converge"))?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let entropy_bits = values.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum();
    Ok(OracleSchmidt { cut, values, entropy_bits })
}

/// `⟨σᶻ⟩` on 0-based `site`.
pub fn magnetization_z(state: &DenseGroundState, site: usize) -> f64 {
    let bit = state.n_sites - 1 - site;
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(x, a)| if x >> bit & 1 == 1 { -a * a } else { a * a })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(n: usize, h: f64) -> DenseGroundState {
        dense_ground_state(&ChainSpec::new(n, h).unwrap()).unwrap()
    }

    #[test]
    fn single_spin_points_up() {
        let s = gs(1, 1.0);
        assert!((s.energy + 1.0).abs() < 1e-14);
        assert!((s.amplitudes[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_sites_analytic_energy() {
        for &h in &[0.0, 0.4, 1.0, 2.5] {
            let e = gs(2, h).energy;
            assert!((e + (4.0 * h * h + 1.0).sqrt()).abs() < 1e-12, "h={h}");
        }
    }

    #[test]
    fn cat_state_at_zero_field() {
        let s = oracle_schmidt(&gs(2, 0.0), 1).unwrap();
        assert!((s.values[0] - 0.5).abs() < 1e-12 && (s.values[1] - 0.5).abs() < 1e-12);
        assert!((s.entropy_bits - 1.0).abs() < 1e-12);
        let s = oracle_schmidt(&gs(4, 0.0), 2).unwrap();
        assert!((s.values[0] - 0.5).abs() < 1e-12 && (s.values[1] - 0.5).abs() < 1e-12);
        assert!(s.values[2..].iter().all(|&l| l.abs() < 1e-12));
    }

    #[test]
    fn strong_field_is_product() {
        let s = oracle_schmidt(&gs(8, 10.0), 4).unwrap();
        assert!(s.values[0] > 0.999);
    }

    #[test]
    fn rejects_large_chains_and_bad_cuts() {
        assert!(matches!(dense_ground_state(&ChainSpec::new(13, 1.0).unwrap()), Err(Error::InvalidInput(_))));
        let s = gs(4, 1.0);
        assert!(oracle_schmidt(&s, 0).is_err());
        assert!(oracle_schmidt(&s, 4).is_err());
    }

    #[test]
    fn state_is_normalized_eigenvector() {
        for &(n, h) in &[(6, 0.5), (11, 1.0), (12, 0.2)] {
            let s = gs(n, h);
            assert!((s.amplitudes.norm() - 1.0).abs() < 1e-12);
            let schmidt = oracle_schmidt(&s, n / 2).unwrap();
            assert!((schmidt.values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(schmidt.values.iter().all(|&l| l >= 0.0));
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let spec = ChainSpec::new(10, 0.9).unwrap();
        let ham = SectorHamiltonian::new(&spec, Parity::Even);
        let (e_lanczos, _) = lanczos_lowest(&ham).unwrap();
        assert!((e_lanczos - gs(10, 0.9).energy).abs() < 1e-11);
    }

    #[test]
    fn even_sector_is_lowest() {
        for n in 1..=8 {
            for &h in &[0.1, 0.5, 1.0, 2.0] {
                let spec = ChainSpec::new(n, h).unwrap();
                let even = sector_ground_state(&spec, Parity::Even).unwrap().energy;
                let odd = sector_ground_state(&spec, Parity::Odd).unwrap().energy;
                assert!(even < odd, "n={n} h={h}: {even} vs {odd}");
            }
        }
    }

    #[test]
    fn schmidt_symmetric_under_reflection() {
        // The open chain is reflection symmetric, so cut k and N-k agree.
        let s = gs(9, 0.8);
        for cut in 1..9 {
            let a = oracle_schmidt(&s, cut).unwrap().values;
            let b = oracle_schmidt(&s, 9 - cut).unwrap().values;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
