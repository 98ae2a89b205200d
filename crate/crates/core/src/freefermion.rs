//! Ground-state Majorana correlations and their canonical form.
//!
//! The correlation matrix is stored as the real antisymmetric
//! `M_{mn} = (i/2) ⟨[γ_m, γ_n]⟩`; the imaginary matrix of commutators is
//! `iM` up to the Majorana normalization. Tracing out a site deletes its two
//! rows and columns, and the singular values of what is left come in equal
//! pairs `ν_k`, one pair per remaining fermionic mode.

use std::ops::Range;

use nalgebra::{DMatrix, SVD};

use crate::error::{Error, Result};
use crate::model::MajoranaHamiltonian;

/// `Mᵀ = -M` must hold to this absolute tolerance.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Mode values in `[-CLAMP_TOL, 1 + CLAMP_TOL]` are clamped into `[0, 1]`.
pub const CLAMP_TOL: f64 = 1e-10;
/// Largest allowed mismatch inside a pair of singular values.
pub const PAIRING_TOL: f64 = 1e-8;
/// Mode energies below this are treated as zero modes.
pub const ZERO_MODE_TOL: f64 = 1e-12;

/// Real antisymmetric Majorana correlation matrix of a set of sites.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Wrap a `2N' × 2N'` matrix after checking its shape, antisymmetry and
    /// entry range.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::invalid(format!("correlation matrix must be square with even nonzero size, got {r}x{c}")));
        }
        for i in 0..r {
            for j in 0..=i {
                let (a, b) = (entries[(i, j)], entries[(j, i)]);
                if !a.is_finite() || (a + b).abs() > ANTISYMMETRY_TOL {
                    return Err(Error::invalid(format!("correlation matrix not antisymmetric at ({i},{j})")));
                }
                if a.abs() > 1.0 + CLAMP_TOL {
                    return Err(Error::invalid(format!("correlation entry {a} at ({i},{j}) outside [-1, 1]")));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Number of sites `N'` (half the matrix dimension).
    pub fn n_sites(&self) -> usize { self.entries.nrows() / 2 }

    pub fn dim(&self) -> usize { self.entries.nrows() }

    pub fn entries(&self) -> &DMatrix<f64> { &self.entries }

    /// `⟨σᶻ_n⟩` for 0-based site `n`, equal to `-M_{2n, 2n+1}`.
    pub fn magnetization_z(&self, site: usize) -> f64 {
        -self.entries[(2 * site, 2 * site + 1)]
    }
}

/// A contiguous block of sites, 0-based and half-open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    sites: Range<usize>,
}

impl Region {
    pub fn new(sites: Range<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::invalid(format!("empty region {sites:?}")));
        }
        Ok(Self { sites })
    }

    /// The first `len` sites, traced "from the edge".
    pub fn edge(len: usize) -> Result<Self> { Self::new(0..len) }

    pub fn sites(&self) -> Range<usize> { self.sites.clone() }

    pub fn len(&self) -> usize { self.sites.len() }

    pub fn is_empty(&self) -> bool { self.sites.is_empty() }
}

/// Ground state of a quadratic Majorana Hamiltonian.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub correlation: CorrelationMatrix,
    /// Ground energy `-½ Σ ε_k`, corrected if a zero mode had to be flipped
    /// into the even-parity sector.
    pub energy: f64,
    /// Single-particle energies `ε_k ≥ 0`, descending.
    pub mode_energies: Vec<f64>,
}

/// Lowest-energy Gaussian state of `ham`.
///
/// Writing `A = [[0, W], [-Wᵀ, 0]]` in (even, odd) Majorana ordering, the
/// singular value decomposition `W = U Σ Vᵀ` block-diagonalizes `A` with mode
/// energies `Σ`, and the ground state fills every mode so that
/// `M = -[[0, UVᵀ], [-VUᵀ, 0]]`.
///
/// For `h > 0`, `det W = (2h)^N > 0` so the exact polar factor `UVᵀ` has unit
/// determinant, which is the even-parity sector `Π σᶻ = +1`. When the edge
/// zero mode is below numerical resolution its sign is arbitrary, and it is
/// flipped if needed to restore `det(UVᵀ) = +1`. At `h = 0` this picks the
/// cat state `(|→…→⟩ + |←…←⟩)/√2`.
pub fn ground_state_correlation(ham: &MajoranaHamiltonian) -> Result<GroundState> {
    let n = ham.spec().n_sites();
    let w = ham.bipartite_block();
    let svd = SVD::try_new(w, true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("SVD of the coupling block did not converge"))?;
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let sigma = &svd.singular_values;

    let mut polar = u * v_t;
    let mut energy = -0.5 * sigma.sum();
    let det = polar.determinant();
    if !det.is_finite() || (det.abs() - 1.0).abs() > 1e-6 {
        return Err(Error::numerical(format!("polar factor is not orthogonal (det = {det})")));
    }
    if det < 0.0 {
        let k = sigma.imin();
        if sigma[k] > ZERO_MODE_TOL {
            return Err(Error::numerical(format!(
                "odd-parity ground state with resolved gap {:.3e}", sigma[k]
            )));
        }
        polar -= 2.0 * u.column(k) * v_t.row(k);
        energy += sigma[k];
    }

    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let q = polar[(r, c)];
            m[(2 * r, 2 * c + 1)] = -q;
            m[(2 * c + 1, 2 * r)] = q;
        }
    }
    let mut mode_energies: Vec<f64> = sigma.iter().copied().collect();
    mode_energies.sort_by(|a, b| b.total_cmp(a));
    Ok(GroundState { correlation: CorrelationMatrix::new(m)?, energy, mode_energies })
}

/// Restrict `gamma` to the sites in `region` by deleting every other site's
/// two rows and columns.
pub fn reduce(gamma: &CorrelationMatrix, region: &Region) -> Result<CorrelationMatrix> {
    let sites: Vec<usize> = region.sites().collect();
    reduce_sites(gamma, &sites)
}

/// Like [`reduce`] for an arbitrary set of distinct sites, kept in the order
/// given.
pub fn reduce_sites(gamma: &CorrelationMatrix, sites: &[usize]) -> Result<CorrelationMatrix> {
    if sites.is_empty() {
        return Err(Error::invalid("empty region"));
    }
    let n = gamma.n_sites();
    let mut seen = vec![false; n];
    for &s in sites {
        if s >= n {
            return Err(Error::invalid(format!("site {s} outside chain of {n} sites")));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::invalid(format!("site {s} listed twice")));
        }
    }
    let idx: Vec<usize> = sites.iter().flat_map(|&s| [2 * s, 2 * s + 1]).collect();
    let full = gamma.entries();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| full[(idx[r], idx[c])]);
    Ok(CorrelationMatrix { entries: sub })
}

/// Canonical mode values of a (reduced) correlation matrix, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementSpectrum {
    nus: Vec<f64>,
}

impl EntanglementSpectrum {
    /// Build from raw mode values: values within [`CLAMP_TOL`] of `[0, 1]` are
    /// clamped, then sorted ascending.
    pub fn new(mut nus: Vec<f64>) -> Result<Self> {
        for nu in nus.iter_mut() {
            if !nu.is_finite() || *nu < -CLAMP_TOL || *nu > 1.0 + CLAMP_TOL {
                return Err(Error::invalid(format!("mode value {nu} outside [0, 1]")));
            }
            *nu = nu.clamp(0.0, 1.0);
        }
        nus.sort_by(f64::total_cmp);
        Ok(Self { nus })
    }

    /// Mode values, smallest (most entangled) first.
    pub fn nus(&self) -> &[f64] { &self.nus }

    /// Number of modes `N'` in the region.
    pub fn region_size(&self) -> usize { self.nus.len() }

    /// Smallest mode value, or 1 for an empty spectrum.
    pub fn nu_min(&self) -> f64 { self.nus.first().copied().unwrap_or(1.0) }
}

/// Mode values `ν_k` of `gamma_bar`: its singular values, which for an
/// antisymmetric matrix occur in equal pairs, one representative per pair.
pub fn canonical_form(gamma_bar: &CorrelationMatrix) -> Result<EntanglementSpectrum> {
    let svd = SVD::try_new(gamma_bar.entries().clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("SVD of the reduced correlation matrix did not converge"))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let mut nus = Vec::with_capacity(sv.len() / 2);
    for pair in sv.chunks_exact(2) {
        if (pair[0] - pair[1]).abs() > PAIRING_TOL {
            return Err(Error::numerical(format!(
                "singular values {} and {} do not pair; input is not antisymmetric", pair[0], pair[1]
            )));
        }
        nus.push(0.5 * (pair[0] + pair[1]));
    }
    EntanglementSpectrum::new(nus).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::numerical(msg),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_majorana_hamiltonian, ChainSpec};

    fn ground(n: usize, h: f64) -> GroundState {
        ground_state_correlation(&build_majorana_hamiltonian(ChainSpec::new(n, h).unwrap())).unwrap()
    }

    fn max_abs(m: &DMatrix<f64>) -> f64 { m.iter().fold(0.0, |a, &x| a.max(x.abs())) }

    #[test]
    fn pure_state_squares_to_minus_identity() {
        for &(n, h) in &[(1, 1.0), (2, 0.0), (5, 0.3), (12, 1.0), (40, 0.2), (40, 1.0), (40, 3.0)] {
            let m = ground(n, h).correlation.entries().clone();
            let id = DMatrix::<f64>::identity(2 * n, 2 * n);
            assert!(max_abs(&(&m * &m + id)) < 1e-8, "n={n} h={h}");
        }
    }

    #[test]
    fn two_site_energy() {
        for &h in &[0.0, 0.25, 1.0, 3.0] {
            let e = ground(2, h).energy;
            assert!((e + (4.0 * h * h + 1.0).sqrt()).abs() < 1e-12, "h={h}: {e}");
        }
    }

    #[test]
    fn single_site_is_polarized_up() {
        let gs = ground(1, 1.0);
        assert!((gs.energy + 1.0).abs() < 1e-14);
        assert!((gs.correlation.magnetization_z(0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn strong_field_blocks_near_unity() {
        let gs = ground(4, 10.0);
        for site in 0..4 {
            let mz = gs.correlation.magnetization_z(site);
            assert!((mz.abs() - 1.0).abs() < 1e-2, "site {site}: {mz}");
        }
    }

    #[test]
    fn reduce_whole_chain_is_identity() {
        let gs = ground(6, 0.8);
        let r = reduce(&gs.correlation, &Region::edge(6).unwrap()).unwrap();
        assert_eq!(r, gs.correlation);
    }

    #[test]
    fn reduce_picks_site_block() {
        let gs = ground(2, 1.0);
        let r = reduce(&gs.correlation, &Region::edge(1).unwrap()).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.entries()[(0, 1)], gs.correlation.entries()[(0, 1)]);
        assert_eq!(r.entries()[(1, 0)], gs.correlation.entries()[(1, 0)]);
    }

    #[test]
    fn reduce_rejects_bad_regions() {
        let gs = ground(4, 1.0);
        assert!(matches!(Region::new(2..2), Err(Error::InvalidInput(_))));
        assert!(matches!(reduce(&gs.correlation, &Region::new(3..5).unwrap()), Err(Error::InvalidInput(_))));
        assert!(matches!(reduce_sites(&gs.correlation, &[]), Err(Error::InvalidInput(_))));
        assert!(matches!(reduce_sites(&gs.correlation, &[1, 1]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn untraced_state_has_unit_modes() {
        let gs = ground(10, 1.0);
        let spec = canonical_form(&gs.correlation).unwrap();
        assert_eq!(spec.region_size(), 10);
        assert!(spec.nus().iter().all(|&nu| nu == 1.0 || (1.0 - nu) < 1e-10));
    }

    #[test]
    fn high_field_half_chain_is_near_product() {
        let half = |n: usize| {
            let gs = ground(n, 2.0);
            canonical_form(&reduce(&gs.correlation, &Region::edge(n / 2).unwrap()).unwrap()).unwrap()
        };
        let (large, small) = (half(50), half(12));
        // Gapped phase: the softest mode is set by the correlation length, not the size.
        assert!((large.nu_min() - small.nu_min()).abs() < 1e-6);
        assert!(large.nu_min() > 0.96, "{}", large.nu_min());
        let lambda_1: f64 = large.nus().iter().map(|nu| 0.5 * (1.0 + nu)).product();
        assert!(lambda_1 > 0.95);
    }

    #[test]
    fn canonical_form_rejects_unpaired_input() {
        // Bypasses the constructor check to feed a symmetric matrix.
        let bad = CorrelationMatrix { entries: DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.1]) };
        assert!(matches!(canonical_form(&bad), Err(Error::Numerical(_))));
        assert!(CorrelationMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).is_err());
    }

    #[test]
    fn spectrum_clamps_and_sorts() {
        let s = EntanglementSpectrum::new(vec![1.0 + 1e-12, 0.3, -1e-12]).unwrap();
        assert_eq!(s.nus(), &[0.0, 0.3, 1.0]);
        assert!(EntanglementSpectrum::new(vec![1.1]).is_err());
        assert!(EntanglementSpectrum::new(vec![-0.01]).is_err());
    }

    #[test]
    fn low_field_zero_mode_keeps_even_parity() {
        // det of the even/odd block of -M is +1 in the even sector.
        for &(n, h) in &[(30, 0.0), (30, 0.2), (60, 0.3), (7, 0.0)] {
            let m = ground(n, h).correlation.entries().clone();
            let q = DMatrix::from_fn(n, n, |r, c| -m[(2 * r, 2 * c + 1)]);
            assert!((q.determinant() - 1.0).abs() < 1e-8, "n={n} h={h}");
        }
    }
}
