//! Reduced-density-matrix eigenvalues built from canonical mode values.
//!
//! Each mode contributes a factor `(1 + ν_k)/2` when empty and `(1 - ν_k)/2`
//! when occupied, so the eigenvalue of occupation pattern `η` is
//!
//! ```text
//! λ_η = Π_k (1 + (-1)^{n_k} ν_k) / 2
//! ```
//!
//! and the entropy is the sum of per-mode binary entropies. All logarithms
//! are base 2 except the internal log-weights of the enumeration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::freefermion::EntanglementSpectrum;

/// Modes with `ν` above `1 - FROZEN_TOL` are never flipped by [`top_k_weights`].
pub const FROZEN_TOL: f64 = 1e-14;

/// Upper limit on the number of terms [`chi_effective`] will enumerate.
pub const CHI_SEARCH_LIMIT: usize = 1 << 16;

/// One eigenvalue of the reduced density matrix and its occupation pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtTerm {
    /// `n_k` per mode, in the order of [`EntanglementSpectrum::nus`].
    pub occupation: Vec<bool>,
    pub weight: f64,
}

impl SchmidtTerm {
    /// `λ_η` recomputed directly as a product over modes.
    pub fn product_weight(&self, spec: &EntanglementSpectrum) -> f64 {
        spec.nus()
            .iter()
            .zip(&self.occupation)
            .map(|(&nu, &occ)| if occ { 0.5 * (1.0 - nu) } else { 0.5 * (1.0 + nu) })
            .product()
    }
}

/// Lexicographic order of occupation patterns given as sorted lists of
/// flipped modes (`n_k = 0` sorts before `n_k = 1`).
fn cmp_patterns(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            // `a` has a 1 at the smaller index, where `b` still has a 0.
            return y.cmp(x);
        }
    }
    a.len().cmp(&b.len())
}

struct Candidate {
    log_weight: f64,
    flips: Vec<u32>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool { self.cmp(other) == Ordering::Equal }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> { Some(self.cmp(other)) }
}

impl Ord for Candidate {
    // Max-heap: heavier first, then lexicographically smaller pattern.
    fn cmp(&self, other: &Self) -> Ordering {
        self.log_weight
            .total_cmp(&other.log_weight)
            .then_with(|| cmp_patterns(&other.flips, &self.flips))
    }
}

/// The `k` largest eigenvalues `λ_η` in descending order.
///
/// Best-first search from the empty pattern. Flipping mode `k` multiplies the
/// weight by `r_k = (1 - ν_k)/(1 + ν_k) ≤ 1`; with modes sorted by decreasing
/// `r_k`, every non-empty pattern is reached exactly once from its parent by
/// either appending the next mode after its last flip or moving that last
/// flip one mode up. Both moves never increase the weight, so the heap pops
/// patterns in non-increasing order. Weights are carried as natural logs.
///
/// Frozen modes (`ν > 1 - 1e-14`) stay empty. If `k` exceeds the number of
/// patterns over the remaining modes, the output is padded with patterns that
/// flip frozen modes, reported with weight 0. The result has
/// `min(k, 2^{N'})` entries. Equal weights are ordered by occupation pattern.
pub fn top_k_weights(spec: &EntanglementSpectrum, k: usize) -> Result<Vec<SchmidtTerm>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let nus = spec.nus();
    let n_modes = nus.len();
    let active = nus.iter().take_while(|&&nu| nu <= 1.0 - FROZEN_TOL).count();
    let base: f64 = nus.iter().map(|&nu| nu.ln_1p() - std::f64::consts::LN_2).sum();
    let flip_cost: Vec<f64> = nus[..active].iter().map(|&nu| (-nu).ln_1p() - nu.ln_1p()).collect();

    let mut popped: Vec<Candidate> = Vec::with_capacity(k);
    let mut heap = BinaryHeap::new();
    heap.push(Candidate { log_weight: base, flips: Vec::new() });
    while let Some(cand) = heap.pop() {
        if popped.len() >= k && cand.log_weight != popped[popped.len() - 1].log_weight {
            break;
        }
        match cand.flips.last() {
            None if active > 0 => heap.push(Candidate { log_weight: base + flip_cost[0], flips: vec![0] }),
            Some(&last) if (last as usize) + 1 < active => {
                let next = last + 1;
                let mut grown = cand.flips.clone();
                grown.push(next);
                heap.push(Candidate { log_weight: cand.log_weight + flip_cost[next as usize], flips: grown });
                let mut moved = cand.flips.clone();
                *moved.last_mut().unwrap() = next;
                heap.push(Candidate {
                    log_weight: cand.log_weight - flip_cost[last as usize] + flip_cost[next as usize],
                    flips: moved,
                });
            }
            _ => {}
        }
        popped.push(cand);
    }
    // Only exact ties past the k-th entry were popped beyond k.
    popped.sort_by(|a, b| b.cmp(a));
    popped.truncate(k);

    let to_term = |flips: &[u32], weight: f64| {
        let mut occupation = vec![false; n_modes];
        for &f in flips {
            occupation[f as usize] = true;
        }
        SchmidtTerm { occupation, weight }
    };
    let mut terms: Vec<SchmidtTerm> = popped.iter().map(|c| to_term(&c.flips, c.log_weight.exp())).collect();

    let total = u32::try_from(n_modes).ok().and_then(|m| 1usize.checked_shl(m));
    let wanted = total.map_or(k, |t| t.min(k));
    if terms.len() < wanted {
        // Every active pattern is in `terms`; combine them with nonzero
        // frozen-mode masks to fill the remaining slots.
        let active_patterns: Vec<Vec<u32>> = popped.iter().map(|c| c.flips.clone()).collect();
        let mut mask: u64 = 1;
        'fill: loop {
            let frozen: Vec<u32> = (0..(n_modes - active) as u32)
                .filter(|&b| b < 64 && mask >> b & 1 == 1)
                .map(|b| b + active as u32)
                .collect();
            for pat in &active_patterns {
                let mut flips = pat.clone();
                flips.extend_from_slice(&frozen);
                terms.push(to_term(&flips, 0.0));
                if terms.len() == wanted {
                    break 'fill;
                }
            }
            mask += 1;
        }
    }
    Ok(terms)
}

/// Binary entropy of a mode with value `ν`, `H((1 + ν)/2)` in bits.
pub fn mode_entropy(nu: f64) -> f64 {
    let p = 0.5 * (1.0 - nu);
    let q = 0.5 * (1.0 + nu);
    -xlog2x(p) - xlog2x(q)
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 { 0.0 } else { x * x.log2() }
}

/// Entanglement entropy in bits, `Σ_k H((1 + ν_k)/2)`.
pub fn entropy(spec: &EntanglementSpectrum) -> f64 {
    spec.nus().iter().map(|&nu| mode_entropy(nu)).sum()
}

/// Entropy carried by all but the `kept` most entangled modes,
/// `Σ_{k > kept} H((1 + ν_k)/2)`.
pub fn mode_entropy_tail(spec: &EntanglementSpectrum, kept: usize) -> f64 {
    spec.nus().iter().skip(kept).map(|&nu| mode_entropy(nu)).sum()
}

/// Fewest modes whose binary entropies reproduce `S` to within `delta`.
pub fn mode_chi_effective(spec: &EntanglementSpectrum, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("entropy target must lie in (0, 1), got {delta}")));
    }
    Ok((0..=spec.region_size())
        .find(|&m| mode_entropy_tail(spec, m) < delta)
        .unwrap_or(spec.region_size()))
}

/// Result of keeping only the leading `χ'` Schmidt terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    /// Discarded weight `ε = 1 - Σ_{n ≤ χ'} λ_n`.
    pub epsilon: f64,
    /// `⟨Ψ'|Ψ⟩ = √(1 - ε)`.
    pub overlap: f64,
    /// `λ'_n = λ_n / (1 - ε)`.
    pub renormalized: Vec<f64>,
}

/// Truncate a descending weight list to `chi_prime` terms.
///
/// Asking for more terms than `lambdas` holds is only accepted when the
/// missing weight `1 - Σ λ` is below `1e-15`.
pub fn truncation(lambdas: &[f64], chi_prime: usize) -> Result<Truncation> {
    if chi_prime == 0 {
        return Err(Error::invalid("chi' must be at least 1"));
    }
    if chi_prime > lambdas.len() {
        let tail = 1.0 - lambdas.iter().sum::<f64>();
        if tail >= 1e-15 {
            return Err(Error::invalid(format!(
                "chi' = {chi_prime} exceeds the {} available terms and the missing weight {tail:.3e} is not negligible",
                lambdas.len()
            )));
        }
    }
    let kept = &lambdas[..chi_prime.min(lambdas.len())];
    let epsilon = (1.0 - kept.iter().sum::<f64>()).max(0.0);
    Ok(Truncation {
        epsilon,
        overlap: (1.0 - epsilon).sqrt(),
        renormalized: kept.iter().map(|l| l / (1.0 - epsilon)).collect(),
    })
}

/// Overlaps `O_n = √λ_n` of the ground state with its `k` leading Schmidt
/// product states.
pub fn overlaps(spec: &EntanglementSpectrum, k: usize) -> Result<Vec<f64>> {
    Ok(top_k_weights(spec, k)?.iter().map(|t| t.weight.sqrt()).collect())
}

/// `s_n = -λ_n log₂ λ_n` for the first `k` weights, 0 where `λ_n = 0`.
pub fn entropy_contributions(lambdas: &[f64], k: usize) -> Vec<f64> {
    lambdas.iter().take(k).map(|&l| -xlog2x(l)).collect()
}

/// Smallest `χ'` for which `S - Σ_{n ≤ χ'} s_n < delta`.
///
/// Returns the number of enumerated terms if the target is not reached within
/// [`CHI_SEARCH_LIMIT`] terms.
pub fn chi_effective(spec: &EntanglementSpectrum, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("entropy target must lie in (0, 1), got {delta}")));
    }
    let full = entropy(spec);
    let mut k = 16;
    loop {
        let terms = top_k_weights(spec, k)?;
        let mut partial = 0.0;
        for (n, t) in terms.iter().enumerate() {
            partial -= xlog2x(t.weight);
            if full - partial < delta {
                return Ok(n + 1);
            }
        }
        if terms.len() < k || k >= CHI_SEARCH_LIMIT {
            return Ok(terms.len());
        }
        k *= 4;
    }
}

/// Everything derived from one entanglement spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSummary {
    pub entropy_bits: f64,
    /// Leading terms, heaviest first.
    pub top_terms: Vec<SchmidtTerm>,
    pub chi_eff: usize,
    /// Truncation error at the requested `χ'`.
    pub epsilon: f64,
    pub overlaps: Vec<f64>,
    pub entropy_contribs: Vec<f64>,
}

impl SpectrumSummary {
    /// Summarize `spec` with `k` leading terms, truncation at `chi_prime` and
    /// an effective Schmidt number for entropy error `delta`.
    pub fn compute(spec: &EntanglementSpectrum, k: usize, chi_prime: usize, delta: f64) -> Result<Self> {
        let top_terms = top_k_weights(spec, k.max(chi_prime))?;
        let weights: Vec<f64> = top_terms.iter().map(|t| t.weight).collect();
        let epsilon = truncation(&weights, chi_prime)?.epsilon;
        let mut top_terms = top_terms;
        top_terms.truncate(k);
        Ok(Self {
            entropy_bits: entropy(spec),
            chi_eff: chi_effective(spec, delta)?,
            epsilon,
            overlaps: weights.iter().take(k).map(|w| w.sqrt()).collect(),
            entropy_contribs: entropy_contributions(&weights, k),
            top_terms,
        })
    }

    pub fn weights(&self) -> Vec<f64> { self.top_terms.iter().map(|t| t.weight).collect() }
}
