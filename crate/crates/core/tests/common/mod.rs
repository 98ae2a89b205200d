//! Test-only oracles, independent of the library's enumeration code.

#![allow(dead_code)]

/// All `2^len` weights `Π (1 ± ν_k)/2` with their occupation patterns,
/// sorted by weight descending, then pattern ascending.
pub fn brute_force_terms(nus: &[f64]) -> Vec<(Vec<bool>, f64)> {
    let m = nus.len();
    let mut out: Vec<(Vec<bool>, f64)> = (0..1u64 << m)
        .map(|mask| {
            // Bit k of the mask is mode k; index 0 is the first mode.
            let occ: Vec<bool> = (0..m).map(|k| mask >> k & 1 == 1).collect();
            let w = nus
                .iter()
                .zip(&occ)
                .map(|(&nu, &o)| if o { 0.5 * (1.0 - nu) } else { 0.5 * (1.0 + nu) })
                .product();
            (occ, w)
        })
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// `-Σ λ log₂ λ` over a weight list.
pub fn shannon_bits(weights: &[f64]) -> f64 {
    weights.iter().filter(|&&w| w > 0.0).map(|&w| -w * w.log2()).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64], len: usize) -> f64 {
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}
