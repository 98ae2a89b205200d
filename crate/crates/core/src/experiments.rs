//! Field sweeps, size-scaling runs and the least-squares fits built on them.
//!
//! Every row is an independent computation. Sweeps fan out over rayon's
//! thread pool and collect in input order, so output does not depend on
//! scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freefermion::{canonical_form, ground_state_correlation, reduce, EntanglementSpectrum, Region};
use crate::model::{build_majorana_hamiltonian, ChainSpec};
use crate::spectrum::{entropy, entropy_contributions, mode_entropy_tail, top_k_weights};

/// Mode values of the first `cut` sites of the `n_sites` chain at field `field`.
pub fn edge_spectrum(n_sites: usize, field: f64, cut: usize) -> Result<EntanglementSpectrum> {
    let spec = ChainSpec::new(n_sites, field)?;
    if cut == 0 || cut > n_sites {
        return Err(Error::invalid(format!("cut must lie in 1..={n_sites}, got {cut}")));
    }
    let gs = ground_state_correlation(&build_majorana_hamiltonian(spec))?;
    canonical_form(&reduce(&gs.correlation, &Region::edge(cut)?)?)
}

/// The leading `k` Schmidt weights of [`edge_spectrum`].
pub fn edge_weights(n_sites: usize, field: f64, cut: usize, k: usize) -> Result<Vec<f64>> {
    let spec = edge_spectrum(n_sites, field, cut)?;
    Ok(top_k_weights(&spec, k)?.into_iter().map(|t| t.weight).collect())
}

/// One `(N, h, cut)` point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_sites: usize,
    pub field: f64,
    pub cut: usize,
    pub entropy_bits: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub lambda_3: f64,
    pub lambda_4: f64,
    pub overlap_1: f64,
    pub overlap_2: f64,
    pub overlap_3: f64,
    pub overlap_4: f64,
    pub s_1: f64,
    pub s_2: f64,
    pub s_3: f64,
    pub nu_min: f64,
}

impl SweepRow {
    pub fn compute(n_sites: usize, field: f64, cut: usize) -> Result<Self> {
        let spec = edge_spectrum(n_sites, field, cut)?;
        let mut lambda: Vec<f64> = top_k_weights(&spec, 4)?.into_iter().map(|t| t.weight).collect();
        // Regions of one site have only two weights.
        lambda.resize(4, 0.0);
        let s = entropy_contributions(&lambda, 3);
        Ok(Self {
            n_sites,
            field,
            cut,
            entropy_bits: entropy(&spec),
            lambda_1: lambda[0],
            lambda_2: lambda[1],
            lambda_3: lambda[2],
            lambda_4: lambda[3],
            overlap_1: lambda[0].sqrt(),
            overlap_2: lambda[1].sqrt(),
            overlap_3: lambda[2].sqrt(),
            overlap_4: lambda[3].sqrt(),
            s_1: s[0],
            s_2: s[1],
            s_3: s[2],
            nu_min: spec.nu_min(),
        })
    }

    pub fn lambdas(&self) -> [f64; 4] { [self.lambda_1, self.lambda_2, self.lambda_3, self.lambda_4] }

    pub fn overlaps(&self) -> [f64; 4] { [self.overlap_1, self.overlap_2, self.overlap_3, self.overlap_4] }

    pub fn contributions(&self) -> [f64; 3] { [self.s_1, self.s_2, self.s_3] }
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    /// What was fitted against what, over which points.
    pub domain: String,
}

/// Ordinary least squares on paired samples (at least two distinct `x`).
pub fn linear_fit(xs: &[f64], ys: &[f64], domain: impl Into<String>) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!("fit needs paired data, got {} x and {} y", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("fit needs at least two points"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::numerical("non-finite value in fit data"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit needs at least two distinct x values"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(FitResult { slope, intercept, residual, domain: domain.into() })
}

fn collect_rows<T, F>(points: &[T], label: &str, f: F) -> Result<Vec<SweepRow>>
where
    T: Sync + std::fmt::Debug,
    F: Fn(&T) -> Result<SweepRow> + Sync,
{
    points
        .par_iter()
        .map(|p| {
            f(p).map_err(|e| match e {
                Error::InvalidInput(m) => Error::InvalidInput(format!("{label} = {p:?}: {m}")),
                Error::Numerical(m) => Error::Numerical(format!("{label} = {p:?}: {m}")),
            })
        })
        .collect()
}

/// One row per field value, in grid order.
pub fn field_sweep(n_sites: usize, fields: &[f64], cut: usize) -> Result<Vec<SweepRow>> {
    if fields.is_empty() {
        return Err(Error::invalid("field grid is empty"));
    }
    if fields.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("field grid must be strictly ascending"));
    }
    collect_rows(fields, "h", |&h| SweepRow::compute(n_sites, h, cut))
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect(),
    }
}

/// Half-chain rows over a list of sizes and the fit of `S` against `log₂ N`.
#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub rows: Vec<SweepRow>,
    pub fit: FitResult,
}

/// Half-chain entropy over `sizes` at field `field`, fitted as
/// `S = slope·log₂ N + const`. At criticality the slope estimates `c/6`.
pub fn scaling_run(sizes: &[usize], field: f64) -> Result<ScalingRun> {
    if sizes.len() < 2 {
        return Err(Error::invalid("scaling run needs at least two sizes"));
    }
    if let Some(n) = sizes.iter().find(|&&n| n < 8 || n % 2 != 0) {
        return Err(Error::invalid(format!("scaling sizes must be even and at least 8, got {n}")));
    }
    let rows = collect_rows(sizes, "n_sites", |&n| SweepRow::compute(n, field, n / 2))?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n_sites as f64).log2()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.entropy_bits).collect();
    let fit = linear_fit(&xs, &ys, format!("entropy_bits vs log2(n_sites); h = {field}; cut = n/2"))?;
    Ok(ScalingRun { rows, fit })
}

/// Fit `ln λ_n` against `n = 1..` for a descending weight list.
pub fn decay_fit_weights(lambdas: &[f64]) -> Result<FitResult> {
    if let Some(n) = lambdas.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::numerical(format!("weight {} underflowed ({})", n + 1, lambdas[n])));
    }
    let xs: Vec<f64> = (1..=lambdas.len()).map(|n| n as f64).collect();
    let ys: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    linear_fit(&xs, &ys, format!("ln(lambda_n) vs n; n = 1..{}", lambdas.len()))
}

/// Exponential decay rate of the `count` largest Schmidt weights.
pub fn decay_fit(n_sites: usize, field: f64, cut: usize, count: usize) -> Result<FitResult> {
    let weights = edge_weights(n_sites, field, cut, count)?;
    let mut fit = decay_fit_weights(&weights)?;
    fit.domain = format!("{}; n_sites = {n_sites}; h = {field}; cut = {cut}", fit.domain);
    Ok(fit)
}

/// Truncation errors of one half-chain point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub n_sites: usize,
    pub field: f64,
    /// `1 - Σ_{n ≤ χ'_O} O_n²`, the discarded Schmidt weight.
    pub delta_overlap: f64,
    /// `S - Σ_{n ≤ χ'_S} s_n`.
    pub delta_entropy: f64,
    /// Entropy outside the `χ'_S` most entangled modes.
    pub delta_entropy_modes: f64,
}

impl ErrorRow {
    pub fn compute(n_sites: usize, field: f64, chi_overlap: usize, chi_entropy: usize) -> Result<Self> {
        let spec = edge_spectrum(n_sites, field, n_sites / 2)?;
        let weights: Vec<f64> = top_k_weights(&spec, chi_overlap.max(chi_entropy))?
            .into_iter()
            .map(|t| t.weight)
            .collect();
        let kept: f64 = weights.iter().take(chi_overlap).sum();
        let captured: f64 = entropy_contributions(&weights, chi_entropy).iter().sum();
        Ok(Self {
            n_sites,
            field,
            delta_overlap: 1.0 - kept,
            delta_entropy: entropy(&spec) - captured,
            delta_entropy_modes: mode_entropy_tail(&spec, chi_entropy),
        })
    }
}

/// Rows of [`ErrorRow`] plus linear fits restricted to `N > 100`.
#[derive(Clone, Debug)]
pub struct ErrorGrowth {
    pub rows: Vec<ErrorRow>,
    pub overlap_fit: FitResult,
    pub entropy_fit: FitResult,
}

/// Sizes above this enter the linear fits of [`error_growth`].
pub const ERROR_FIT_MIN_SITES: usize = 100;

/// Truncation errors over `sizes` at field `field`, half chain.
pub fn error_growth(sizes: &[usize], field: f64, chi_overlap: usize, chi_entropy: usize) -> Result<ErrorGrowth> {
    if chi_overlap == 0 || chi_entropy == 0 {
        return Err(Error::invalid("chi' must be at least 1"));
    }
    if sizes.iter().filter(|&&n| n > ERROR_FIT_MIN_SITES).count() < 2 {
        return Err(Error::invalid(format!("need at least two sizes above {ERROR_FIT_MIN_SITES} to fit")));
    }
    if let Some(n) = sizes.iter().find(|&&n| n < 2) {
        return Err(Error::invalid(format!("sizes must be at least 2, got {n}")));
    }
    let rows: Vec<ErrorRow> = sizes
        .par_iter()
        .map(|&n| ErrorRow::compute(n, field, chi_overlap, chi_entropy))
        .collect::<Result<_>>()?;
    let fitted: Vec<&ErrorRow> = rows.iter().filter(|r| r.n_sites > ERROR_FIT_MIN_SITES).collect();
    let xs: Vec<f64> = fitted.iter().map(|r| r.n_sites as f64).collect();
    let dos: Vec<f64> = fitted.iter().map(|r| r.delta_overlap).collect();
    let dss: Vec<f64> = fitted.iter().map(|r| r.delta_entropy).collect();
    Ok(ErrorGrowth {
        overlap_fit: linear_fit(&xs, &dos, format!("delta_overlap vs n_sites; chi' = {chi_overlap}; n_sites > {ERROR_FIT_MIN_SITES}; h = {field}"))?,
        entropy_fit: linear_fit(&xs, &dss, format!("delta_entropy vs n_sites; chi' = {chi_entropy}; n_sites > {ERROR_FIT_MIN_SITES}; h = {field}"))?,
        rows,
    })
}
