//! `fermispec` command line.
//!
//! Each subcommand writes one CSV (header = field names of the row type),
//! optionally a gnuplot script next to it, and prints a short summary.
//! Exit codes: 0 success, 2 invalid arguments, 1 numerical or I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::error::Error;
use crate::experiments::{self, ErrorRow, FitResult};
use crate::model::ChainSpec;
use crate::oracle;
use crate::spectrum::{self, top_k_weights};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FERMISPEC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fermispec", version, about = "Entanglement spectra of the open transverse-field Ising chain")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy, leading weights, overlaps and contributions over a field grid.
    SweepField(SweepArgs),
    /// Leading Schmidt weights, contributions and overlaps at one point.
    Spectrum(PointArgs),
    /// Half-chain entropy against log2(N) and its linear fit.
    Scaling(ScalingArgs),
    /// Exponential decay fit of the leading Schmidt weights.
    DecayFit(PointArgs),
    /// Truncation errors against system size with fits over N > 100.
    ErrorGrowth(ErrorGrowthArgs),
    /// Leading overlaps O_n over a field grid, one row per (h, n).
    Overlaps(OverlapArgs),
    /// Free-fermion weights against exact diagonalization (N <= 12).
    OracleCompare(OracleArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// CSV output path.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    pub emit_plot: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Number of sites.
    #[arg(long = "n", default_value_t = 10)]
    pub n_sites: usize,
    /// Smallest field.
    #[arg(long, default_value_t = 0.0)]
    pub h_min: f64,
    /// Largest field.
    #[arg(long, default_value_t = 2.0)]
    pub h_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Sites kept, counted from the left edge [default: N/2].
    #[arg(long)]
    pub cut: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of overlaps per field value.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Number of sites.
    #[arg(long = "n", default_value_t = 50)]
    pub n_sites: usize,
    /// Transverse field.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Sites kept, counted from the left edge [default: N/2].
    #[arg(long)]
    pub cut: Option<usize>,
    /// Number of leading Schmidt terms.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Comma-separated even system sizes, each at least 8.
    #[arg(long = "n", value_delimiter = ',', default_value = "16,32,64,128,256")]
    pub sizes: Vec<usize>,
    /// Transverse field.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ErrorGrowthArgs {
    /// Comma-separated system sizes; at least two must exceed 100.
    #[arg(long = "n", value_delimiter = ',', default_value = "40,80,120,160,200,280,400")]
    pub sizes: Vec<usize>,
    /// Transverse field.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Schmidt terms kept for the overlap error.
    #[arg(long, default_value_t = 4)]
    pub chi_overlap: usize,
    /// Schmidt terms kept for the entropy error.
    #[arg(long, default_value_t = 3)]
    pub chi_entropy: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Number of sites, 2 to 12.
    #[arg(long = "n", default_value_t = 8)]
    pub n_sites: usize,
    /// Transverse field.
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Sites kept, counted from the left edge [default: N/2].
    #[arg(long)]
    pub cut: Option<usize>,
    /// Number of leading weights compared.
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// One Schmidt term of a single point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub lambda_n: f64,
    pub s_n: f64,
    pub overlap_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub n_sites: usize,
    pub field: f64,
    pub cut: usize,
    pub n: usize,
    pub overlap_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub n: usize,
    pub lambda_free_fermion: f64,
    pub lambda_oracle: f64,
    pub abs_diff: f64,
}

/// Agreement required by `oracle-compare` for a zero exit code.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self { Failure::Lib(e) }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self { Failure::Io(e.to_string()) }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self { Failure::Io(e.to_string()) }
}

impl From<tempfile::PersistError> for Failure {
    fn from(e: tempfile::PersistError) -> Self { Failure::Io(e.to_string()) }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure { Failure::Lib(Error::InvalidInput(msg.into())) }

/// Parse `args` (program name first), run the subcommand and return the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|_| dispatch(config.command)) {
        Ok(()) => 0,
        Err(Failure::Lib(e)) => {
            eprintln!("fermispec: {e}");
            e.exit_code()
        }
        Err(Failure::Io(msg)) => {
            eprintln!("fermispec: {msg}");
            1
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| invalid(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A pool may already exist when `run` is called repeatedly in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn check_field(h: f64) -> CliResult<()> {
    if !h.is_finite() || h < 0.0 {
        return Err(invalid(format!("field must be finite and non-negative, got {h}")));
    }
    Ok(())
}

fn resolve_cut(n_sites: usize, cut: Option<usize>) -> CliResult<usize> {
    if n_sites == 0 {
        return Err(invalid("--n must be at least 1"));
    }
    let cut = cut.unwrap_or((n_sites / 2).max(1));
    if cut == 0 || cut > n_sites {
        return Err(invalid(format!("--cut must lie in 1..={n_sites}, got {cut}")));
    }
    Ok(cut)
}

fn check_k(k: usize) -> CliResult<()> {
    if k == 0 {
        return Err(invalid("--k must be at least 1"));
    }
    Ok(())
}

impl GridArgs {
    fn validate(&self) -> CliResult<(Vec<f64>, usize)> {
        let cut = resolve_cut(self.n_sites, self.cut)?;
        check_field(self.h_min)?;
        check_field(self.h_max)?;
        if self.steps == 0 {
            return Err(invalid("--steps must be at least 1; the field grid is empty"));
        }
        if self.steps > 1 && self.h_max <= self.h_min {
            return Err(invalid(format!("--h-max ({}) must exceed --h-min ({})", self.h_max, self.h_min)));
        }
        Ok((experiments::linspace(self.h_min, self.h_max, self.steps), cut))
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::SweepField(a) => sweep_field(a),
        Command::Spectrum(a) => spectrum_point(a),
        Command::Scaling(a) => scaling(a),
        Command::DecayFit(a) => decay_fit(a),
        Command::ErrorGrowth(a) => error_growth(a),
        Command::Overlaps(a) => overlaps(a),
        Command::OracleCompare(a) => oracle_compare(a),
    }
}

fn sweep_field(a: SweepArgs) -> CliResult<()> {
    let (grid, cut) = a.grid.validate()?;
    let rows = experiments::field_sweep(a.grid.n_sites, &grid, cut)?;
    let path = output_path(&a.out, "sweep_field.csv");
    write_csv(&path, &rows)?;
    if a.out.emit_plot {
        write_plot(&path, "field h", "entropy S [bits]", &[(2, 4, "S")])?;
    }
    let peak = rows.iter().max_by(|x, y| x.entropy_bits.total_cmp(&y.entropy_bits)).expect("non-empty grid");
    println!("N = {}, cut = {cut}: max S = {:.6} bits at h = {}", a.grid.n_sites, peak.entropy_bits, peak.field);
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn spectrum_rows(weights: &[f64]) -> Vec<SpectrumRow> {
    weights
        .iter()
        .enumerate()
        .map(|(i, &l)| SpectrumRow { n: i + 1, lambda_n: l, s_n: spectrum::entropy_contributions(&[l], 1)[0], overlap_n: l.sqrt() })
        .collect()
}

fn spectrum_point(a: PointArgs) -> CliResult<()> {
    check_field(a.h)?;
    check_k(a.k)?;
    let cut = resolve_cut(a.n_sites, a.cut)?;
    let spec = experiments::edge_spectrum(a.n_sites, a.h, cut)?;
    let weights: Vec<f64> = top_k_weights(&spec, a.k)?.into_iter().map(|t| t.weight).collect();
    let path = output_path(&a.out, "spectrum.csv");
    write_csv(&path, &spectrum_rows(&weights))?;
    if a.out.emit_plot {
        write_plot_logy(&path, "n", "lambda_n", &[(1, 2, "lambda_n")])?;
    }
    let summary = spectrum::SpectrumSummary::compute(&spec, a.k, a.k.min(4), 1e-4)?;
    println!("N = {}, h = {}, cut = {cut}", a.n_sites, a.h);
    println!("S = {:.10} bits, chi_eff(1e-4) = {}, epsilon(chi' = {}) = {:.6e}", summary.entropy_bits, summary.chi_eff, a.k.min(4), summary.epsilon);
    println!("wrote {} rows to {}", weights.len(), path.display());
    Ok(())
}

fn print_fit(label: &str, fit: &FitResult) {
    println!("{label}: slope = {:.6e}, intercept = {:.6e}, residual = {:.3e} ({})", fit.slope, fit.intercept, fit.residual, fit.domain);
}

fn scaling(a: ScalingArgs) -> CliResult<()> {
    check_field(a.h)?;
    let run = experiments::scaling_run(&a.sizes, a.h)?;
    let path = output_path(&a.out, "scaling.csv");
    write_csv(&path, &run.rows)?;
    write_csv(&fit_path(&path), std::slice::from_ref(&run.fit))?;
    if a.out.emit_plot {
        write_plot_logx(&path, "N", "entropy S [bits]", &[(1, 4, "S")])?;
    }
    print_fit("S vs log2 N", &run.fit);
    println!("c estimate (6 x slope) = {:.4}", 6.0 * run.fit.slope);
    println!("wrote {} rows to {}", run.rows.len(), path.display());
    Ok(())
}

fn decay_fit(a: PointArgs) -> CliResult<()> {
    check_field(a.h)?;
    check_k(a.k)?;
    let cut = resolve_cut(a.n_sites, a.cut)?;
    let weights = experiments::edge_weights(a.n_sites, a.h, cut, a.k)?;
    let mut fit = experiments::decay_fit_weights(&weights)?;
    fit.domain = format!("{}; n_sites = {}; h = {}; cut = {cut}", fit.domain, a.n_sites, a.h);
    let path = output_path(&a.out, "decay_fit.csv");
    write_csv(&path, &spectrum_rows(&weights))?;
    write_csv(&fit_path(&path), std::slice::from_ref(&fit))?;
    if a.out.emit_plot {
        write_plot_logy(&path, "n", "lambda_n", &[(1, 2, "lambda_n")])?;
    }
    print_fit("ln lambda_n vs n", &fit);
    println!("wrote {} rows to {}", weights.len(), path.display());
    Ok(())
}

fn error_growth(a: ErrorGrowthArgs) -> CliResult<()> {
    check_field(a.h)?;
    let growth = experiments::error_growth(&a.sizes, a.h, a.chi_overlap, a.chi_entropy)?;
    let path = output_path(&a.out, "error_growth.csv");
    write_csv::<ErrorRow>(&path, &growth.rows)?;
    write_csv(&fit_path(&path), &[growth.overlap_fit.clone(), growth.entropy_fit.clone()])?;
    if a.out.emit_plot {
        write_plot(&path, "N", "error", &[(1, 3, "delta_overlap"), (1, 4, "delta_entropy")])?;
    }
    print_fit("delta_overlap", &growth.overlap_fit);
    print_fit("delta_entropy", &growth.entropy_fit);
    println!("wrote {} rows to {}", growth.rows.len(), path.display());
    Ok(())
}

fn overlaps(a: OverlapArgs) -> CliResult<()> {
    check_k(a.k)?;
    let (grid, cut) = a.grid.validate()?;
    let n_sites = a.grid.n_sites;
    use rayon::prelude::*;
    let per_field: Vec<Vec<OverlapRow>> = grid
        .par_iter()
        .map(|&h| -> crate::Result<Vec<OverlapRow>> {
            let spec = experiments::edge_spectrum(n_sites, h, cut)?;
            Ok(spectrum::overlaps(&spec, a.k)?
                .into_iter()
                .enumerate()
                .map(|(i, o)| OverlapRow { n_sites, field: h, cut, n: i + 1, overlap_n: o })
                .collect())
        })
        .collect::<crate::Result<_>>()?;
    let rows: Vec<OverlapRow> = per_field.into_iter().flatten().collect();
    let path = output_path(&a.out, "overlaps.csv");
    write_csv(&path, &rows)?;
    if a.out.emit_plot {
        write_plot_overlaps(&path, a.k)?;
    }
    println!("N = {n_sites}, cut = {cut}: {} field values x {} overlaps", grid.len(), a.k);
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn oracle_compare(a: OracleArgs) -> CliResult<()> {
    check_field(a.h)?;
    check_k(a.k)?;
    if a.n_sites < 2 || a.n_sites > oracle::MAX_SITES {
        return Err(invalid(format!("oracle-compare needs 2 <= N <= {}, got {}", oracle::MAX_SITES, a.n_sites)));
    }
    let cut = resolve_cut(a.n_sites, a.cut)?;
    if cut == a.n_sites {
        return Err(invalid("--cut must leave at least one site outside the region"));
    }
    let chain = ChainSpec::new(a.n_sites, a.h)?;
    let exact = oracle::dense_ground_state(&chain)?;
    let schmidt = oracle::oracle_schmidt(&exact, cut)?;
    let gs = crate::freefermion::ground_state_correlation(&crate::model::build_majorana_hamiltonian(chain))?;
    let spec = experiments::edge_spectrum(a.n_sites, a.h, cut)?;
    let ff: Vec<f64> = top_k_weights(&spec, a.k)?.into_iter().map(|t| t.weight).collect();

    let rows: Vec<CompareRow> = (0..a.k.min(ff.len().max(schmidt.values.len())))
        .map(|i| {
            let f = ff.get(i).copied().unwrap_or(0.0);
            let o = schmidt.values.get(i).copied().unwrap_or(0.0);
            CompareRow { n: i + 1, lambda_free_fermion: f, lambda_oracle: o, abs_diff: (f - o).abs() }
        })
        .collect();
    let max_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let entropy_diff = (spectrum::entropy(&spec) - schmidt.entropy_bits).abs();
    let energy_diff = (gs.energy - exact.energy).abs();

    let path = output_path(&a.out, "oracle_compare.csv");
    write_csv(&path, &rows)?;
    if a.out.emit_plot {
        write_plot_logy(&path, "n", "lambda_n", &[(1, 2, "free fermion"), (1, 3, "exact")])?;
    }
    println!("N = {}, h = {}, cut = {cut}", a.n_sites, a.h);
    println!("max |lambda_ff - lambda_oracle| = {max_diff:.3e}");
    println!("|S_ff - S_oracle| = {entropy_diff:.3e}");
    println!("|E_ff - E_oracle| = {energy_diff:.3e}");
    println!("wrote {} rows to {}", rows.len(), path.display());
    if max_diff < ORACLE_TOL && entropy_diff < ORACLE_TOL && energy_diff < ORACLE_TOL {
        println!("agreement within {ORACLE_TOL:e}");
        Ok(())
    } else {
        Err(Failure::Lib(Error::Numerical(format!("free-fermion and exact results differ by more than {ORACLE_TOL:e}"))))
    }
}

fn output_path(out: &OutputArgs, default: &str) -> PathBuf {
    out.output.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn fit_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}_fit.csv"))
}

/// Write `contents` to `path` through a temporary file in the same directory
/// and an atomic rename.
fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path)?;
    Ok(())
}

/// Serialize `rows` as CSV with a header of field names.
pub fn csv_bytes<R: Serialize>(rows: &[R]) -> csv::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> CliResult<()> {
    write_atomic(path, &csv_bytes(rows)?)
}

fn plot_path(csv: &Path) -> PathBuf { csv.with_extension("gp") }

fn csv_name(csv: &Path) -> String {
    csv.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn plot_script(csv: &Path, preamble: &str, xlabel: &str, ylabel: &str, series: &[(usize, usize, &str)]) -> String {
    let data = csv_name(csv);
    let mut s = String::new();
    s.push_str("# gnuplot script; run from the directory holding the CSV\n");
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(preamble);
    s.push_str(&format!("set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"));
    let parts: Vec<String> = series
        .iter()
        .map(|(x, y, t)| format!("'{data}' using {x}:{y} with linespoints title '{t}'"))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}

fn write_plot(csv: &Path, xlabel: &str, ylabel: &str, series: &[(usize, usize, &str)]) -> CliResult<()> {
    write_atomic(&plot_path(csv), plot_script(csv, "", xlabel, ylabel, series).as_bytes())
}

fn write_plot_logy(csv: &Path, xlabel: &str, ylabel: &str, series: &[(usize, usize, &str)]) -> CliResult<()> {
    write_atomic(&plot_path(csv), plot_script(csv, "set logscale y\n", xlabel, ylabel, series).as_bytes())
}

fn write_plot_logx(csv: &Path, xlabel: &str, ylabel: &str, series: &[(usize, usize, &str)]) -> CliResult<()> {
    write_atomic(&plot_path(csv), plot_script(csv, "set logscale x 2\n", xlabel, ylabel, series).as_bytes())
}

fn write_plot_overlaps(csv: &Path, k: usize) -> CliResult<()> {
    let data = csv_name(csv);
    let mut s = String::from("# gnuplot script; run from the directory holding the CSV\nset datafile separator ','\n");
    s.push_str("set xlabel 'field h'\nset ylabel 'overlap O_n'\n");
    let parts: Vec<String> = (1..=k)
        .map(|n| format!("'{data}' using ($4 == {n} ? $2 : 1/0):5 every ::1 with linespoints title 'O_{n}'"))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    write_atomic(&plot_path(csv), s.as_bytes())
}
