//! Leading Schmidt weights of one half chain, with entropy and truncation data.

use fermispec::experiments::edge_spectrum;
use fermispec::SpectrumSummary;

fn main() -> fermispec::Result<()> {
    let (n, h) = (50, 1.0);
    let spec = edge_spectrum(n, h, n / 2)?;
    let summary = SpectrumSummary::compute(&spec, 10, 4, 1e-4)?;
    println!("N = {n}, h = {h}, smallest mode value nu = {:.6}", spec.nu_min());
    println!("S = {:.8} bits, chi_eff(1e-4) = {}, discarded weight beyond 4 terms = {:.3e}", summary.entropy_bits, summary.chi_eff, summary.epsilon);
    for (i, term) in summary.top_terms.iter().enumerate() {
        let flipped: Vec<usize> = term.occupation.iter().enumerate().filter(|(_, &o)| o).map(|(k, _)| k).collect();
        println!("{:>3} lambda = {:.6e}  flipped modes {flipped:?}", i + 1, term.weight);
    }
    Ok(())
}
