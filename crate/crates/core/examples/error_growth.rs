//! Truncation errors of the half-chain Schmidt expansion against chain length.

use fermispec::experiments::error_growth;

fn main() -> fermispec::Result<()> {
    let growth = error_growth(&[40, 80, 120, 160, 200, 280, 400], 1.0, 4, 3)?;
    println!("{:>5} {:>12} {:>12} {:>12}", "N", "dO (4 terms)", "dS (3 terms)", "dS (3 modes)");
    for r in &growth.rows {
        println!("{:>5} {:>12.4e} {:>12.4e} {:>12.4e}", r.n_sites, r.delta_overlap, r.delta_entropy, r.delta_entropy_modes);
    }
    for fit in [&growth.overlap_fit, &growth.entropy_fit] {
        println!("{}: slope {:.3e}, intercept {:.3e}", fit.domain, fit.slope, fit.intercept);
    }
    Ok(())
}
