//! Logarithmic growth of the half-chain entropy at the critical field,
//! against saturation in the gapped phase.

use fermispec::experiments::scaling_run;

fn main() -> fermispec::Result<()> {
    let sizes = [16, 32, 64, 128, 256];
    for h in [1.0, 2.0] {
        let run = scaling_run(&sizes, h)?;
        println!("h = {h}");
        for r in &run.rows {
            println!("  N = {:>4}  S = {:.6}", r.n_sites, r.entropy_bits);
        }
        println!("  slope vs log2 N = {:.5}  (central charge estimate {:.4})", run.fit.slope, 6.0 * run.fit.slope);
    }
    Ok(())
}
