//! Overlaps of the ground state with its leading product terms.

use fermispec::experiments::{edge_spectrum, linspace};
use fermispec::spectrum::overlaps;

fn main() -> fermispec::Result<()> {
    for n in [10, 100] {
        println!("N = {n}");
        for h in linspace(0.0, 2.0, 11) {
            let o = overlaps(&edge_spectrum(n, h, n / 2)?, 4)?;
            println!("  h = {h:.1}  O = {:.5} {:.5} {:.5} {:.5}", o[0], o[1], o[2], o[3]);
        }
    }
    Ok(())
}
