//! Free-fermion Schmidt weights against exact diagonalization of a short chain.

use fermispec::experiments::edge_spectrum;
use fermispec::oracle::{dense_ground_state, oracle_schmidt};
use fermispec::spectrum::{entropy, top_k_weights};
use fermispec::ChainSpec;

fn main() -> fermispec::Result<()> {
    let (n, h, cut) = (10, 1.0, 5);
    let exact = oracle_schmidt(&dense_ground_state(&ChainSpec::new(n, h)?)?, cut)?;
    let spec = edge_spectrum(n, h, cut)?;
    let ff = top_k_weights(&spec, 8)?;
    for (i, t) in ff.iter().enumerate() {
        println!("{:>2} {:.15e} {:.15e}", i + 1, t.weight, exact.values[i]);
    }
    println!("S: {:.15} vs {:.15}", entropy(&spec), exact.entropy_bits);
    Ok(())
}
