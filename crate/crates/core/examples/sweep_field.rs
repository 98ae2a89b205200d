//! Half-chain entropy and leading weights across the field.
//!
//!     cargo run --release --example sweep_field -- [N]

use fermispec::experiments::{field_sweep, linspace};

fn main() -> fermispec::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let rows = field_sweep(n, &linspace(0.0, 2.0, 21), n / 2)?;
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "h", "S [bits]", "lambda_1", "lambda_2", "lambda_3");
    for r in &rows {
        println!("{:>5.2} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}", r.field, r.entropy_bits, r.lambda_1, r.lambda_2, r.lambda_3);
    }
    Ok(())
}
