//! Exponential decay of the ordered Schmidt weights.

use fermispec::experiments::{decay_fit, edge_weights};

fn main() -> fermispec::Result<()> {
    for h in [1.0, 2.0] {
        let weights = edge_weights(50, h, 25, 10)?;
        let fit = decay_fit(50, h, 25, 6)?;
        println!("h = {h}: ln lambda_n ~ {:.3} n + {:.3} over n = 1..6", fit.slope, fit.intercept);
        let shown: Vec<String> = weights.iter().map(|w| format!("{w:.2e}")).collect();
        println!("  {}", shown.join(" "));
    }
    Ok(())
}
