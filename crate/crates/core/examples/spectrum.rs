//! Lowest levels of a symmetric and a tilted double well, with quasi-degenerate pairs.
//!
//! cargo run --example spectrum

use dwell::{quasi_degenerate_pairs, solve, QuarticPotential};

fn main() -> dwell::Result<()> {
    for gamma in [0.0, 2.0, 3.0] {
        let pot = QuarticPotential::double_well(1.0, 30.0, gamma)?;
        let spec = solve(&pot, 100, 11)?;
        println!("alpha=1 beta=30 gamma={gamma} (sigma = {:.6})", spec.basis.sigma);
        for n in 0..11 {
            println!("  E{n:<2} = {:.13}", spec.energy(n));
        }
        let pairs: Vec<String> = quasi_degenerate_pairs(&spec, 1e-6)
            .iter()
            .map(|p| format!("({},{}) gap {:.1e}", p.lower, p.upper, p.gap))
            .collect();
        println!("  pairs: {}", if pairs.is_empty() { "none".into() } else { pairs.join(", ") });
    }
    Ok(())
}
