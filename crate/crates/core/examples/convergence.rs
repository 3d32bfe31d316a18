//! Basis-size convergence for a quartic with a cubic term, against high-precision values.
//!
//! cargo run --example convergence

use dwell::{solve, QuarticPotential};

const REFERENCE: [f64; 4] = [0.22049693355138318, 0.799076156134041042, 1.5794258727150421868, 2.47522712627695799794];

fn main() -> dwell::Result<()> {
    let pot = QuarticPotential::new(0.01, -0.0075, -0.0025, 0.0, 0.0)?;
    println!("{:>4} {:>22} {:>10}", "N", "E3", "max err");
    for n_basis in [10, 15, 20, 25, 50, 75, 100] {
        let spec = solve(&pot, n_basis, 4)?;
        let err = (0..4).map(|n| (spec.energy(n) - REFERENCE[n]).abs()).fold(0.0, f64::max);
        println!("{n_basis:>4} {:>22.17} {err:>10.1e}", spec.energy(3));
    }
    Ok(())
}
