//! Position and momentum Hamiltonian matrices share a spectrum; the optimal scale
//! minimizes the trace.
//!
//! cargo run --example representations

use dwell::basis::{assemble_momentum, assemble_position, hamiltonian_trace, optimal_sigma};
use dwell::{BasisSpec, QuarticPotential};

fn main() -> dwell::Result<()> {
    let pot = QuarticPotential::double_well(1.0, 20.0, 3.0)?;
    let sigma = optimal_sigma(&pot, 100)?;
    for s in [0.8 * sigma, sigma, 1.25 * sigma] {
        println!("sigma={s:.6} trace={:.6}", hamiltonian_trace(&pot, 100, s));
    }
    let basis = BasisSpec::new(100, sigma)?;
    let h = assemble_position(&pot, &basis);
    let g = assemble_momentum(&pot, &basis);
    println!("h01 = {:.6}, g01 = {:.6}", h.entry(0, 1), g.entry(0, 1));
    let (eh, eg) = (h.eigenvalues(), g.eigenvalues());
    for n in 0..6 {
        println!("E{n}: position {:.12}  momentum {:.12}", eh[n], eg[n]);
    }
    Ok(())
}
