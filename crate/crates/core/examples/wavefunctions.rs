//! Position and momentum wavefunctions of a tilted well: norms, nodes and well occupancy.
//!
//! cargo run --example wavefunctions

use dwell::observables::well_occupancy;
use dwell::quadrature::simpson;
use dwell::wavefunction::{
    count_nodes, eval_momentum, eval_position, momentum_grid, state_grid, DEFAULT_POINTS, DEFAULT_RHO_FLOOR,
};
use dwell::{critical_points, solve, QuarticPotential};

fn main() -> dwell::Result<()> {
    let pot = QuarticPotential::double_well(1.0, 20.0, 3.0)?;
    let spec = solve(&pot, 100, 6)?;
    let geometry = critical_points(&pot);
    let gx = state_grid(&spec, 5, DEFAULT_POINTS)?;
    let gp = momentum_grid(&spec, 5, DEFAULT_POINTS)?;
    println!("x in [{:.3}, {:.3}], p in [{:.3}, {:.3}]", gx.x0, gx.x0 + gx.dx * (gx.points - 1) as f64, gp.x0, -gp.x0);
    println!(" n   norm_x      norm_p      nodes  effective  p(I)      well");
    for n in 0..6 {
        let psi = eval_position(&spec, n, &gx)?;
        let phi = eval_momentum(&spec, n, &gp)?;
        let norm_x = simpson(&psi.density(), gx.dx);
        let nodes = count_nodes(&psi, &pot, spec.energy(n), DEFAULT_RHO_FLOOR);
        let occ = well_occupancy(&spec, n, &geometry, &gx)?;
        println!(
            "{n:>2}   {norm_x:.8}  {:.8}  {:>5}  {:>9}  {:.6}  {}",
            phi.norm_sqr(),
            nodes.total,
            nodes.effective,
            occ.p_well_i,
            occ.classification
        );
    }
    Ok(())
}
