//! Per-state bundle of every computed quantity.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::observables::{information_measures, occupancy_from_density, uncertainties, Occupancy};
use crate::phase_space::area;
use crate::potential::{critical_points, QuarticPotential};
use crate::spectrum::solve;
use crate::wavefunction::{
    count_nodes, eval_momentum, momentum_grid, position_states, state_grid, GridFunction, DEFAULT_POINTS,
    DEFAULT_RHO_FLOOR,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub n_basis: usize,
    pub n_states: usize,
    pub grid_points: usize,
    pub rho_floor: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { n_basis: 100, n_states: 8, grid_points: DEFAULT_POINTS, rho_floor: DEFAULT_RHO_FLOOR }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub energy: f64,
    pub mean_x: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub uncertainty_product: f64,
    #[serde(rename = "p_well_I")]
    pub p_well_i: f64,
    #[serde(rename = "p_well_II")]
    pub p_well_ii: f64,
    pub occupancy: Occupancy,
    pub total_nodes: usize,
    pub effective_nodes: usize,
    pub s_x: f64,
    pub s_p: f64,
    pub s_total: f64,
    pub i_x: f64,
    pub i_p: f64,
    pub i_product: f64,
    pub e_x: f64,
    pub e_p: f64,
    pub e_product: f64,
    pub os_x: f64,
    pub os_p: f64,
    pub os_total: f64,
    pub barrier_action: f64,
    pub allowed_action: f64,
    pub lobe_count: usize,
    pub converged_flag: bool,
}

/// Solves `pot` and reports on states `0..opts.n_states`.
pub fn analyze(pot: &QuarticPotential, opts: &AnalysisOptions) -> Result<Vec<StateReport>> {
    let spec = solve(pot, opts.n_basis, opts.n_states)?;
    let top = opts.n_states - 1;
    let gx = state_grid(&spec, top, opts.grid_points)?;
    let gp = momentum_grid(&spec, top, opts.grid_points)?;
    let geometry = critical_points(pot);
    let states: Vec<usize> = (0..opts.n_states).collect();
    let psi_x = position_states(&spec, &states, &gx.coords())?;

    psi_x
        .into_iter()
        .enumerate()
        .map(|(n, (values, derivative))| {
            let energy = spec.energy(n);
            let psi = GridFunction { x0: gx.x0, dx: gx.dx, values, derivative: Some(derivative) };
            let psi_p = eval_momentum(&spec, n, &gp)?;
            let u = uncertainties(&spec, n)?;
            let occ = occupancy_from_density(&psi.density(), &gx, &geometry);
            let nodes = count_nodes(&psi, pot, energy, opts.rho_floor);
            let info = information_measures(&psi, &psi_p)?;
            let phase = area(pot, energy);
            Ok(StateReport {
                energy,
                mean_x: u.mean_x,
                delta_x: u.delta_x,
                delta_p: u.delta_p,
                uncertainty_product: u.product,
                p_well_i: occ.p_well_i,
                p_well_ii: occ.p_well_ii,
                occupancy: occ.classification,
                total_nodes: nodes.total,
                effective_nodes: nodes.effective,
                s_x: info.s_x,
                s_p: info.s_p,
                s_total: info.s_total,
                i_x: info.i_x,
                i_p: info.i_p,
                i_product: info.i_product,
                e_x: info.e_x,
                e_p: info.e_p,
                e_product: info.e_product,
                os_x: info.os_x,
                os_p: info.os_p,
                os_total: info.os_total,
                barrier_action: phase.barrier_action,
                allowed_action: phase.allowed_action,
                lobe_count: phase.lobe_count,
                converged_flag: spec.is_converged(n),
            })
        })
        .collect()
}
