//! Uncertainty products and Shannon, Fisher, Onicescu and Onicescu-Shannon measures per state.
//!
//! The Onicescu constants are the Gaussian values; excited states fall below them.
//!
//! cargo run --example information_measures

use dwell::observables::{os_bound, FISHER_BOUND, ONICESCU_BOUND, SHANNON_BOUND};
use dwell::{analyze, AnalysisOptions, QuarticPotential};

fn main() -> dwell::Result<()> {
    println!("reference values: S {SHANNON_BOUND:.6}  I {FISHER_BOUND}  E {ONICESCU_BOUND:.6}  OS {:.6}", os_bound());
    for (beta, gamma) in [(10.0, 0.0), (20.0, 3.0)] {
        let pot = QuarticPotential::double_well(1.0, beta, gamma)?;
        let opts = AnalysisOptions { n_states: 5, ..AnalysisOptions::default() };
        println!("beta={beta} gamma={gamma}");
        println!(" n   dx*dp     S_x       S_p       S         I_x*I_p    E_x*E_p   OS");
        for (n, r) in analyze(&pot, &opts)?.iter().enumerate() {
            println!(
                "{n:>2}  {:.6}  {:>8.5}  {:>8.5}  {:.6}  {:>9.4}  {:.6}  {:.6}",
                r.uncertainty_product, r.s_x, r.s_p, r.s_total, r.i_product, r.e_product, r.os_total
            );
        }
    }
    Ok(())
}
