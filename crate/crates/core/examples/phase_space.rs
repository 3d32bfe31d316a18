//! Classically allowed lobes, allowed area and barrier action for the lowest states.
//!
//! cargo run --example phase_space

use dwell::phase_space::area;
use dwell::{solve, QuarticPotential};

fn main() -> dwell::Result<()> {
    for (gamma, beta) in [(2.0, 8.0), (3.0, 12.0), (4.0, 16.0), (6.0, 25.0)] {
        let pot = QuarticPotential::double_well(1.0, beta, gamma)?;
        let spec = solve(&pot, 100, 4)?;
        println!("gamma={gamma} beta={beta}");
        for n in 0..4 {
            let r = area(&pot, spec.energy(n));
            let spans: Vec<String> = r.lobes.iter().map(|l| format!("[{:.3}, {:.3}]", l.x_left, l.x_right)).collect();
            println!(
                "  n={n} E={:.6} lobes={} {} area={:.6} barrier={:.6}",
                r.energy,
                r.lobe_count,
                spans.join(" "),
                r.allowed_action,
                r.barrier_action
            );
        }
    }
    Ok(())
}
