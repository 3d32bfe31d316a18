//! Empirical Δγ, the rule predictions it implies, and their agreement with computed states.
//!
//! cargo run --release --example rules

use dwell::rules::{
    estimate_delta_gamma, predict_degeneracy, predict_effective_nodes, predict_occupancy, validate_rules,
    AsymmetryIndex, DeltaGammaConfig, RuleOptions,
};

fn main() -> dwell::Result<()> {
    for alpha in [0.5, 1.0, 2.0] {
        let est = estimate_delta_gamma(alpha, &DeltaGammaConfig::default())?;
        println!("alpha={alpha}: delta_gamma = {:.4} +/- {:.1e} (beta {})", est.delta_gamma, est.uncertainty, est.beta);
    }

    for k in [0.5, 1.0, 1.5, 2.5] {
        let idx = AsymmetryIndex::new(2.0 * k, 2.0);
        let wells: Vec<String> =
            (0..6).map(|n| format!("{}/{}", predict_occupancy(&idx, n), predict_effective_nodes(&idx, n))).collect();
        println!("k={k}: well/nodes {}  pairs {:?}", wells.join(" "), predict_degeneracy(&idx, 7).pairs);
    }

    let report = validate_rules(1.0, 20.0, &[1.0, 3.0, 5.0, 7.0], 2.0, 6, &RuleOptions::default())?;
    let (agree, total) = report.occupancy_score();
    println!("beta=20: occupancy agreement {agree}/{total}");
    for p in &report.points {
        println!("  gamma={} measured p(I) {:?}", p.gamma, p.p_well_i.iter().map(|v| (v * 1e3).round() / 1e3).collect::<Vec<_>>());
    }
    Ok(())
}
