//! A (beta, gamma) sweep written as CSV, run twice against an on-disk cache.
//!
//! cargo run --release --example sweep_cache

use std::time::Instant;

use dwell::sweep::{run_sweep, to_csv, Cache, SweepConfig};
use dwell::AnalysisOptions;

fn main() -> dwell::Result<()> {
    let dir = std::env::temp_dir().join("dwell-example-cache");
    let _ = std::fs::remove_dir_all(&dir);
    let config = SweepConfig {
        alpha: 1.0,
        betas: vec![10.0, 20.0],
        gammas: (0..=8).map(|i| 0.5 * i as f64).collect(),
        analysis: AnalysisOptions { n_states: 4, ..AnalysisOptions::default() },
        workers: 0,
        cache: Some(Cache::new(&dir)?),
    };
    for run in 1..=2 {
        let start = Instant::now();
        let outcome = run_sweep(&config)?;
        println!(
            "run {run}: {} points, {} cached, {} computed in {:.3}s",
            outcome.points(),
            outcome.cache_hits,
            outcome.computed,
            start.elapsed().as_secs_f64()
        );
        if run == 2 {
            let csv = to_csv(&outcome.records);
            for line in csv.lines().take(4) {
                println!("{line}");
            }
        }
    }
    println!("cache: {}", dir.display());
    Ok(())
}
