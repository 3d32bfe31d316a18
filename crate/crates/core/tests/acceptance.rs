//! One line per acceptance criterion. Runs as a plain binary so the report is
//! always printed; exits nonzero if a criterion outside `UNATTAINABLE` fails
//! or if one inside it unexpectedly passes.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;

use dwell::basis::{assemble_momentum, assemble_position};
use dwell::observables::{os_bound, Occupancy, FISHER_BOUND, ONICESCU_BOUND, SHANNON_BOUND};
use dwell::phase_space::area;
use dwell::quadrature::simpson;
use dwell::rules::{
    count_transitions, estimate_delta_gamma, predict_degeneracy, predict_effective_nodes, predict_occupancy,
    validate_rules, AsymmetryIndex, DeltaGammaConfig, RuleOptions, DEFAULT_K_TOL,
};
use dwell::sweep::{run_sweep, to_csv, Cache, SweepConfig};
use dwell::wavefunction::{eval_momentum, eval_position, momentum_grid, state_grid, Grid, DEFAULT_POINTS};
use dwell::{analyze, solve, AnalysisOptions, BasisSpec, QuarticPotential};

/// Criteria that cannot hold as stated; each is explained where it is checked.
const UNATTAINABLE: [usize; 1] = [5];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn dw(alpha: f64, beta: f64, gamma: f64) -> QuarticPotential {
    QuarticPotential::double_well(alpha, beta, gamma).unwrap()
}

fn opts(n_states: usize) -> AnalysisOptions {
    AnalysisOptions { n_states, ..AnalysisOptions::default() }
}

fn benchmark_table() -> Verdict {
    let pot = QuarticPotential::new(0.01, -0.0075, -0.0025, 0.0, 0.0).unwrap();
    let reference = [0.22049693355138318, 0.799076156134041042, 1.5794258727150421868, 2.47522712627695799794];
    let start = Instant::now();
    let spec = solve(&pot, 100, 4).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = (0..4).map(|n| ((spec.energy(n) - reference[n]) / reference[n]).abs()).fold(0.0, f64::max);
    // correct digits per basis size, capped at the round-off level of 13
    let digits: Vec<f64> = [25, 50, 75, 100]
        .iter()
        .map(|&nb| {
            let s = solve(&pot, nb, 4).unwrap();
            let err = (0..4).map(|n| ((s.energy(n) - reference[n]) / reference[n]).abs()).fold(1e-300, f64::max);
            (-err.log10()).min(13.0)
        })
        .collect();
    let monotone = digits.windows(2).all(|w| w[1] >= w[0]) && digits[0] < digits[3];
    verdict(
        worst <= 1e-10 && elapsed < 1.0 && monotone,
        format!(
            "max rel err {worst:.1e}, solve {elapsed:.3}s, digits N=25/50/75/100: {:.1}/{:.1}/{:.1}/{:.1}",
            digits[0], digits[1], digits[2], digits[3]
        ),
    )
}

fn deep_well_spot_checks() -> Verdict {
    let checks = [
        (0.0, 0, 7.7123035268648),
        (0.0, 2, 22.999742809258),
        (4.0, 2, 38.592130067269),
        (4.0, 3, 38.592130067269),
        (8.0, 4, 69.461672176182),
        (8.0, 5, 69.461672176182),
    ];
    let worst = checks
        .iter()
        .map(|&(g, n, e)| (solve(&dw(1.0, 30.0, g), 100, 6).unwrap().energy(n) - e).abs())
        .fold(0.0, f64::max);
    verdict(worst <= 1e-8, format!("6 values, max abs err {worst:.1e} (tol 1e-8)"))
}

fn moderate_barrier_spot_checks() -> Verdict {
    let a = solve(&dw(1.0, 11.0, 2.0), 100, 3).unwrap();
    let e_err = (a.energy(1) - 13.823057196).abs().max((a.energy(2) - 13.823101835).abs());
    let gap_a = a.energy(2) - a.energy(1);
    let b = solve(&dw(1.0, 15.0, 8.0), 100, 6).unwrap();
    let gap_b = b.energy(5) - b.energy(4);
    let c = solve(&dw(1.0, 20.0, 12.0), 100, 8).unwrap();
    let gap_c = c.energy(7) - c.energy(6);
    let pass = e_err <= 1e-9 && (gap_a - 4.46e-5).abs() <= 5e-7 && (gap_b / 2.9e-6 - 1.0).abs() <= 0.1 && gap_c <= 2e-8;
    verdict(
        pass,
        format!("(1,11,2) E1/E2 err {e_err:.1e}, gap {gap_a:.3e}; (1,15,8) gap45 {gap_b:.3e}; (1,20,12) gap67 {gap_c:.1e}"),
    )
}

fn splitting_table() -> Verdict {
    let gap = |beta: f64, j: usize| {
        let s = solve(&dw(1.0, beta, 2.0 * j as f64), 100, j + 2).unwrap();
        (s.energy(j + 1) - s.energy(j)).abs()
    };
    let (g5, g10, g15) = (gap(5.0, 1), gap(10.0, 1), gap(15.0, 1));
    let deep = [20.0, 25.0, 30.0]
        .iter()
        .flat_map(|&b| (1..=4).map(move |j| gap(b, j)))
        .fold(0.0, f64::max);
    let pass = (g5 - 0.728).abs() <= 1e-3
        && (g10 / 3.5e-4 - 1.0).abs() <= 0.1
        && g15 > 3.3e-9 / 3.0
        && g15 < 3.3e-9 * 3.0
        && deep < 1e-9;
    verdict(pass, format!("beta=5 {g5:.4}, beta=10 {g10:.3e}, beta=15 {g15:.2e}, beta>=20 max {deep:.1e}"))
}

fn bound_suite() -> Verdict {
    // E_x E_p >= 1/(2 pi) and OS >= (1/2) pi^(-1/3) e^(2/3) hold with equality for
    // a Gaussian but are not bounds: the harmonic n = 1 state has E_x E_p = 9/(32 pi)
    let start = Instant::now();
    let mut min = [f64::INFINITY; 5];
    let mut e_viol = 0;
    let mut os_viol = 0;
    let mut total = 0;
    for beta in [5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
        for gamma in 0..=7 {
            for r in analyze(&dw(1.0, beta, gamma as f64), &opts(7)).unwrap() {
                total += 1;
                let v = [r.uncertainty_product, r.s_total, r.i_product, r.e_product, r.os_total];
                for (m, x) in min.iter_mut().zip(v) {
                    *m = m.min(x);
                }
                e_viol += (r.e_product < ONICESCU_BOUND - 1e-6) as usize;
                os_viol += (r.os_total < os_bound() - 1e-6) as usize;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let holding = min[0] >= 0.5 - 1e-9 && min[1] >= SHANNON_BOUND - 1e-6 && min[2] >= FISHER_BOUND - 1e-6;
    let pass = holding && e_viol == 0 && os_viol == 0 && elapsed < 60.0;
    verdict(
        pass,
        format!(
            "{total} states in {elapsed:.1}s (1 core); min dxdp {:.6}, S {:.6} (>= {:.6}), I {:.4}: {}; \
             min ExEp {:.4} < {:.4} in {e_viol} states, min OS {:.4} < {:.4} in {os_viol} states: \
             Onicescu and Onicescu-Shannon inequalities are false for excited states",
            min[0],
            min[1],
            SHANNON_BOUND,
            min[2],
            if holding { "hold" } else { "VIOLATED" },
            min[3],
            ONICESCU_BOUND,
            min[4],
            os_bound()
        ),
    )
}

fn symmetry_suite() -> Verdict {
    let mut p_err: f64 = 0.0;
    let mut x_err: f64 = 0.0;
    for beta in [10.0, 20.0, 30.0] {
        for r in analyze(&dw(1.0, beta, 0.0), &opts(6)).unwrap() {
            p_err = p_err.max((r.p_well_i - 0.5).abs());
            x_err = x_err.max(r.mean_x.abs());
        }
    }
    let mut e_err: f64 = 0.0;
    let mut m_err: f64 = 0.0;
    for (beta, gamma) in [(10.0, 1.5), (20.0, 3.0), (30.0, 7.0)] {
        let a = analyze(&dw(1.0, beta, gamma), &opts(6)).unwrap();
        let b = analyze(&dw(1.0, beta, gamma).mirror(), &opts(6)).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            e_err = e_err.max(((ra.energy - rb.energy) / ra.energy).abs());
            m_err = m_err.max((ra.mean_x + rb.mean_x).abs());
        }
    }
    verdict(
        p_err <= 1e-6 && x_err <= 1e-10 && e_err <= 1e-10 && m_err <= 1e-10,
        format!("|p_I - 1/2| {p_err:.1e}, |<x>| {x_err:.1e}; mirror energies {e_err:.1e} rel, <x> sum {m_err:.1e}"),
    )
}

fn representation_equivalence() -> Verdict {
    let pot = dw(1.0, 20.0, 3.0);
    let basis = BasisSpec::optimized(&pot, 100).unwrap();
    let eh = assemble_position(&pot, &basis).eigenvalues();
    let eg = assemble_momentum(&pot, &basis).eigenvalues();
    let iso = (0..30).map(|n| ((eh[n] - eg[n]) / eh[n]).abs()).fold(0.0, f64::max);

    let spec = solve(&pot, 100, 4).unwrap();
    let gx = state_grid(&spec, 3, 8193).unwrap();
    let xs = gx.coords();
    let probe = Grid { x0: -8.0, dx: 0.2, points: 81 };
    let mut fourier: f64 = 0.0;
    for n in 0..4 {
        let psi = eval_position(&spec, n, &gx).unwrap();
        let psi_p = eval_momentum(&spec, n, &probe).unwrap();
        for (j, p) in probe.coords().into_iter().enumerate() {
            let re: Vec<f64> = xs.iter().zip(&psi.values).map(|(x, v)| v * (p * x).cos()).collect();
            let im: Vec<f64> = xs.iter().zip(&psi.values).map(|(x, v)| -v * (p * x).sin()).collect();
            let direct = Complex64::new(simpson(&re, gx.dx), simpson(&im, gx.dx)) / (2.0 * std::f64::consts::PI).sqrt();
            fourier = fourier.max((direct - psi_p.values[j]).norm());
        }
    }

    let mut parseval: f64 = 0.0;
    for (beta, gamma) in [(5.0, 2.0), (20.0, 3.0), (30.0, 0.0)] {
        let spec = solve(&dw(1.0, beta, gamma), 100, 7).unwrap();
        let gp = momentum_grid(&spec, 6, DEFAULT_POINTS).unwrap();
        for n in 0..7 {
            parseval = parseval.max((eval_momentum(&spec, n, &gp).unwrap().norm_sqr() - 1.0).abs());
        }
    }
    verdict(
        iso <= 1e-10 && fourier <= 1e-7 && parseval <= 1e-6,
        format!("eigenvalues {iso:.1e} rel, Fourier quadrature {fourier:.1e}, Parseval {parseval:.1e}"),
    )
}

fn scaling_invariance() -> Verdict {
    let lambda: f64 = 1.3;
    let mut s_err: f64 = 0.0;
    let mut sx_err: f64 = 0.0;
    for (beta, gamma) in [(10.0, 1.0), (20.0, 3.0), (30.0, 5.0)] {
        let pot = dw(1.0, beta, gamma);
        let a = analyze(&pot, &opts(4)).unwrap();
        let b = analyze(&pot.scaled(lambda), &opts(4)).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            s_err = s_err.max((ra.s_total - rb.s_total).abs());
            sx_err = sx_err.max((rb.s_x - (ra.s_x - lambda.ln())).abs());
        }
    }
    verdict(s_err <= 1e-6 && sx_err <= 1e-6, format!("S_total {s_err:.1e}, S_x shift {sx_err:.1e}"))
}

fn rules_engine() -> Verdict {
    use Occupancy::{WellI as I, WellII as II};
    let table: [(f64, [(Occupancy, usize); 6]); 4] = [
        (0.5, [(I, 0), (II, 0), (I, 1), (II, 1), (I, 2), (II, 2)]),
        (1.5, [(I, 0), (I, 1), (II, 0), (I, 2), (II, 1), (I, 3)]),
        (2.5, [(I, 0), (I, 1), (I, 2), (II, 0), (I, 3), (II, 1)]),
        (3.5, [(I, 0), (I, 1), (I, 2), (I, 3), (II, 0), (I, 4)]),
    ];
    let mut cells = 0;
    let mut agree = 0;
    for (k, rows) in table {
        let idx = AsymmetryIndex::from_k(k, DEFAULT_K_TOL, 2.0);
        for (n, (well, nodes)) in rows.iter().enumerate() {
            cells += 2;
            agree += (predict_occupancy(&idx, n) == *well) as usize + (predict_effective_nodes(&idx, n) == *nodes) as usize;
        }
        agree += predict_degeneracy(&idx, 5).pairs.is_empty() as usize;
        cells += 1;
    }
    let ro = RuleOptions::default();
    let occ = validate_rules(1.0, 20.0, &[1.0, 3.0, 5.0, 7.0], 2.0, 6, &ro).unwrap().occupancy_score();
    let pairs = validate_rules(1.0, 30.0, &[0.0, 2.0, 4.0, 6.0, 8.0], 2.0, 11, &ro).unwrap().pair_score();
    verdict(
        agree == cells && occ.0 == occ.1 && occ.1 == 24 && pairs.0 == pairs.1 && pairs.1 == 5,
        format!("truth table {agree}/{cells}, occupancy beta=20 {}/{}, pair lists beta=30 {}/{}", occ.0, occ.1, pairs.0, pairs.1),
    )
}

fn delta_gamma() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, expected) in [(0.5, 1.4), (1.0, 2.0), (2.0, 2.85)] {
        let est = estimate_delta_gamma(alpha, &DeltaGammaConfig::default()).unwrap();
        ok &= (est.delta_gamma - expected).abs() <= 0.05;
        parts.push(format!("alpha={alpha}: {:.3}", est.delta_gamma));
    }
    let mut jumps = Vec::new();
    for n in 0..=3usize {
        let gammas: Vec<f64> = (0..=100 * (n + 1)).map(|i| 0.02 * i as f64).collect();
        let t = count_transitions(1.0, 20.0, n, &gammas, &RuleOptions::default()).unwrap();
        ok &= t == n + 1;
        jumps.push(t.to_string());
    }
    verdict(ok, format!("{}; transitions n=0..3: {}", parts.join(", "), jumps.join(",")))
}

fn phase_space() -> Verdict {
    let cases: [((f64, f64), [usize; 4]); 4] = [
        ((2.0, 8.0), [1, 2, 2, 2]),
        ((3.0, 12.0), [1, 1, 2, 2]),
        ((4.0, 16.0), [1, 1, 2, 2]),
        ((6.0, 25.0), [1, 1, 1, 2]),
    ];
    let mut matched = 0;
    for ((gamma, beta), counts) in cases {
        let pot = dw(1.0, beta, gamma);
        let spec = solve(&pot, 100, 4).unwrap();
        matched += (0..4).filter(|&n| area(&pot, spec.energy(n)).lobe_count == counts[n]).count();
    }
    let pot = dw(1.0, 16.0, 4.0);
    let spec = solve(&pot, 100, 4).unwrap();
    let gap = spec.energy(3) - spec.energy(2);
    let (a, b) = (area(&pot, spec.energy(2)), area(&pot, spec.energy(3)));
    let merge = ((a.allowed_action - b.allowed_action) / a.allowed_action)
        .abs()
        .max(((a.barrier_action - b.barrier_action) / a.barrier_action).abs());
    verdict(
        matched == 16 && gap < 1e-8 && merge <= 1e-3,
        format!("lobe counts {matched}/16; pair (2,3) at beta=16, gamma=4: gap {gap:.1e}, areas differ {merge:.1e} rel"),
    )
}

fn determinism_and_cache() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let config = |cache: Option<Cache>| SweepConfig {
        alpha: 1.0,
        betas: vec![10.0, 20.0],
        gammas: (0..8).map(|i| 0.5 * i as f64).collect(),
        analysis: opts(4),
        workers: 0,
        cache,
    };
    let cached = config(Some(Cache::new(dir.path()).unwrap()));
    let start = Instant::now();
    let first = to_csv(&run_sweep(&cached).unwrap().records);
    let cold = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let second = run_sweep(&cached).unwrap();
    let warm = start.elapsed().as_secs_f64();
    let uncached = to_csv(&run_sweep(&config(None)).unwrap().records);
    let same = first == to_csv(&second.records) && first == uncached;
    verdict(
        same && second.cache_hits == 16 && cold >= 10.0 * warm,
        format!("byte-identical {same}, rerun {} hits, {cold:.3}s vs {warm:.4}s ({:.0}x)", second.cache_hits, cold / warm),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("benchmark spectrum and convergence", benchmark_table),
        ("deep-well spot checks", deep_well_spot_checks),
        ("moderate-barrier spot checks", moderate_barrier_spot_checks),
        ("pair splittings versus barrier", splitting_table),
        ("uncertainty and information bounds", bound_suite),
        ("symmetry and mirror", symmetry_suite),
        ("position/momentum equivalence", representation_equivalence),
        ("entropy scaling invariance", scaling_invariance),
        ("rules engine", rules_engine),
        ("delta-gamma and transitions", delta_gamma),
        ("phase-space lobes and merging", phase_space),
        ("determinism and cache", determinism_and_cache),
    ];
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        let v = check();
        let known = UNATTAINABLE.contains(&id);
        println!("criterion {id:>2}: {} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        passed += v.pass as usize;
        if v.pass == known {
            unexpected.push(id);
        }
    }
    println!("{passed}/12 criteria pass; known unattainable: {UNATTAINABLE:?}");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
