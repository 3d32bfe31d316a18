use approx::assert_relative_eq;

use dwell::phase_space::{area, area_with_nodes, lobe_structure, LOBE_SAMPLES};
use dwell::{critical_points, solve, QuarticPotential};

#[test]
fn harmonic_ellipse_area() {
    // -d2/dx2 + c x^2 at E: semi-axes sqrt(E / c) and sqrt(E), area pi E / sqrt(c)
    for c in [0.25, 1.0, 9.0] {
        let pot = QuarticPotential::new(1e-14, 0.0, c, 0.0, 0.0).unwrap();
        let e = solve(&pot, 60, 1).unwrap().energy(0);
        assert_relative_eq!(e, c.sqrt(), max_relative = 1e-9);
        let r = area(&pot, e);
        assert_eq!(r.lobe_count, 1);
        assert_relative_eq!(r.allowed_action, std::f64::consts::PI * e / c.sqrt(), max_relative = 1e-9);
        assert_eq!(r.barrier_action, 0.0);
    }
}

#[test]
fn lobe_counts_of_lowest_states() {
    let cases: [((f64, f64), [usize; 4]); 4] = [
        ((2.0, 8.0), [1, 2, 2, 2]),
        ((3.0, 12.0), [1, 1, 2, 2]),
        ((4.0, 16.0), [1, 1, 2, 2]),
        ((6.0, 25.0), [1, 1, 1, 2]),
    ];
    for ((gamma, beta), counts) in cases {
        let pot = QuarticPotential::double_well(1.0, beta, gamma).unwrap();
        let spec = solve(&pot, 100, 4).unwrap();
        for (n, expected) in counts.iter().enumerate() {
            assert_eq!(area(&pot, spec.energy(n)).lobe_count, *expected, "gamma={gamma} beta={beta} n={n}");
        }
    }
}

#[test]
fn ground_state_lobe_sits_in_deeper_well() {
    let pot = QuarticPotential::double_well(1.0, 8.0, 2.0).unwrap();
    let spec = solve(&pot, 100, 1).unwrap();
    let lobes = lobe_structure(&pot, spec.energy(0));
    let barrier = critical_points(&pot).barrier.unwrap().x;
    assert_eq!(lobes.len(), 1);
    assert!(lobes[0].x_right < barrier);
    assert_eq!((lobes[0].x.len(), lobes[0].p.len()), (LOBE_SAMPLES, LOBE_SAMPLES));
    assert!(lobes[0].p.iter().all(|p| *p >= 0.0));
    assert!(lobes[0].p[0].abs() < 1e-6 && lobes[0].p[LOBE_SAMPLES - 1].abs() < 1e-6);
}

#[test]
fn tilted_well_below_barrier_has_two_lobes() {
    let pot = QuarticPotential::from_params(1.0, 10.0, 3.0, 0.0).unwrap();
    let barrier = critical_points(&pot).barrier.unwrap().value;
    let r = area(&pot, barrier - 2.0);
    assert_eq!(r.lobe_count, 2);
    assert!(r.barrier_action > 0.0);
    let above = area(&pot, barrier + 2.0);
    assert_eq!((above.lobe_count, above.barrier_action), (1, 0.0));
}

#[test]
fn doubling_nodes_changes_little() {
    let pot = QuarticPotential::double_well(1.0, 16.0, 4.0).unwrap();
    let spec = solve(&pot, 100, 8).unwrap();
    for n in 0..8 {
        let e = spec.energy(n);
        let a = area_with_nodes(&pot, e, 64);
        let b = area_with_nodes(&pot, e, 128);
        assert_relative_eq!(a.allowed_action, b.allowed_action, max_relative = 1e-8);
        assert_relative_eq!(a.barrier_action, b.barrier_action, max_relative = 1e-8);
    }
}

#[test]
fn mirror_preserves_lobes_and_actions() {
    let pot = QuarticPotential::double_well(1.0, 12.0, 3.0).unwrap();
    let spec = solve(&pot, 100, 6).unwrap();
    for n in 0..6 {
        let a = area(&pot, spec.energy(n));
        let b = area(&pot.mirror(), spec.energy(n));
        assert_eq!(a.lobe_count, b.lobe_count);
        assert_relative_eq!(a.allowed_action, b.allowed_action, max_relative = 1e-10);
        assert_relative_eq!(a.barrier_action, b.barrier_action, max_relative = 1e-10, epsilon = 1e-300);
    }
}

#[test]
fn paired_states_share_phase_space_area() {
    // k = 2: pairs (2, 3), (4, 5), ...
    let pot = QuarticPotential::double_well(1.0, 16.0, 4.0).unwrap();
    let spec = solve(&pot, 100, 6).unwrap();
    let gap = spec.energy(3) - spec.energy(2);
    assert!(gap < 1e-8, "{gap:e}");
    let (a, b) = (area(&pot, spec.energy(2)), area(&pot, spec.energy(3)));
    assert_relative_eq!(a.allowed_action, b.allowed_action, max_relative = 1e-3);
    assert_relative_eq!(a.barrier_action, b.barrier_action, max_relative = 1e-3);
    // an unpaired neighbor is far away
    let c = area(&pot, spec.energy(1));
    assert!((c.allowed_action - a.allowed_action).abs() > 0.1 * a.allowed_action);
}
