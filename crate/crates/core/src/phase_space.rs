//! Semiclassical phase-space quantities at a fixed energy.

use serde::{Deserialize, Serialize};

use crate::potential::{turning_points, QuarticPotential};
use crate::quadrature::gauss_legendre;

/// Default Gauss–Legendre order per interval.
pub const DEFAULT_NODES: usize = 64;
/// Samples per exported lobe contour.
pub const LOBE_SAMPLES: usize = 512;

/// One classically allowed interval and its upper contour `p(x) = sqrt(E - V(x))`.
/// The lower half of the closed curve is `-p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lobe {
    pub x_left: f64,
    pub x_right: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    /// Enclosed area `2 int sqrt(E - V) dx`.
    pub area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceResult {
    pub energy: f64,
    /// `int sqrt(V - E) dx` over the forbidden stretch between the outermost turning points.
    pub barrier_action: f64,
    /// Total phase-space area of the allowed region, `2 int sqrt(E - V) dx`.
    pub allowed_action: f64,
    pub lobes: Vec<Lobe>,
    pub lobe_count: usize,
}

/// `int_a^b f(x) dx` with `x = m - h cos(theta)`, which turns the square-root
/// endpoint behavior of `sqrt|V - E|` into a smooth periodic integrand.
fn endpoint_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let half_pi = 0.5 * std::f64::consts::PI;
    nodes
        .iter()
        .zip(weights)
        .map(|(t, w)| {
            let theta = half_pi * (t + 1.0);
            w * f(m - h * theta.cos()) * h * theta.sin()
        })
        .sum::<f64>()
        * half_pi
}

/// Barrier and allowed actions plus the lobe contours at energy `energy`.
pub fn area(pot: &QuarticPotential, energy: f64) -> PhaseSpaceResult {
    area_with_nodes(pot, energy, DEFAULT_NODES)
}

pub fn area_with_nodes(pot: &QuarticPotential, energy: f64, nodes: usize) -> PhaseSpaceResult {
    let (t, w) = gauss_legendre(nodes);
    let roots = turning_points(pot, energy);
    let allowed = |x: f64| (energy - pot.value(x)).max(0.0).sqrt();
    let forbidden = |x: f64| (pot.value(x) - energy).max(0.0).sqrt();

    let mut lobes = Vec::new();
    let mut barrier_action = 0.0;
    for (i, pair) in roots.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        if i % 2 == 0 {
            let area = 2.0 * endpoint_integral(allowed, a, b, &t, &w);
            let x: Vec<f64> = (0..LOBE_SAMPLES)
                .map(|j| a + (b - a) * j as f64 / (LOBE_SAMPLES - 1) as f64)
                .collect();
            let p = x.iter().map(|&x| allowed(x)).collect();
            lobes.push(Lobe { x_left: a, x_right: b, x, p, area });
        } else {
            barrier_action += endpoint_integral(forbidden, a, b, &t, &w);
        }
    }
    let allowed_action = lobes.iter().map(|l| l.area).sum();
    PhaseSpaceResult { energy, barrier_action, allowed_action, lobe_count: lobes.len(), lobes }
}

/// Lobes alone.
pub fn lobe_structure(pot: &QuarticPotential, energy: f64) -> Vec<Lobe> {
    area(pot, energy).lobes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_ellipse() {
        // V = 4 x^2; at E the ellipse has semi-axes sqrt(E)/2 and sqrt(E)
        let pot = QuarticPotential::new(1e-12, 0.0, 4.0, 0.0, 0.0).unwrap();
        let r = area(&pot, 6.0);
        assert_eq!(r.lobe_count, 1);
        assert_relative_eq!(r.allowed_action, std::f64::consts::PI * 6.0 / 2.0, max_relative = 1e-9);
        assert_eq!(r.barrier_action, 0.0);
    }

    #[test]
    fn lobe_counts_follow_energy() {
        let sym = QuarticPotential::from_params(1.0, 10.0, 0.0, 0.0).unwrap();
        let above = area(&sym, 5.0);
        assert_eq!((above.lobe_count, above.barrier_action), (1, 0.0));
        let below = area(&sym, -5.0);
        assert_eq!(below.lobe_count, 2);
        assert!(below.barrier_action > 0.0);
        let tilted = QuarticPotential::from_params(1.0, 10.0, 3.0, 0.0).unwrap();
        assert_eq!(area(&tilted, -15.0).lobe_count, 2);
        assert_eq!(area(&sym, -30.0).lobe_count, 0);
    }

    #[test]
    fn quadrature_is_converged() {
        let pot = QuarticPotential::from_params(1.0, 10.0, 3.0, 0.0).unwrap();
        for e in [-20.0, -5.0, 10.0] {
            let a = area_with_nodes(&pot, e, 64);
            let b = area_with_nodes(&pot, e, 128);
            assert_relative_eq!(a.allowed_action, b.allowed_action, max_relative = 1e-8);
            assert_relative_eq!(a.barrier_action, b.barrier_action, max_relative = 1e-8, epsilon = 1e-300);
        }
    }
}
