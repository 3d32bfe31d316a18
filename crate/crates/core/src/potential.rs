//! Quartic polynomial potentials and their geometry.
//!
//! A [`QuarticPotential`] stores `V(x) = c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0`
//! with `c4 > 0`. The asymmetric double well `alpha x^4 - beta x^2 + gamma x + V0`
//! is the special case `c3 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of a confining quartic polynomial, highest degree first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticPotential {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WellSide {
    Left,
    Right,
    Symmetric,
}

/// A stationary point `(x, V(x))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

/// Minima (one or two) and, for a double well, the barrier between them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellGeometry {
    pub minima: Vec<Extremum>,
    pub barrier: Option<Extremum>,
    pub deeper_well_side: WellSide,
}

impl WellGeometry {
    pub fn is_double_well(&self) -> bool {
        self.barrier.is_some()
    }

    /// Lowest value of the potential.
    pub fn global_minimum(&self) -> Extremum {
        *self
            .minima
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("a confining quartic always has a minimum")
    }

    /// The deeper well (well I). For a symmetric double well the left minimum is returned.
    pub fn deeper_minimum(&self) -> Extremum {
        match self.deeper_well_side {
            WellSide::Right => *self.minima.last().unwrap(),
            _ => self.minima[0],
        }
    }
}

impl QuarticPotential {
    pub fn new(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Result<Self> {
        if !(c4 > 0.0) || !c4.is_finite() {
            return Err(Error::NonConfining(c4));
        }
        Ok(Self { c4, c3, c2, c1, c0 })
    }

    /// `alpha x^4 - beta x^2 + gamma x + v0`.
    pub fn from_params(alpha: f64, beta: f64, gamma: f64, v0: f64) -> Result<Self> {
        Self::new(alpha, 0.0, -beta, gamma, v0)
    }

    /// `alpha x^4 - beta x^2 + gamma x + V0` with `V0` chosen so that the global
    /// minimum of the potential is exactly zero. This is the energy origin used
    /// for all tabulated double-well spectra.
    pub fn double_well(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let bare = Self::from_params(alpha, beta, gamma, 0.0)?;
        let v_min = critical_points(&bare).global_minimum().value;
        Ok(bare.shifted(-v_min))
    }

    /// Adds a constant to the potential.
    pub fn shifted(&self, offset: f64) -> Self {
        Self { c0: self.c0 + offset, ..*self }
    }

    pub fn alpha(&self) -> f64 {
        self.c4
    }

    pub fn beta(&self) -> f64 {
        -self.c2
    }

    pub fn gamma(&self) -> f64 {
        self.c1
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    pub fn value(&self, x: f64) -> f64 {
        (((self.c4 * x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        ((4.0 * self.c4 * x + 3.0 * self.c3) * x + 2.0 * self.c2) * x + self.c1
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        (12.0 * self.c4 * x + 6.0 * self.c3) * x + 2.0 * self.c2
    }

    /// Parity-even potential (no odd powers).
    pub fn is_even(&self) -> bool {
        self.c3 == 0.0 && self.c1 == 0.0
    }

    /// Reflection `x -> -x`.
    pub fn mirror(&self) -> Self {
        Self { c3: -self.c3, c1: -self.c1, ..*self }
    }

    /// `lambda^2 V(lambda y)`: the potential seen in the compressed coordinate
    /// `y = x / lambda`, with energies measured in units scaled by `lambda^2`.
    /// Coefficient `c_k` becomes `lambda^(k + 2) c_k`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        Self {
            c4: self.c4 * l2 * l2 * l2,
            c3: self.c3 * l2 * l2 * lambda,
            c2: self.c2 * l2 * l2,
            c1: self.c1 * l2 * lambda,
            c0: self.c0 * l2,
        }
    }
}

/// Stationary points of `V`, classified into minima and barrier.
///
/// A double root of `V'` (two stationary points merging into an inflection) is
/// treated as a single well.
pub fn critical_points(pot: &QuarticPotential) -> WellGeometry {
    let roots = stationary_points(pot);
    let extremum = |x: f64| Extremum { x, value: pot.value(x) };

    if roots.len() == 3 {
        let (lo, mid, hi) = (roots[0], roots[1], roots[2]);
        let (a, b) = (extremum(lo), extremum(hi));
        let scale = 1.0 + a.value.abs();
        let side = if (a.value - b.value).abs() <= 1e-12 * scale {
            WellSide::Symmetric
        } else if a.value < b.value {
            WellSide::Left
        } else {
            WellSide::Right
        };
        return WellGeometry {
            minima: vec![a, b],
            barrier: Some(extremum(mid)),
            deeper_well_side: side,
        };
    }

    // Single well: the only real root of V' that is a minimum.
    let x = roots
        .iter()
        .copied()
        .min_by(|a, b| pot.value(*a).total_cmp(&pot.value(*b)))
        .expect("a cubic with positive leading coefficient has a real root");
    WellGeometry {
        minima: vec![extremum(x)],
        barrier: None,
        deeper_well_side: WellSide::Symmetric,
    }
}

/// Distinct simple real roots of `V'`, ascending. Returns one root when the
/// cubic has a single real root or a double root.
fn stationary_points(pot: &QuarticPotential) -> Vec<f64> {
    let a = 4.0 * pot.c4;
    let b = 3.0 * pot.c3;
    let c = 2.0 * pot.c2;
    let d = pot.c1;
    let mut roots = cubic_real_roots(a, b, c, d);
    for r in roots.iter_mut() {
        *r = newton_polish(|x| pot.derivative(x), |x| pot.second_derivative(x), *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots of `a x^3 + b x^2 + c x + d` with `a != 0`.
///
/// Three roots are returned only when the discriminant is clearly positive;
/// a (numerically) double root collapses to the single remaining simple root.
pub(crate) fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let b = b / a;
    let c = c / a;
    let d = d / a;
    // x = t - b/3  =>  t^3 + p t + q = 0
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let scale = 4.0 * p.abs().powi(3) + 27.0 * q * q;

    if p < 0.0 && disc > 1e-12 * scale {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    } else if disc.abs() <= 1e-12 * scale && scale > 0.0 {
        // Double root at t = -3q/(2p), simple root at t = 3q/p. Keep the simple one.
        vec![3.0 * q / p - shift]
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    }
}

fn newton_polish(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64) -> f64 {
    for _ in 0..4 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = f(x) / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Real solutions of `V(x) = energy`, ascending and counted with multiplicity
/// (a tangency contributes the touching point twice).
pub fn turning_points(pot: &QuarticPotential, energy: f64) -> Vec<f64> {
    let crit = stationary_points(pot);
    let g = |x: f64| pot.value(x) - energy;
    let tol = 1e-12 * (1.0 + energy.abs());

    let vals: Vec<f64> = crit.iter().map(|&x| g(x)).collect();
    let mut roots = Vec::new();

    // Endpoints of monotone pieces, with +inf at both ends.
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(crit.len() + 2);
    knots.push((f64::NEG_INFINITY, f64::INFINITY));
    for (&x, &v) in crit.iter().zip(&vals) {
        knots.push((x, v));
    }
    knots.push((f64::INFINITY, f64::INFINITY));

    for w in knots.windows(2) {
        let (x0, f0) = w[0];
        let (x1, f1) = w[1];
        if f0.abs() <= tol || f1.abs() <= tol {
            continue;
        }
        if (f0 > 0.0) == (f1 > 0.0) {
            continue;
        }
        let (lo, hi) = finite_bracket(&g, x0, x1, crit.first().copied().unwrap_or(0.0));
        roots.push(bracketed_root(&g, &|x| pot.derivative(x), lo, hi));
    }
    for (&x, &v) in crit.iter().zip(&vals) {
        if v.abs() <= tol {
            roots.push(x);
            roots.push(x);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Replaces infinite ends of a monotone interval with finite points that keep
/// the sign change.
fn finite_bracket(g: &impl Fn(f64) -> f64, x0: f64, x1: f64, anchor: f64) -> (f64, f64) {
    let mut lo = x0;
    let mut hi = x1;
    if lo.is_infinite() {
        let base = if hi.is_finite() { hi } else { anchor };
        let mut step = 1.0;
        lo = base - step;
        while g(lo) <= 0.0 {
            step *= 2.0;
            lo = base - step;
        }
    }
    if hi.is_infinite() {
        let base = if x0.is_finite() { x0 } else { anchor };
        let mut step = 1.0;
        hi = base + step;
        while g(hi) <= 0.0 {
            step *= 2.0;
            hi = base + step;
        }
    }
    (lo, hi)
}

/// Safeguarded Newton iteration on a bracket with a sign change.
pub(crate) fn bracketed_root(
    g: &impl Fn(f64) -> f64,
    dg: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    let mut flo = g(lo);
    if flo == 0.0 {
        return lo;
    }
    if g(hi) == 0.0 {
        return hi;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = g(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = dg(x);
        let step = fx / d;
        if d != 0.0 && step.abs() <= 1e-15 * (1.0 + x.abs()) {
            return x - step;
        }
        let newton = x - step;
        x = if d != 0.0 && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scan_sign_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let h = (hi - lo) / n as f64;
        let mut out = Vec::new();
        let mut prev = f(lo);
        for i in 1..=n {
            let x = lo + h * i as f64;
            let cur = f(x);
            if (prev > 0.0) != (cur > 0.0) {
                // bisect the cell
                let (mut a, mut b) = (x - h, x);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if (f(m) > 0.0) == (f(a) > 0.0) {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                out.push(0.5 * (a + b));
            }
            prev = cur;
        }
        out
    }

    #[test]
    fn symmetric_double_well_geometry() {
        let pot = QuarticPotential::from_params(1.0, 10.0, 0.0, 0.0).unwrap();
        let geo = critical_points(&pot);
        assert_eq!(geo.minima.len(), 2);
        let s5 = 5f64.sqrt();
        assert_relative_eq!(geo.minima[0].x, -s5, max_relative = 1e-14);
        assert_relative_eq!(geo.minima[1].x, s5, max_relative = 1e-14);
        assert_relative_eq!(geo.minima[0].value, -25.0, max_relative = 1e-14);
        let barrier = geo.barrier.unwrap();
        assert!(barrier.x.abs() < 1e-14);
        assert!(barrier.value.abs() < 1e-14);
        assert_eq!(geo.deeper_well_side, WellSide::Symmetric);
    }

    #[test]
    fn asymmetric_double_well_matches_scan() {
        let pot = QuarticPotential::from_params(1.0, 10.0, 3.0, 0.0).unwrap();
        let geo = critical_points(&pot);
        let scan = scan_sign_changes(|x| pot.derivative(x), -10.0, 10.0, 20_000);
        assert_eq!(scan.len(), 3);
        assert_relative_eq!(geo.minima[0].x, scan[0], epsilon = 1e-12);
        assert_relative_eq!(geo.barrier.unwrap().x, scan[1], epsilon = 1e-12);
        assert_relative_eq!(geo.minima[1].x, scan[2], epsilon = 1e-12);
        assert_eq!(geo.deeper_well_side, WellSide::Left);
        assert!(geo.barrier.unwrap().x > 0.0);
        // frozen from the scan oracle
        assert_relative_eq!(geo.barrier.unwrap().x, 0.150_684_279_985_403, epsilon = 1e-12);
    }

    #[test]
    fn strongly_tilted_is_single_well() {
        let pot = QuarticPotential::from_params(1.0, 1.0, 10.0, 0.0).unwrap();
        let geo = critical_points(&pot);
        let scan = scan_sign_changes(|x| pot.derivative(x), -10.0, 10.0, 100_000);
        assert_eq!(scan.len(), 1);
        assert_eq!(geo.minima.len(), 1);
        assert!(geo.barrier.is_none());
        assert_relative_eq!(geo.minima[0].x, scan[0], epsilon = 1e-12);
    }

    #[test]
    fn inflection_merging_counts_as_single_well() {
        // V' = 4x^3 - 3x + 1 = (x+1)(2x-1)^2: double root at x = 1/2
        let pot = QuarticPotential::new(1.0, 0.0, -1.5, 1.0, 0.0).unwrap();
        let geo = critical_points(&pot);
        assert!(geo.barrier.is_none());
        assert_relative_eq!(geo.minima[0].x, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn tangent_energy_gives_double_roots() {
        let pot = QuarticPotential::from_params(1.0, 10.0, 0.0, 0.0).unwrap();
        let geo = critical_points(&pot);
        let roots = turning_points(&pot, geo.minima[0].value);
        let s5 = 5f64.sqrt();
        assert_eq!(roots.len(), 4);
        for (r, want) in roots.iter().zip([-s5, -s5, s5, s5]) {
            assert_relative_eq!(*r, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn energy_above_barrier_has_two_roots() {
        let pot = QuarticPotential::from_params(1.0, 10.0, 0.0, 0.0).unwrap();
        let roots = turning_points(&pot, 10.0);
        let scan = scan_sign_changes(|x| pot.value(x) - 10.0, -10.0, 10.0, 20_000);
        assert_eq!(roots.len(), 2);
        assert_eq!(scan.len(), 2);
        for (r, s) in roots.iter().zip(&scan) {
            assert_relative_eq!(*r, *s, epsilon = 1e-12);
        }
    }

    #[test]
    fn table_one_potential_turning_points() {
        let pot = QuarticPotential::new(0.01, -0.0075, -0.0025, 0.0, 0.0).unwrap();
        let roots = turning_points(&pot, 0.2205);
        let scan = scan_sign_changes(|x| pot.value(x) - 0.2205, -20.0, 20.0, 40_000);
        assert_eq!(roots.len(), scan.len());
        assert_eq!(roots.len(), 2);
        for (r, s) in roots.iter().zip(&scan) {
            assert_relative_eq!(*r, *s, epsilon = 1e-11);
        }
    }

    #[test]
    fn mirror_is_involution() {
        let pot = QuarticPotential::new(1.0, 0.3, -7.0, 2.5, 1.0).unwrap();
        let m = pot.mirror();
        assert_eq!((m.c3, m.c1), (-0.3, -2.5));
        assert_eq!(m.mirror(), pot);
        let a = critical_points(&pot);
        let b = critical_points(&m);
        for (x, y) in a.minima.iter().zip(b.minima.iter().rev()) {
            assert_relative_eq!(x.x, -y.x, epsilon = 1e-12);
        }
    }

    #[test]
    fn double_well_has_zero_floor() {
        let pot = QuarticPotential::double_well(1.0, 30.0, 2.0).unwrap();
        let geo = critical_points(&pot);
        assert!(geo.global_minimum().value.abs() < 1e-12);
        assert_eq!(geo.deeper_well_side, WellSide::Left);
    }

    #[test]
    fn rejects_non_confining() {
        assert!(matches!(
            QuarticPotential::new(0.0, 0.0, 1.0, 0.0, 0.0),
            Err(Error::NonConfining(_))
        ));
        assert!(QuarticPotential::new(-1.0, 0.0, 1.0, 0.0, 0.0).is_err());
    }
}
