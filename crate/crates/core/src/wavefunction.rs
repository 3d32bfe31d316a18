//! Position- and momentum-space wavefunctions sampled on uniform grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{critical_points, turning_points, QuarticPotential};
use crate::quadrature::simpson;
use crate::spectrum::Spectrum;

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 4096;

/// Decay exponent `int sqrt(V - E) dx` accumulated in each tail before padding.
const TAIL_ACTION: f64 = 20.0;
const PADDING: f64 = 1.2;

/// Largest scaled coordinate accepted by the recurrence.
const XI_LIMIT: f64 = 1.0e3;

const RESCALE_ABOVE: f64 = 1e150;

/// Uniform grid `x_i = x0 + i dx`, `i < points`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(x0: f64, x1: f64, points: usize) -> Result<Self> {
        if points < 2 || !(x1 > x0) {
            return Err(Error::InvalidGrid(format!("[{x0}, {x1}] with {points} points")));
        }
        Ok(Self { x0, dx: (x1 - x0) / (points - 1) as f64, points })
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn end(&self) -> f64 {
        self.coord(self.points - 1)
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.coord(i)).collect()
    }

    /// Same interval with `2 (points - 1) + 1` points.
    pub fn refined(&self) -> Self {
        Self { x0: self.x0, dx: 0.5 * self.dx, points: 2 * self.points - 1 }
    }

    /// Index of the grid node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.x0) / self.dx).round();
        i.clamp(0.0, (self.points - 1) as f64) as usize
    }
}

/// Samples of a real or complex function on a [`Grid`], optionally with its derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<T>,
    pub derivative: Option<Vec<T>>,
}

/// Scalar types a wavefunction can take.
pub trait Amplitude: Copy + Send + Sync {
    fn density(self) -> f64;
    /// `d|psi|^2 / dx` given `psi` and `psi'`.
    fn density_derivative(self, d: Self) -> f64;
}

impl Amplitude for f64 {
    fn density(self) -> f64 {
        self * self
    }
    fn density_derivative(self, d: Self) -> f64 {
        2.0 * self * d
    }
}

impl Amplitude for Complex64 {
    fn density(self) -> f64 {
        self.norm_sqr()
    }
    fn density_derivative(self, d: Self) -> f64 {
        2.0 * (self.conj() * d).re
    }
}

impl<T: Amplitude> GridFunction<T> {
    pub fn grid(&self) -> Grid {
        Grid { x0: self.x0, dx: self.dx, points: self.values.len() }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.density()).collect()
    }

    /// `d rho / dx` from the stored derivative, if present.
    pub fn density_derivative(&self) -> Option<Vec<f64>> {
        self.derivative
            .as_ref()
            .map(|d| self.values.iter().zip(d).map(|(v, d)| v.density_derivative(*d)).collect())
    }

    /// Simpson integral of `|psi|^2`.
    pub fn norm_sqr(&self) -> f64 {
        simpson(&self.density(), self.dx)
    }
}

/// Normalized oscillator functions `phi_l(x; sigma)` and their `x`-derivatives for `l < n`.
///
/// Uses the three-term recurrence on normalized functions with the Gaussian
/// factor carried as a separate log-scale, so neither factorials nor
/// underflowing exponentials appear during the recursion.
pub fn hermite_functions(n: usize, sigma: f64, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut phi = vec![0.0; n];
    let mut dphi = vec![0.0; n];
    hermite_into(sigma, x, &mut phi, &mut dphi)?;
    Ok((phi, dphi))
}

fn hermite_into(sigma: f64, x: f64, phi: &mut [f64], dphi: &mut [f64]) -> Result<()> {
    let n = phi.len();
    let root = (2.0 * sigma).sqrt();
    let xi = root * x;
    if !xi.is_finite() || xi.abs() > XI_LIMIT {
        return Err(Error::OverflowGuard(xi));
    }
    let mut log_scale = 0.25 * (2.0 * sigma / std::f64::consts::PI).ln() - 0.5 * xi * xi;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for l in 0..n {
        phi[l] = cur * log_scale.exp();
        let lf = l as f64;
        let next = xi * (2.0 / (lf + 1.0)).sqrt() * cur - (lf / (lf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev /= RESCALE_ABOVE;
            cur /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
    }
    for l in 0..n {
        let lower = if l > 0 { (2.0 * l as f64).sqrt() * phi[l - 1] } else { 0.0 };
        dphi[l] = root * (lower - xi * phi[l]);
    }
    Ok(())
}

/// Position-space grid covering the classically allowed region at `e_max`.
///
/// The interval runs from the outermost turning points out to where the WKB
/// decay exponent reaches 20 (amplitude `~ 2e-9`), widened by a factor 1.2.
/// For a double well the barrier top is placed exactly on a grid node so that
/// well probabilities split cleanly.
pub fn build_grid(pot: &QuarticPotential, e_max: f64, points: usize) -> Result<Grid> {
    if points < 512 {
        return Err(Error::InvalidGrid(format!("need at least 512 points, got {points}")));
    }
    let geometry = critical_points(pot);
    let floor = geometry.global_minimum();
    let mut tp = turning_points(pot, e_max);
    if tp.is_empty() {
        tp = vec![floor.x, floor.x];
    }
    // include every minimum so a shallow well above e_max is still covered
    let t_lo = geometry.minima.iter().map(|m| m.x).fold(tp[0], f64::min);
    let t_hi = geometry.minima.iter().map(|m| m.x).fold(tp[tp.len() - 1], f64::max);
    let energy = e_max.max(floor.value);
    let x_lo = t_lo - PADDING * tail_length(pot, energy, t_lo, -1.0, t_hi - t_lo);
    let x_hi = t_hi + PADDING * tail_length(pot, energy, t_hi, 1.0, t_hi - t_lo);

    match geometry.barrier {
        Some(b) if b.x > x_lo && b.x < x_hi => {
            let dx = (x_hi - x_lo) / (points - 2) as f64;
            let k = ((b.x - x_lo) / dx).ceil();
            Ok(Grid { x0: b.x - k * dx, dx, points })
        }
        _ => Grid::new(x_lo, x_hi, points),
    }
}

/// Distance beyond a turning point at which `int sqrt(V - E)` reaches the tail target.
fn tail_length(pot: &QuarticPotential, energy: f64, start: f64, dir: f64, width: f64) -> f64 {
    // natural length of the linear turning-point region, or of the harmonic
    // region when `start` is a minimum lying above `energy`
    let slope = pot.derivative(start).abs();
    let curvature = pot.second_derivative(start).abs();
    let local = if slope > 1e-8 { slope.powf(-1.0 / 3.0) } else { curvature.max(1e-12).powf(-0.25) };
    let h = width.max(local.min(1e3)).max(1e-6) / 4000.0;
    let mut action = 0.0;
    let mut dist = 0.0;
    for _ in 0..10_000_000 {
        let x = start + dir * (dist + 0.5 * h);
        action += (pot.value(x) - energy).max(0.0).sqrt() * h;
        dist += h;
        if action >= TAIL_ACTION {
            break;
        }
    }
    dist
}

/// Grid suited to states `0..=n_max` of `spec`.
pub fn state_grid(spec: &Spectrum, n_max: usize, points: usize) -> Result<Grid> {
    spec.check_state(n_max)?;
    build_grid(&spec.potential, spec.energy(n_max), points)
}

/// Symmetric momentum grid `[-p_max, p_max]` for states `0..=n_max`.
///
/// Starts from `1.5 sqrt(E_max - V_min)` and widens by 25% until every
/// momentum density has fallen below `1e-18` of its peak at both ends.
pub fn momentum_grid(spec: &Spectrum, n_max: usize, points: usize) -> Result<Grid> {
    if points < 512 {
        return Err(Error::InvalidGrid(format!("need at least 512 points, got {points}")));
    }
    spec.check_state(n_max)?;
    let v_min = critical_points(&spec.potential).global_minimum().value;
    let mut p_max = 1.5 * (spec.energy(n_max) - v_min).max(1e-12).sqrt();
    let states: Vec<usize> = (0..=n_max).collect();
    for _ in 0..200 {
        let coarse = Grid::new(-p_max, p_max, 257)?;
        let psi = momentum_states(spec, &states, &coarse.coords())?;
        let ok = psi.iter().all(|v| {
            let peak = v.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            v[0].norm_sqr() <= 1e-18 * peak && v[v.len() - 1].norm_sqr() <= 1e-18 * peak
        });
        if ok {
            return Grid::new(-p_max, p_max, points);
        }
        p_max *= 1.25;
    }
    Err(Error::InvalidGrid("momentum densities do not decay".into()))
}

/// `psi_n(x)` and `psi_n'(x)` for each requested state at the given points.
pub fn position_states(spec: &Spectrum, states: &[usize], xs: &[f64]) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    for &n in states {
        spec.check_state(n)?;
    }
    let nb = spec.basis.n_basis;
    let mut out: Vec<(Vec<f64>, Vec<f64>)> =
        states.iter().map(|_| (vec![0.0; xs.len()], vec![0.0; xs.len()])).collect();
    let mut phi = vec![0.0; nb];
    let mut dphi = vec![0.0; nb];
    for (i, &x) in xs.iter().enumerate() {
        hermite_into(spec.basis.sigma, x, &mut phi, &mut dphi)?;
        for (s, &n) in states.iter().enumerate() {
            let c = spec.coefficients.column(n);
            let mut v = 0.0;
            let mut d = 0.0;
            for l in 0..nb {
                v += c[l] * phi[l];
                d += c[l] * dphi[l];
            }
            out[s].0[i] = v;
            out[s].1[i] = d;
        }
    }
    Ok(out)
}

/// `psi~_n(p) = sum_l c_l (-i)^l phi_l(p; 1/(4 sigma))` for each requested state.
fn momentum_states_with_derivative(
    spec: &Spectrum,
    states: &[usize],
    ps: &[f64],
) -> Result<Vec<(Vec<Complex64>, Vec<Complex64>)>> {
    for &n in states {
        spec.check_state(n)?;
    }
    let nb = spec.basis.n_basis;
    let sigma_p = 0.25 / spec.basis.sigma;
    let zero = Complex64::new(0.0, 0.0);
    let mut out: Vec<(Vec<Complex64>, Vec<Complex64>)> =
        states.iter().map(|_| (vec![zero; ps.len()], vec![zero; ps.len()])).collect();
    let mut phi = vec![0.0; nb];
    let mut dphi = vec![0.0; nb];
    for (i, &p) in ps.iter().enumerate() {
        hermite_into(sigma_p, p, &mut phi, &mut dphi)?;
        for (s, &n) in states.iter().enumerate() {
            let c = spec.coefficients.column(n);
            let (mut re, mut im, mut dre, mut dim) = (0.0, 0.0, 0.0, 0.0);
            for l in 0..nb {
                // (-i)^l cycles through 1, -i, -1, i
                let (a, b) = (c[l] * phi[l], c[l] * dphi[l]);
                match l % 4 {
                    0 => { re += a; dre += b; }
                    1 => { im -= a; dim -= b; }
                    2 => { re -= a; dre -= b; }
                    _ => { im += a; dim += b; }
                }
            }
            out[s].0[i] = Complex64::new(re, im);
            out[s].1[i] = Complex64::new(dre, dim);
        }
    }
    Ok(out)
}

/// `psi~_n(p)` for each requested state at the given momenta.
pub fn momentum_states(spec: &Spectrum, states: &[usize], ps: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    Ok(momentum_states_with_derivative(spec, states, ps)?.into_iter().map(|s| s.0).collect())
}

/// Real wavefunction of state `n` with its derivative.
pub fn eval_position(spec: &Spectrum, n: usize, grid: &Grid) -> Result<GridFunction<f64>> {
    let (values, derivative) = position_states(spec, &[n], &grid.coords())?.pop().unwrap();
    Ok(GridFunction { x0: grid.x0, dx: grid.dx, values, derivative: Some(derivative) })
}

/// Momentum-space wavefunction of state `n` under `psi~(p) = (2 pi)^(-1/2) int psi(x) e^(-ipx) dx`.
pub fn eval_momentum(spec: &Spectrum, n: usize, grid: &Grid) -> Result<GridFunction<Complex64>> {
    let (values, derivative) = momentum_states_with_derivative(spec, &[n], &grid.coords())?.pop().unwrap();
    Ok(GridFunction { x0: grid.x0, dx: grid.dx, values, derivative: Some(derivative) })
}

/// Node counts of a real wavefunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCount {
    pub total: usize,
    /// Nodes lying in a well that carries at least the probability floor.
    pub effective: usize,
}

/// Relative amplitude below which samples cannot carry a node.
pub const NODE_FLOOR: f64 = 1e-9;

/// Default well-probability floor for effective nodes.
pub const DEFAULT_RHO_FLOOR: f64 = 0.01;

/// Sign changes of `psi` strictly between the outermost turning points at `energy`.
///
/// Samples below `NODE_FLOOR * max|psi|` are ignored so that eigenvector
/// round-off (about `eps |H| / gap`, up to ~1e-11 of the peak) in an empty
/// well does not register as nodes. Each node is attributed to
/// the well on its side of the barrier top; it is effective when that well
/// holds probability `>= rho_floor`.
pub fn node_positions(psi: &GridFunction<f64>, pot: &QuarticPotential, energy: f64) -> Vec<f64> {
    let tp = turning_points(pot, energy);
    if tp.len() < 2 {
        return Vec::new();
    }
    let (lo, hi) = (tp[0], tp[tp.len() - 1]);
    let grid = psi.grid();
    let peak = psi.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = NODE_FLOOR * peak;
    let mut nodes = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for (i, &v) in psi.values.iter().enumerate() {
        let x = grid.coord(i);
        if x <= lo || x >= hi || v.abs() <= floor {
            continue;
        }
        if let Some((j, u)) = last {
            if u.signum() != v.signum() {
                // linear interpolation between the two significant samples
                let (xj, xi) = (grid.coord(j), x);
                nodes.push(xj + (xi - xj) * u.abs() / (u.abs() + v.abs()));
            }
        }
        last = Some((i, v));
    }
    nodes
}

pub fn count_nodes(psi: &GridFunction<f64>, pot: &QuarticPotential, energy: f64, rho_floor: f64) -> NodeCount {
    let nodes = node_positions(psi, pot, energy);
    let geometry = critical_points(pot);
    let effective = match geometry.barrier {
        Some(b) => {
            let (left, right) = split_probability(&psi.density(), &psi.grid(), b.x);
            nodes
                .iter()
                .filter(|&&x| if x < b.x { left >= rho_floor } else { right >= rho_floor })
                .count()
        }
        None => nodes.len(),
    };
    NodeCount { total: nodes.len(), effective }
}

/// Integrals of `rho` to the left and right of `x_split`, normalized to sum to one.
pub fn split_probability(rho: &[f64], grid: &Grid, x_split: f64) -> (f64, f64) {
    let k = grid.nearest(x_split);
    let on_node = (grid.coord(k) - x_split).abs() <= 1e-9 * grid.dx;
    let (mut left, mut right) = if on_node {
        (simpson(&rho[..=k], grid.dx), simpson(&rho[k..], grid.dx))
    } else {
        // split between nodes: Simpson up to the bracketing nodes plus a trapezoid sliver
        let j = ((x_split - grid.x0) / grid.dx).floor().clamp(0.0, (grid.points - 2) as f64) as usize;
        let t = (x_split - grid.coord(j)) / grid.dx;
        let mid = rho[j] + t * (rho[j + 1] - rho[j]);
        let left = simpson(&rho[..=j], grid.dx) + 0.5 * t * grid.dx * (rho[j] + mid);
        let right = simpson(&rho[j + 1..], grid.dx) + 0.5 * (1.0 - t) * grid.dx * (mid + rho[j + 1]);
        (left, right)
    };
    let total = left + right;
    if total > 0.0 {
        left /= total;
        right /= total;
    }
    (left, right)
}
