//! Asymmetry index `k = gamma / Δγ` and the level-pairing and localization rules built on it.
//!
//! For `alpha x^4 - beta x^2 + gamma x` above a threshold barrier height:
//!
//! * at integer `k`, state `n >= k` pairs with `n + 1` when `n` and `k` share parity;
//! * at fractional `k` nothing pairs;
//! * states with `n < k` sit in the deeper well I; for `n >= k` at fractional
//!   `k` the state sits in well I when `n` and `floor(k)` share parity and in
//!   well II otherwise; at integer `k` it spreads over both.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{occupancy_from_density, Occupancy};
use crate::potential::{critical_points, QuarticPotential};
use crate::spectrum::{quasi_degenerate_pairs, solve, Spectrum, DEFAULT_DEGENERACY_TOL};
use crate::wavefunction::{position_states, state_grid};

/// Default tolerance for calling `k` an integer.
pub const DEFAULT_K_TOL: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryIndex {
    pub delta_gamma: f64,
    pub k: f64,
    /// Set when `k` is within the tolerance of an integer.
    pub k_integer: Option<u32>,
}

impl AsymmetryIndex {
    pub fn new(gamma: f64, delta_gamma: f64) -> Self {
        Self::with_tol(gamma, delta_gamma, DEFAULT_K_TOL)
    }

    pub fn with_tol(gamma: f64, delta_gamma: f64, k_tol: f64) -> Self {
        let k = gamma.abs() / delta_gamma;
        Self::from_k(k, k_tol, delta_gamma)
    }

    /// Index with a given `k`, for evaluating the rules directly.
    pub fn from_k(k: f64, k_tol: f64, delta_gamma: f64) -> Self {
        let nearest = k.round();
        let k_integer = ((k - nearest).abs() <= k_tol).then_some(nearest as u32);
        Self { delta_gamma, k, k_integer }
    }

    /// `floor(k)` is even; meaningful for fractional `k`.
    pub fn floor_is_even(&self) -> bool {
        (self.k.floor() as u64) % 2 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyPrediction {
    pub pairs: Vec<(usize, usize)>,
    /// States below this index never pair.
    pub non_degenerate_below: usize,
}

/// Predicted quasi-degenerate pairs among states `0..=n_max`.
pub fn predict_degeneracy(k: &AsymmetryIndex, n_max: usize) -> DegeneracyPrediction {
    let below = k.k.ceil() as usize;
    let pairs = match k.k_integer {
        Some(ki) => {
            let ki = ki as usize;
            (ki..n_max).step_by(2).map(|n| (n, n + 1)).collect()
        }
        None => Vec::new(),
    };
    let non_degenerate_below = match k.k_integer {
        Some(ki) => ki as usize,
        None => below,
    };
    DegeneracyPrediction { pairs, non_degenerate_below }
}

/// Predicted well of state `n`.
pub fn predict_occupancy(k: &AsymmetryIndex, n: usize) -> Occupancy {
    match k.k_integer {
        Some(ki) if n >= ki as usize => Occupancy::Both,
        Some(_) => Occupancy::WellI,
        None if (n as f64) < k.k => Occupancy::WellI,
        None => {
            if (n % 2 == 0) == k.floor_is_even() {
                Occupancy::WellI
            } else {
                Occupancy::WellII
            }
        }
    }
}

/// Predicted number of nodes in the well that holds state `n`: its rank among
/// the lower states in the same well. Delocalized states keep all `n` nodes.
pub fn predict_effective_nodes(k: &AsymmetryIndex, n: usize) -> usize {
    let own = predict_occupancy(k, n);
    if own == Occupancy::Both {
        return n;
    }
    (0..n).filter(|&m| predict_occupancy(k, m) == own).count()
}

/// Options shared by the spectrum-driven parts of this module.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleOptions {
    pub n_basis: usize,
    pub grid_points: usize,
    pub rel_tol: f64,
    pub k_tol: f64,
}

impl Default for RuleOptions {
    fn default() -> Self {
        Self { n_basis: 100, grid_points: 2048, rel_tol: DEFAULT_DEGENERACY_TOL, k_tol: DEFAULT_K_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaGammaEstimate {
    pub alpha: f64,
    /// Barrier parameter at which the transitions were resolved.
    pub beta: f64,
    pub delta_gamma: f64,
    /// Largest deviation of a single spacing from the mean.
    pub uncertainty: f64,
    /// Transition locations, ascending.
    pub transitions: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaGammaConfig {
    pub beta_probe: f64,
    pub gamma_range: (f64, f64),
    /// Number of level pairs `(j, j+1)`, `j = 1..=pairs`, whose crossings are located.
    pub pairs: usize,
    /// Sweep step as a fraction of the range.
    pub step_fraction: f64,
    pub max_beta: f64,
    pub n_basis: usize,
}

impl Default for DeltaGammaConfig {
    fn default() -> Self {
        Self { beta_probe: 20.0, gamma_range: (0.0, 10.0), pairs: 3, step_fraction: 0.01, max_beta: 200.0, n_basis: 100 }
    }
}

/// Empirical Δγ for a given quartic strength.
///
/// Sweeps `gamma` and, for each adjacent pair `(j, j+1)`, takes the last sharp
/// minimum of `E_{j+1} - E_j` (the crossing at `k = j`), refined by golden
/// section. Δγ is the mean spacing of consecutive crossings. The probe barrier
/// is raised by 50% at a time until at least two crossings are resolved.
pub fn estimate_delta_gamma(alpha: f64, config: &DeltaGammaConfig) -> Result<DeltaGammaEstimate> {
    let mut beta = config.beta_probe;
    let mut found = 0;
    while beta <= config.max_beta {
        let transitions = locate_transitions(alpha, beta, config)?;
        found = transitions.len();
        if found >= 2 {
            let spacings: Vec<f64> = transitions.windows(2).map(|w| w[1] - w[0]).collect();
            let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
            let uncertainty = spacings.iter().map(|s| (s - mean).abs()).fold(0.0, f64::max);
            return Ok(DeltaGammaEstimate { alpha, beta, delta_gamma: mean, uncertainty, transitions });
        }
        beta *= 1.5;
    }
    Err(Error::NoTransitionsFound(found))
}

fn locate_transitions(alpha: f64, beta: f64, config: &DeltaGammaConfig) -> Result<Vec<f64>> {
    let (lo, hi) = config.gamma_range;
    let step = config.step_fraction * (hi - lo);
    if !(step > 0.0) {
        return Err(Error::Config(format!("empty gamma range {lo}..{hi}")));
    }
    let count = ((hi - lo) / step).round() as usize + 1;
    let n_states = config.pairs + 2;
    let gammas: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
    let gap_of = |gamma: f64| -> Result<Vec<f64>> {
        let pot = QuarticPotential::double_well(alpha, beta, gamma)?;
        let spec = solve(&pot, config.n_basis, n_states)?;
        Ok((1..=config.pairs).map(|j| spec.energy(j + 1) - spec.energy(j)).collect())
    };
    let gaps: Vec<Vec<f64>> = gammas.par_iter().map(|&g| gap_of(g)).collect::<Result<_>>()?;

    let mut transitions = Vec::new();
    for j in 0..config.pairs {
        let series: Vec<f64> = gaps.iter().map(|g| g[j]).collect();
        let mut sorted = series.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        // last interior local minimum that is sharp relative to the typical gap
        let candidate = (1..series.len() - 1)
            .rev()
            .find(|&i| series[i] <= series[i - 1] && series[i] <= series[i + 1] && series[i] < 0.05 * median);
        if let Some(i) = candidate {
            let refined = golden_section(
                |g| gap_of(g).map(|v| v[j]).unwrap_or(f64::INFINITY),
                gammas[i - 1],
                gammas[i + 1],
                1e-7,
            );
            transitions.push(refined);
        }
    }
    transitions.sort_by(f64::total_cmp);
    Ok(transitions)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Measured and predicted behavior at one `gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RulePoint {
    pub gamma: f64,
    pub k: AsymmetryIndex,
    /// Whether the compared states are confined by the barrier and show pairing or localization.
    pub above_threshold: bool,
    pub predicted_pairs: Vec<(usize, usize)>,
    pub detected_pairs: Vec<(usize, usize)>,
    pub predicted_occupancy: Vec<Occupancy>,
    pub measured_occupancy: Vec<Occupancy>,
    pub p_well_i: Vec<f64>,
}

impl RulePoint {
    pub fn pairs_agree(&self) -> bool {
        self.predicted_pairs == self.detected_pairs
    }

    /// Count of states whose measured well matches the prediction.
    pub fn occupancy_agreements(&self) -> usize {
        self.predicted_occupancy.iter().zip(&self.measured_occupancy).filter(|(a, b)| a == b).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub alpha: f64,
    pub beta: f64,
    pub delta_gamma: f64,
    pub n_states: usize,
    pub points: Vec<RulePoint>,
}

impl RuleReport {
    /// Points that pass the threshold test.
    pub fn participating(&self) -> impl Iterator<Item = &RulePoint> {
        self.points.iter().filter(|p| p.above_threshold)
    }

    /// `(agreeing, compared)` occupancy counts over participating points.
    pub fn occupancy_score(&self) -> (usize, usize) {
        self.participating()
            .fold((0, 0), |(a, t), p| (a + p.occupancy_agreements(), t + p.measured_occupancy.len()))
    }

    /// `(agreeing, compared)` pair-list counts over participating points.
    pub fn pair_score(&self) -> (usize, usize) {
        self.participating().fold((0, 0), |(a, t), p| (a + p.pairs_agree() as usize, t + 1))
    }
}

/// Solved spectrum plus the measured well of each of the first `n_states` states.
fn measure(pot: &QuarticPotential, n_states: usize, opts: &RuleOptions) -> Result<(Spectrum, Vec<f64>)> {
    let n_solve = n_states.max(2);
    let spec = solve(pot, opts.n_basis, n_solve)?;
    let grid = state_grid(&spec, n_states - 1, opts.grid_points)?;
    let geometry = critical_points(pot);
    let states: Vec<usize> = (0..n_states).collect();
    let psi = position_states(&spec, &states, &grid.coords())?;
    let p = psi
        .iter()
        .map(|(v, _)| {
            let rho: Vec<f64> = v.iter().map(|x| x * x).collect();
            occupancy_from_density(&rho, &grid, &geometry).p_well_i
        })
        .collect();
    Ok((spec, p))
}

/// Compares predicted and detected pairs and wells across `gammas`.
///
/// A point takes part in the comparison only when every compared state lies
/// below the barrier top and some adjacent gap is below `rel_tol` or some
/// state is localized in well II; otherwise the barrier is below threshold
/// and the rules make no claim.
pub fn validate_rules(
    alpha: f64,
    beta: f64,
    gammas: &[f64],
    delta_gamma: f64,
    n_states: usize,
    opts: &RuleOptions,
) -> Result<RuleReport> {
    let points = gammas
        .par_iter()
        .map(|&gamma| -> Result<RulePoint> {
            let pot = QuarticPotential::double_well(alpha, beta, gamma)?;
            let (spec, p_well_i) = measure(&pot, n_states, opts)?;
            let k = AsymmetryIndex::with_tol(gamma, delta_gamma, opts.k_tol);
            let mut truncated = spec.clone();
            truncated.n_states = n_states;
            let detected_pairs: Vec<(usize, usize)> =
                quasi_degenerate_pairs(&truncated, opts.rel_tol).iter().map(|p| (p.lower, p.upper)).collect();
            let measured_occupancy: Vec<Occupancy> = p_well_i.iter().map(|&p| Occupancy::classify(p)).collect();
            let confined = critical_points(&pot).barrier.is_some_and(|b| spec.energy(n_states - 1) < b.value);
            let above_threshold = confined
                && (!detected_pairs.is_empty() || measured_occupancy.iter().any(|o| *o == Occupancy::WellII));
            Ok(RulePoint {
                gamma,
                k,
                above_threshold,
                predicted_pairs: predict_degeneracy(&k, n_states - 1).pairs,
                detected_pairs,
                predicted_occupancy: (0..n_states).map(|n| predict_occupancy(&k, n)).collect(),
                measured_occupancy,
                p_well_i,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RuleReport { alpha, beta, delta_gamma, n_states, points })
}

/// Number of transition neighborhoods state `n` passes through along `gammas`
/// (ascending): each maximal run classified `Both`, and each direct switch
/// between wells I and II, counts once.
pub fn count_transitions(alpha: f64, beta: f64, n: usize, gammas: &[f64], opts: &RuleOptions) -> Result<usize> {
    let classes = gammas
        .par_iter()
        .map(|&gamma| {
            let pot = QuarticPotential::double_well(alpha, beta, gamma)?;
            let (_, p) = measure(&pot, n + 1, opts)?;
            Ok(Occupancy::classify(p[n]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(transition_runs(&classes))
}

/// Transition neighborhoods in a sequence of classifications.
pub fn transition_runs(classes: &[Occupancy]) -> usize {
    let mut count = 0;
    let mut prev: Option<Occupancy> = None;
    for &c in classes {
        match (prev, c) {
            (Some(Occupancy::Both), Occupancy::Both) => {}
            (_, Occupancy::Both) => count += 1,
            (Some(Occupancy::WellI), Occupancy::WellII) | (Some(Occupancy::WellII), Occupancy::WellI) => count += 1,
            _ => {}
        }
        prev = Some(c);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use Occupancy::*;

    fn idx(k: f64) -> AsymmetryIndex {
        AsymmetryIndex::from_k(k, DEFAULT_K_TOL, 2.0)
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(predict_degeneracy(&idx(0.0), 10).pairs, vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]);
        assert_eq!(predict_degeneracy(&idx(3.0), 7).pairs, vec![(3, 4), (5, 6)]);
        assert!(predict_degeneracy(&idx(1.5), 10).pairs.is_empty());
        assert_eq!(predict_degeneracy(&idx(1.5), 10).non_degenerate_below, 2);
    }

    #[test]
    fn occupancy_examples() {
        let got: Vec<_> = (0..6).map(|n| predict_occupancy(&idx(0.5), n)).collect();
        assert_eq!(got, vec![WellI, WellII, WellI, WellII, WellI, WellII]);
        assert_eq!(predict_occupancy(&idx(2.5), 3), WellII);
        assert_eq!(predict_occupancy(&idx(4.0), 4), Both);
        assert_eq!(predict_occupancy(&idx(4.0), 3), WellI);
    }

    #[test]
    fn integer_tolerance() {
        assert_eq!(AsymmetryIndex::new(2.03, 2.0).k_integer, Some(1));
        assert_eq!(AsymmetryIndex::new(2.1, 2.0).k_integer, None);
    }

    #[test]
    fn transition_run_counting() {
        assert_eq!(transition_runs(&[Both, WellI, WellI]), 1);
        assert_eq!(transition_runs(&[Both, WellII, Both, Both, WellI]), 2);
        assert_eq!(transition_runs(&[Both, WellI, WellII, WellI]), 3);
    }
}
