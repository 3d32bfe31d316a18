//! Uncertainties, well probabilities and information measures.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::basis::position_operator;
use crate::error::{Error, Result};
use crate::potential::{WellGeometry, WellSide};
use crate::quadrature::simpson;
use crate::spectrum::Spectrum;
use crate::wavefunction::{eval_position, split_probability, Amplitude, Grid, GridFunction};

/// Lower bound on `S_x + S_p`.
pub const SHANNON_BOUND: f64 = 2.144_729_885_849_400_2; // 1 + ln(pi)
/// Lower bound on `I_x I_p`.
pub const FISHER_BOUND: f64 = 4.0;
/// Gaussian value of `E_x E_p`. Often quoted as a lower bound, but excited
/// states fall below it (harmonic `n = 1` gives `9 / (32 pi)`).
pub const ONICESCU_BOUND: f64 = 1.0 / (2.0 * PI);
/// Lower bound on `ΔxΔp`.
pub const UNCERTAINTY_BOUND: f64 = 0.5;

/// Gaussian value of `OS_x OS_p`, `(1/2) (1/pi)^(1/3) e^(2/3)`. Like
/// [`ONICESCU_BOUND`] it is not a bound for excited states.
pub fn os_bound() -> f64 {
    0.5 * (1.0 / PI).cbrt() * (2.0f64 / 3.0).exp()
}

/// Deviation of `int rho` from one beyond which a density is rejected.
pub const NORMALIZATION_TOL: f64 = 1e-4;

/// Densities below this contribute nothing to the Fisher integrand.
const FISHER_RHO_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
}

/// Exact moments from the ladder-operator algebra.
pub fn uncertainties(spec: &Spectrum, n: usize) -> Result<UncertaintyReport> {
    spec.check_state(n)?;
    let nb = spec.basis.n_basis;
    let sigma = spec.basis.sigma;
    let mut c = DVector::zeros(nb + 1);
    c.rows_mut(0, nb).copy_from(&spec.coefficients.column(n));

    // x c is exact in nb + 1 levels since c has no component at level nb
    let xc = position_operator(nb + 1, sigma) * &c;
    let mean_x = c.dot(&xc);
    let x2 = xc.norm_squared();

    // (a^dag - a) c; p = i sqrt(sigma) (a^dag - a) has zero mean on real states
    let mut ac = DVector::zeros(nb + 1);
    for l in 0..=nb {
        let up = if l > 0 { (l as f64).sqrt() * c[l - 1] } else { 0.0 };
        let down = if l < nb { ((l + 1) as f64).sqrt() * c[l + 1] } else { 0.0 };
        ac[l] = up - down;
    }
    let p2 = sigma * ac.norm_squared();

    let delta_x = (x2 - mean_x * mean_x).max(0.0).sqrt();
    let delta_p = p2.sqrt();
    Ok(UncertaintyReport { mean_x, mean_p: 0.0, delta_x, delta_p, product: delta_x * delta_p })
}

/// Which well a state occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupancy {
    #[serde(rename = "I")]
    WellI,
    #[serde(rename = "II")]
    WellII,
    #[serde(rename = "both")]
    Both,
}

impl Occupancy {
    pub fn label(self) -> &'static str {
        match self {
            Self::WellI => "I",
            Self::WellII => "II",
            Self::Both => "both",
        }
    }

    /// `WellI` at `p_I >= 0.9`, `WellII` at `p_I <= 0.1`, `Both` otherwise.
    pub fn classify(p_well_i: f64) -> Self {
        if p_well_i >= 0.9 {
            Self::WellI
        } else if p_well_i <= 0.1 {
            Self::WellII
        } else {
            Self::Both
        }
    }
}

impl std::fmt::Display for Occupancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellOccupancy {
    pub p_well_i: f64,
    pub p_well_ii: f64,
    pub barrier_x: Option<f64>,
    pub classification: Occupancy,
}

/// Probabilities on the deeper (I) and shallower (II) side of the barrier top.
///
/// For a symmetric well the left side is called I. A single well is all I.
pub fn occupancy_from_density(rho: &[f64], grid: &Grid, geometry: &WellGeometry) -> WellOccupancy {
    let Some(b) = geometry.barrier else {
        return WellOccupancy { p_well_i: 1.0, p_well_ii: 0.0, barrier_x: None, classification: Occupancy::WellI };
    };
    let (left, right) = split_probability(rho, grid, b.x);
    let (p_i, p_ii) = match geometry.deeper_well_side {
        WellSide::Right => (right, left),
        WellSide::Left | WellSide::Symmetric => (left, right),
    };
    WellOccupancy { p_well_i: p_i, p_well_ii: p_ii, barrier_x: Some(b.x), classification: Occupancy::classify(p_i) }
}

pub fn well_occupancy(spec: &Spectrum, n: usize, geometry: &WellGeometry, grid: &Grid) -> Result<WellOccupancy> {
    let psi = eval_position(spec, n, grid)?;
    Ok(occupancy_from_density(&psi.density(), grid, geometry))
}

fn check_normalized(rho: &[f64], dx: f64) -> Result<()> {
    let total = simpson(rho, dx);
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

/// `S = -int rho ln rho`, with `0 ln 0 = 0`.
pub fn shannon(rho: &GridFunction<f64>) -> Result<f64> {
    check_normalized(&rho.values, rho.dx)?;
    let integrand: Vec<f64> = rho.values.iter().map(|&r| if r > 0.0 { -r * r.ln() } else { 0.0 }).collect();
    Ok(simpson(&integrand, rho.dx))
}

/// `E = int rho^2`.
pub fn onicescu(rho: &GridFunction<f64>) -> Result<f64> {
    check_normalized(&rho.values, rho.dx)?;
    let integrand: Vec<f64> = rho.values.iter().map(|r| r * r).collect();
    Ok(simpson(&integrand, rho.dx))
}

/// `OS = exp(2 S / 3) E`.
pub fn os(s: f64, e: f64) -> f64 {
    (2.0 * s / 3.0).exp() * e
}

/// `I = int (rho')^2 / rho` with `rho'` from the analytic derivative of `psi`.
pub fn fisher<T: Amplitude>(psi: &GridFunction<T>) -> Result<f64> {
    let rho = psi.density();
    check_normalized(&rho, psi.dx)?;
    let drho = psi
        .density_derivative()
        .ok_or_else(|| Error::InvalidGrid("Fisher information needs the wavefunction derivative".into()))?;
    let integrand: Vec<f64> = rho
        .iter()
        .zip(&drho)
        .map(|(&r, &d)| if r < FISHER_RHO_FLOOR { 0.0 } else { d * d / r })
        .collect();
    Ok(simpson(&integrand, psi.dx))
}

/// Fisher information with `rho'` from five-point central differences
/// (one-sided at the two outermost samples on each end).
pub fn fisher_finite_difference(rho: &GridFunction<f64>) -> Result<f64> {
    let r = &rho.values;
    check_normalized(r, rho.dx)?;
    let n = r.len();
    let h = rho.dx;
    let d = |i: usize| -> f64 {
        if i >= 2 && i + 2 < n {
            (r[i - 2] - 8.0 * r[i - 1] + 8.0 * r[i + 1] - r[i + 2]) / (12.0 * h)
        } else if i + 4 < n {
            (-25.0 * r[i] + 48.0 * r[i + 1] - 36.0 * r[i + 2] + 16.0 * r[i + 3] - 3.0 * r[i + 4]) / (12.0 * h)
        } else {
            (25.0 * r[i] - 48.0 * r[i - 1] + 36.0 * r[i - 2] - 16.0 * r[i - 3] + 3.0 * r[i - 4]) / (12.0 * h)
        }
    };
    let integrand: Vec<f64> = (0..n)
        .map(|i| if r[i] < FISHER_RHO_FLOOR { 0.0 } else { d(i).powi(2) / r[i] })
        .collect();
    Ok(simpson(&integrand, h))
}

/// Shannon, Fisher, Onicescu and Onicescu–Shannon measures in both spaces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoMeasures {
    pub s_x: f64,
    pub s_p: f64,
    pub s_total: f64,
    pub i_x: f64,
    pub i_p: f64,
    pub i_product: f64,
    pub e_x: f64,
    pub e_p: f64,
    pub e_product: f64,
    pub os_x: f64,
    pub os_p: f64,
    pub os_total: f64,
}

impl InfoMeasures {
    /// Names of violated lower bounds (Shannon, Fisher), each checked with slack `tol`.
    pub fn violated_bounds(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.s_total < SHANNON_BOUND - tol {
            out.push("shannon");
        }
        if self.i_product < FISHER_BOUND - tol {
            out.push("fisher");
        }
        out
    }

    /// Names of Onicescu-type products lying below their Gaussian values by more than `tol`.
    pub fn below_gaussian_reference(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.e_product < ONICESCU_BOUND - tol {
            out.push("onicescu");
        }
        if self.os_total < os_bound() - tol {
            out.push("onicescu-shannon");
        }
        out
    }
}

/// All four measures from a position wavefunction and its momentum transform.
pub fn information_measures<P: Amplitude>(psi_x: &GridFunction<f64>, psi_p: &GridFunction<P>) -> Result<InfoMeasures> {
    let rho_x = GridFunction { x0: psi_x.x0, dx: psi_x.dx, values: psi_x.density(), derivative: None };
    let rho_p = GridFunction { x0: psi_p.x0, dx: psi_p.dx, values: psi_p.density(), derivative: None };
    let (s_x, s_p) = (shannon(&rho_x)?, shannon(&rho_p)?);
    let (i_x, i_p) = (fisher(psi_x)?, fisher(psi_p)?);
    let (e_x, e_p) = (onicescu(&rho_x)?, onicescu(&rho_p)?);
    let (os_x, os_p) = (os(s_x, e_x), os(s_p, e_p));
    Ok(InfoMeasures {
        s_x,
        s_p,
        s_total: s_x + s_p,
        i_x,
        i_p,
        i_product: i_x * i_p,
        e_x,
        e_p,
        e_product: e_x * e_p,
        os_x,
        os_p,
        os_total: os_x * os_p,
    })
}
