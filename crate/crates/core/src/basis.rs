//! Hamiltonian `-d^2/dx^2 + V(x)` in a scaled harmonic-oscillator basis.
//!
//! The basis functions are
//! `phi_l(x) = (2 sigma / pi)^(1/4) (2^l l!)^(-1/2) H_l(sqrt(2 sigma) x) exp(-sigma x^2)`,
//! so that `x = (a + a^dag) / (2 sqrt(sigma))` and
//! `-d^2/dx^2 = sigma (2 a^dag a + 1) - sigma (a^2 + a^dag^2)`.
//! Every matrix element is produced from these two ladder-operator identities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{cubic_real_roots, QuarticPotential};

/// Number of basis functions and the oscillator scale `sigma` (units 1/length^2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub n_basis: usize,
    pub sigma: f64,
}

impl BasisSpec {
    pub fn new(n_basis: usize, sigma: f64) -> Result<Self> {
        if n_basis < 4 {
            return Err(Error::InvalidBasis(format!(
                "need at least 4 basis functions, got {n_basis}"
            )));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidBasis(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { n_basis, sigma })
    }

    /// Basis of size `n_basis` at the trace-minimizing scale for `pot`.
    pub fn optimized(pot: &QuarticPotential, n_basis: usize) -> Result<Self> {
        Self::new(n_basis, optimal_sigma(pot, n_basis)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Position,
    Momentum,
}

/// Dense Hamiltonian matrix in either representation.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianMatrix {
    /// Real symmetric.
    Position(DMatrix<f64>),
    /// Complex Hermitian, `D h D^dag` with `D = diag((-i)^l)`.
    Momentum(DMatrix<Complex64>),
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        match self {
            Self::Position(h) => h.nrows(),
            Self::Momentum(g) => g.nrows(),
        }
    }

    pub fn representation(&self) -> Representation {
        match self {
            Self::Position(_) => Representation::Position,
            Self::Momentum(_) => Representation::Momentum,
        }
    }

    pub fn entry(&self, l: usize, m: usize) -> Complex64 {
        match self {
            Self::Position(h) => Complex64::new(h[(l, m)], 0.0),
            Self::Momentum(g) => g[(l, m)],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|l| self.entry(l, l).re).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = match self {
            Self::Position(h) => h.clone().symmetric_eigenvalues().iter().copied().collect(),
            Self::Momentum(g) => g.clone().symmetric_eigenvalues().iter().copied().collect(),
        };
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn as_position(&self) -> Option<&DMatrix<f64>> {
        match self {
            Self::Position(h) => Some(h),
            Self::Momentum(_) => None,
        }
    }

    pub fn as_momentum(&self) -> Option<&DMatrix<Complex64>> {
        match self {
            Self::Momentum(g) => Some(g),
            Self::Position(_) => None,
        }
    }
}

/// `S1 = sum (2l+1) = N^2` and `S2 = sum (2l^2 + 2l + 1)` over `l < N`.
fn trace_sums(n_basis: usize) -> (f64, f64) {
    let n = n_basis as f64;
    let s1 = n * n;
    // sum 2l^2 + 2l + 1 = 2 (N-1)N(2N-1)/6 + (N-1)N + N
    let s2 = (n - 1.0) * n * (2.0 * n - 1.0) / 3.0 + (n - 1.0) * n + n;
    (s1, s2)
}

/// Trace of the position-space Hamiltonian as a function of the scale.
///
/// Only `c4`, `c2` and `c0` contribute: odd powers of `x` have no diagonal
/// elements in the oscillator basis.
pub fn hamiltonian_trace(pot: &QuarticPotential, n_basis: usize, sigma: f64) -> f64 {
    let (s1, s2) = trace_sums(n_basis);
    3.0 * pot.c4 * s2 / (16.0 * sigma * sigma)
        + pot.c2 * s1 / (4.0 * sigma)
        + sigma * s1
        + pot.c0 * n_basis as f64
}

/// Scale that minimizes the trace of the `n_basis`-dimensional Hamiltonian.
///
/// Stationarity gives `8 S1 sigma^3 - 2 c2 S1 sigma - 3 c4 S2 = 0`, which has
/// exactly one positive root whenever `c4 > 0`.
pub fn optimal_sigma(pot: &QuarticPotential, n_basis: usize) -> Result<f64> {
    if n_basis == 0 || !(pot.c4 > 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    let (s1, s2) = trace_sums(n_basis);
    let a = 8.0 * s1;
    let c = -2.0 * pot.c2 * s1;
    let d = -3.0 * pot.c4 * s2;
    let f = |s: f64| (a * s * s + c) * s + d;
    let df = |s: f64| 3.0 * a * s * s + c;

    let mut sigma = cubic_real_roots(a, 0.0, c, d)
        .into_iter()
        .filter(|s| *s > 0.0)
        .fold(f64::NAN, f64::max);
    if !sigma.is_finite() {
        return Err(Error::NoPositiveRoot);
    }
    for _ in 0..3 {
        let step = f(sigma) / df(sigma);
        if !step.is_finite() {
            break;
        }
        sigma -= step;
    }
    if sigma > 0.0 {
        Ok(sigma)
    } else {
        Err(Error::NoPositiveRoot)
    }
}

/// Position operator `x = (a + a^dag) / (2 sqrt(sigma))` on `dim` levels.
pub fn position_operator(dim: usize, sigma: f64) -> DMatrix<f64> {
    let scale = 1.0 / (2.0 * sigma.sqrt());
    DMatrix::from_fn(dim, dim, |l, m| {
        if m == l + 1 {
            (m as f64).sqrt() * scale
        } else if l == m + 1 {
            (l as f64).sqrt() * scale
        } else {
            0.0
        }
    })
}

/// `-d^2/dx^2 = sigma (2 n + 1) - sigma (a^2 + a^dag^2)` on `dim` levels.
pub fn kinetic_operator(dim: usize, sigma: f64) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |l, m| {
        if l == m {
            sigma * (2 * l + 1) as f64
        } else if m == l + 2 {
            -sigma * ((l + 1) as f64 * (l + 2) as f64).sqrt()
        } else if l == m + 2 {
            -sigma * ((m + 1) as f64 * (m + 2) as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// Real symmetric position-space Hamiltonian. Entries vanish for `|l - m| > 4`.
pub fn assemble_position(pot: &QuarticPotential, basis: &BasisSpec) -> HamiltonianMatrix {
    let n = basis.n_basis;
    // Four extra levels make every retained entry of x^k exact for k <= 4.
    let big = n + 4;
    let x = position_operator(big, basis.sigma);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x2 * &x2;
    let kinetic = kinetic_operator(n, basis.sigma);

    let h = DMatrix::from_fn(n, n, |l, m| {
        if l.abs_diff(m) > 4 {
            return 0.0;
        }
        let mut v = pot.c4 * x4[(l, m)] + pot.c3 * x3[(l, m)] + pot.c2 * x2[(l, m)] + pot.c1 * x[(l, m)];
        if l == m {
            v += pot.c0;
        }
        v + kinetic[(l, m)]
    });
    // exact symmetry regardless of summation order
    let h = (&h + h.transpose()) * 0.5;
    HamiltonianMatrix::Position(h)
}

/// Phase `(-i)^(l - m)` relating the two representations.
fn momentum_phase(l: usize, m: usize) -> Complex64 {
    let k = (l as i64 - m as i64).rem_euclid(4);
    match k {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Complex Hermitian momentum-space Hamiltonian `g_lm = (-i)^(l-m) h_lm`.
pub fn assemble_momentum(pot: &QuarticPotential, basis: &BasisSpec) -> HamiltonianMatrix {
    let HamiltonianMatrix::Position(h) = assemble_position(pot, basis) else {
        unreachable!()
    };
    momentum_from_position(&h)
}

pub fn momentum_from_position(h: &DMatrix<f64>) -> HamiltonianMatrix {
    let n = h.nrows();
    HamiltonianMatrix::Momentum(DMatrix::from_fn(n, n, |l, m| momentum_phase(l, m) * h[(l, m)]))
}
