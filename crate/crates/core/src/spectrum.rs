//! Diagonalization of the position-space Hamiltonian.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::{assemble_position, BasisSpec};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::potential::QuarticPotential;

/// Default relative tolerance for calling two adjacent levels quasi-degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-6;

const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenpairs of a potential in a fixed oscillator basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub potential: QuarticPotential,
    pub basis: BasisSpec,
    /// All `n_basis` eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// Column `n` holds the coefficients of state `n` in the position representation.
    pub coefficients: DMatrix<f64>,
    /// Number of low-lying states whose residual was checked.
    pub n_states: usize,
}

/// A pair of adjacent levels whose splitting is below tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneratePair {
    pub lower: usize,
    pub upper: usize,
    pub gap: f64,
}

impl Spectrum {
    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }

    pub fn state(&self, n: usize) -> DVector<f64> {
        self.coefficients.column(n).into_owned()
    }

    /// States in the lowest third of the basis are considered converged.
    pub fn is_converged(&self, n: usize) -> bool {
        n <= self.basis.n_basis / 3
    }

    pub fn check_state(&self, n: usize) -> Result<()> {
        if n >= self.basis.n_basis / 2 {
            return Err(Error::BasisTooSmall { index: n, n_basis: self.basis.n_basis });
        }
        Ok(())
    }
}

/// Solves for the spectrum at the trace-minimizing scale.
pub fn solve(pot: &QuarticPotential, n_basis: usize, n_states: usize) -> Result<Spectrum> {
    let basis = BasisSpec::optimized(pot, n_basis)?;
    solve_in_basis(pot, basis, n_states)
}

/// Solves for the spectrum in a caller-supplied basis.
///
/// For parity-even potentials the even and odd basis functions decouple, and
/// the two blocks are diagonalized separately so that every eigenvector has
/// exact parity even when the tunneling splitting is below machine precision.
pub fn solve_in_basis(pot: &QuarticPotential, basis: BasisSpec, n_states: usize) -> Result<Spectrum> {
    let n = basis.n_basis;
    if n_states == 0 || n_states > n || n_states > n / 2 {
        return Err(Error::BasisTooSmall { index: n_states.saturating_sub(1), n_basis: n });
    }
    let h = assemble_position(pot, &basis);
    let h = h.as_position().expect("position representation");

    let pairs: Vec<(f64, DVector<f64>)> = if pot.is_even() {
        // Bound states of an even potential alternate in parity, so state 2k is
        // the k-th even eigenvector and state 2k+1 the k-th odd one. Splittings
        // below rounding level can put an odd eigenvalue a few ulps below its
        // even partner; those are clamped to keep the list ascending. Larger
        // inversions come from basis truncation and are sorted instead.
        let even = diagonalize_block(h, (0..n).step_by(2).collect())?;
        let odd = diagonalize_block(h, (1..n).step_by(2).collect())?;
        let mut out = Vec::with_capacity(n);
        let mut odd = odd.into_iter();
        for e in even {
            out.push(e);
            if let Some(o) = odd.next() {
                out.push(o);
            }
        }
        for j in 1..out.len() {
            let prev = out[j - 1].0;
            if out[j].0 < prev {
                if prev - out[j].0 > 0.1 * RESIDUAL_TOL * prev.abs().max(1.0) {
                    out.sort_by(|a, b| a.0.total_cmp(&b.0));
                    break;
                }
                out[j].0 = prev;
            }
        }
        out
    } else {
        let mut out = diagonalize_block(h, (0..n).collect())?;
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    };

    let energies: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut coefficients = DMatrix::zeros(n, n);
    for (j, (_, v)) in pairs.iter().enumerate() {
        coefficients.set_column(j, v);
    }

    for j in 0..n_states {
        let c = coefficients.column(j);
        let residual = (h * c - c * energies[j]).norm();
        if residual > RESIDUAL_TOL * energies[j].abs().max(1.0) {
            return Err(Error::ConvergenceFailure(format!(
                "residual {residual:e} for state {j}"
            )));
        }
    }

    Ok(Spectrum { potential: *pot, basis, energies, coefficients, n_states })
}

/// Eigenpairs of the principal submatrix on `index`, embedded back into the
/// full space, ascending. Each vector is normalized with its largest component positive.
fn diagonalize_block(h: &DMatrix<f64>, index: Vec<usize>) -> Result<Vec<(f64, DVector<f64>)>> {
    let n = h.nrows();
    let k = index.len();
    let block = DMatrix::from_fn(k, k, |i, j| h[(index[i], index[j])]);
    let (values, vectors) = symmetric_eigen(block)?;

    Ok((0..k)
        .map(|j| {
            let col = vectors.column(j);
            let mut v = DVector::zeros(n);
            for (i, &row) in index.iter().enumerate() {
                v[row] = col[i];
            }
            let norm = v.norm();
            v /= norm;
            let pivot = v.iamax();
            if v[pivot] < 0.0 {
                v.neg_mut();
            }
            (values[j], v)
        })
        .collect())
}

/// Adjacent pairs `(n, n+1)` with `|E_{n+1} - E_n| <= rel_tol (1 + |E_n|)`,
/// taken greedily from the bottom so that no state appears twice.
pub fn quasi_degenerate_pairs(spec: &Spectrum, rel_tol: f64) -> Vec<DegeneratePair> {
    let e = &spec.energies[..spec.n_states];
    let mut out = Vec::new();
    let mut n = 0;
    while n + 1 < e.len() {
        let gap = (e[n + 1] - e[n]).abs();
        if gap <= rel_tol * (1.0 + e[n].abs()) {
            out.push(DegeneratePair { lower: n, upper: n + 1, gap });
            n += 2;
        } else {
            n += 1;
        }
    }
    out
}
