//! Spectra, wavefunctions, information measures and semiclassical phase space
//! for one-dimensional quartic potentials `V(x) = c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0`,
//! with the asymmetric double well `alpha x^4 - beta x^2 + gamma x` as the main case.
//!
//! Units: `hbar = 1`, `2m = 1`, so `H = -d^2/dx^2 + V(x)`.

pub mod basis;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod observables;
pub mod phase_space;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod rules;
pub mod spectrum;
pub mod sweep;
pub mod wavefunction;

pub use basis::{BasisSpec, HamiltonianMatrix};
pub use error::{Error, Result};
pub use potential::{critical_points, turning_points, QuarticPotential, WellGeometry, WellSide};
pub use report::{analyze, AnalysisOptions, StateReport};
pub use spectrum::{quasi_degenerate_pairs, solve, Spectrum};
