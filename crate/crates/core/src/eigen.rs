//! Dense real-symmetric eigendecomposition: Householder tridiagonalization
//! followed by implicit-shift QL iteration with eigenvector accumulation.

use nalgebra::{DMatrix, DVector, SymmetricTridiagonal};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors as columns.
pub fn symmetric_eigen(a: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let tri = SymmetricTridiagonal::new(a);
    let mut z = tri.q();
    let (d, off) = tri.unpack_tridiagonal();
    let mut d: Vec<f64> = d.iter().copied().collect();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    tql2(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &z.column(src));
    }
    Ok((values, vectors))
}

/// QL iteration on the tridiagonal `(d, e)` (subdiagonal in `e[..n-1]`),
/// applying every rotation to the columns of `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut DMatrix<f64>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::ConvergenceFailure(format!("QL iteration stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.nrows() {
                    let zk1 = z[(k, i + 1)];
                    let zk = z[(k, i)];
                    z[(k, i + 1)] = s * zk + c * zk1;
                    z[(k, i)] = c * zk - s * zk1;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `‖A v - λ v‖₂`.
pub fn residual(a: &DMatrix<f64>, value: f64, vector: &DVector<f64>) -> f64 {
    (a * vector - vector * value).norm()
}
