use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix stored by its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSymmetric {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalSymmetric {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput(
                "matrix must have at least one row".into(),
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "off-diagonal has length {}, expected {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if let Some(v) = diag.iter().chain(&offdiag).find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite matrix entry {v}")));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `H v` for a vector of matching length.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                0.0
            }
        })
    }
}

/// Eigenvalues in ascending order and, optionally, the matching orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

const MAX_SWEEPS_PER_VALUE: usize = 50;

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
///
/// Zero off-diagonal entries split the matrix into independent blocks; the
/// resulting eigenvalues may coincide, in which case the ordering among equal
/// values is that of the stable sort.
pub fn eigensolve_tridiagonal(
    m: &TridiagonalSymmetric,
    want_vectors: bool,
) -> Result<TridiagonalEigen> {
    let n = m.dim();
    let mut d = m.diag.clone();
    let mut e = m.offdiag.clone();
    e.push(0.0);
    let mut z = want_vectors.then(|| DMatrix::<f64>::identity(n, n));

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_VALUE {
                return Err(Error::Convergence {
                    estimate: d[l],
                    error_bound: e[l].abs(),
                    iterations: sweeps,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // underflow: split the block and restart the sweep
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_mut() {
                    let (mut left, mut right) = z.columns_range_pair_mut(i, i + 1);
                    for k in 0..n {
                        let zr = right[k];
                        right[k] = s * left[k] + c * zr;
                        left[k] = c * left[k] - s * zr;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = z.map(|z| DMatrix::from_fn(n, n, |i, j| z[(i, order[j])]));
    Ok(TridiagonalEigen { values, vectors })
}
