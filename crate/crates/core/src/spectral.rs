//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson-type shifts,
//! the EISPACK `tql2` scheme) and the resulting spectral decomposition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::tridiagonal::TridiagonalOperator;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    /// Components `⟨v_k|ψ⟩` of a state in the eigenbasis.
    pub fn coefficients(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(psi.len(), d);
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (r, amp) in psi.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.eigenvectors.row(r)) {
                *o += amp * v;
            }
        }
        out
    }

    /// `Σ_k c_k v_k` back in the computational basis.
    pub fn synthesize(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(coefficients.len(), d);
        (0..d)
            .map(|r| {
                self.eigenvectors
                    .row(r)
                    .iter()
                    .zip(coefficients)
                    .map(|(v, c)| c * v)
                    .sum()
            })
            .collect()
    }

    /// `V E Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for r in 0..d {
            for k in 0..d {
                scaled[(r, k)] *= self.eigenvalues[k];
            }
        }
        &scaled * &self.eigenvectors.transpose()
    }
}

/// Full eigendecomposition of a real symmetric tridiagonal matrix.
pub fn diagonalize(h: &TridiagonalOperator) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut d = h.diag().to_vec();
    let mut e = h.offdiag().to_vec();
    e.push(0.0);
    let mut v = DenseMatrix::identity(n);

    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence { index: l });
                }
                // shift from the leading 2x2 block
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut shift = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= shift;
                }
                shift_total += shift;

                // implicit QL sweep from m-1 down to l
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    shift = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = shift + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let hk = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * hk;
                        v[(k, i)] = c * v[(k, i)] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }

    // stable, so exactly degenerate diagonal inputs keep basis order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
