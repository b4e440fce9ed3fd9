use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Real symmetric tridiagonal matrix: `diag` holds `D` entries, `offdiag`
/// holds the `D − 1` entries `H[n, n+1] = H[n+1, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid(
                "diag",
                "a tridiagonal operator needs at least one row",
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(
                "offdiag",
                format!("expected {} entries, got {}", diag.len() - 1, offdiag.len()),
            ));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::invalid("diag", "entries must be finite"));
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

    /// Largest absolute matrix entry.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        assert_eq!(v.len(), d);
        (0..d)
            .map(|n| {
                let mut acc = self.diag[n] * v[n];
                if n > 0 {
                    acc += self.offdiag[n - 1] * v[n - 1];
                }
                if n + 1 < d {
                    acc += self.offdiag[n] * v[n + 1];
                }
                acc
            })
            .collect()
    }

    pub fn apply_complex(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(v.len(), d);
        (0..d)
            .map(|n| {
                let mut acc = v[n] * self.diag[n];
                if n > 0 {
                    acc += v[n - 1] * self.offdiag[n - 1];
                }
                if n + 1 < d {
                    acc += v[n + 1] * self.offdiag[n];
                }
                acc
            })
            .collect()
    }

    /// `⟨v|H|v⟩` for a complex vector.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let hv = self.apply_complex(v);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let d = self.dim();
        let mut m = DenseMatrix::zeros(d, d);
        for n in 0..d {
            m[(n, n)] = self.diag[n];
        }
        for (n, &e) in self.offdiag.iter().enumerate() {
            m[(n, n + 1)] = e;
            m[(n + 1, n)] = e;
        }
        m
    }
}
