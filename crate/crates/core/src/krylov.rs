//! Krylov basis of a state under a Hamiltonian, and the spread measures of a
//! state over a basis: spread complexity, IPR and Shannon entropy.
//!
//! The Lanczos recursion
//!
//! ```text
//! |A_n⟩ = H|K_{n−1}⟩ − a_{n−1}|K_{n−1}⟩ − b_{n−1}|K_{n−2}⟩,   |K_n⟩ = |A_n⟩ / b_n
//! ```
//!
//! is run with every new vector re-orthogonalized twice against all stored
//! vectors, which keeps `⟨K_m|K_n⟩ = δ_mn` at roundoff level for the full
//! Hilbert space. `b_n = ‖A_n‖ > 0`, so signs are absorbed in `K_n`.

use num_complex::Complex64;

use crate::dynamics::StateVector;
use crate::error::{Error, Result};
use crate::spectral::SpectralDecomposition;
use crate::tridiagonal::TridiagonalOperator;

/// Default breakdown threshold, relative to the largest entry of `H`.
pub const DEFAULT_BREAKDOWN_TOL: f64 = 1e-12;

/// Allowed deviation of `Σ p_n` from one before a projection is rejected.
pub const PROJECTION_COMPLETENESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct KrylovDecomposition {
    vectors: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl KrylovDecomposition {
    /// Effective Krylov dimension `M`.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Diagonal coefficients `a_0 … a_{M−1}`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Off-diagonal coefficients with `b[0] = 0`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `H` restricted to the Krylov space, in the Krylov basis.
    pub fn tridiagonal(&self) -> TridiagonalOperator {
        TridiagonalOperator::new(self.a.clone(), self.b[1..].to_vec())
            .expect("Lanczos coefficients have consistent lengths")
    }
}

/// Lanczos tridiagonalization of `h` starting from the real state `psi0`.
///
/// Stops when `b_n ≤ breakdown_tol · max|H_ij|` or when `M` reaches the
/// Hilbert-space dimension.
pub fn lanczos(
    h: &TridiagonalOperator,
    psi0: &StateVector,
    breakdown_tol: f64,
) -> Result<KrylovDecomposition> {
    if !(breakdown_tol.is_finite() && breakdown_tol > 0.0) {
        return Err(Error::invalid(
            "breakdown-tol",
            format!("must be positive, got {breakdown_tol}"),
        ));
    }
    if psi0.dim() != h.dim() {
        return Err(Error::invalid(
            "psi0",
            format!("dimension {} does not match H ({})", psi0.dim(), h.dim()),
        ));
    }
    psi0.require_normalized()?;
    if !psi0.is_real() {
        return Err(Error::ComplexStartVector);
    }

    let d = h.dim();
    let threshold = breakdown_tol * h.max_abs();
    let k0 = psi0.real_parts();
    let mut a = vec![dot(&k0, &h.apply(&k0))];
    let mut b = vec![0.0];
    let mut vectors = vec![k0];

    while vectors.len() < d {
        let n = vectors.len();
        let last = &vectors[n - 1];
        let mut next = h.apply(last);
        axpy(-a[n - 1], last, &mut next);
        if n >= 2 {
            axpy(-b[n - 1], &vectors[n - 2], &mut next);
        }
        for _ in 0..2 {
            for k in &vectors {
                let overlap = dot(k, &next);
                axpy(-overlap, k, &mut next);
            }
        }
        let bn = dot(&next, &next).sqrt();
        if bn <= threshold {
            break;
        }
        next.iter_mut().for_each(|x| *x /= bn);
        a.push(dot(&next, &h.apply(&next)));
        b.push(bn);
        vectors.push(next);
    }
    Ok(KrylovDecomposition { vectors, a, b })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Krylov,
    PrequenchEnergy,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Krylov => "krylov",
            BasisKind::PrequenchEnergy => "prequench-energy",
        }
    }
}

/// A basis to project onto.
#[derive(Debug, Clone, Copy)]
pub enum Basis<'a> {
    Krylov(&'a KrylovDecomposition),
    /// Eigenvectors of the pre-quench Hamiltonian `H(h₀)`.
    PrequenchEnergy(&'a SpectralDecomposition),
}

impl Basis<'_> {
    pub fn kind(&self) -> BasisKind {
        match self {
            Basis::Krylov(_) => BasisKind::Krylov,
            Basis::PrequenchEnergy(_) => BasisKind::PrequenchEnergy,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Basis::Krylov(k) => k.dim(),
            Basis::PrequenchEnergy(s) => s.dim(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Basis vectors as rows, in the `m_z` basis.
    fn rows(&self) -> Vec<Vec<f64>> {
        match self {
            Basis::Krylov(k) => k.vectors.clone(),
            Basis::PrequenchEnergy(s) => (0..s.dim()).map(|k| s.eigenvector(k)).collect(),
        }
    }
}

/// `p_n = |⟨basis_n|ψ⟩|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisProjection {
    pub kind: BasisKind,
    pub probabilities: Vec<f64>,
}

impl BasisProjection {
    fn checked(kind: BasisKind, probabilities: Vec<f64>) -> Result<Self> {
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROJECTION_COMPLETENESS_TOL {
            return Err(Error::IncompleteBasis {
                basis: kind.name(),
                total,
            });
        }
        Ok(Self {
            kind,
            probabilities,
        })
    }
}

/// Projects `psi` onto `basis`. Fails when the probabilities do not sum to one,
/// which signals a basis (typically a truncated Krylov space) that does not
/// contain the state.
pub fn project(psi: &StateVector, basis: Basis<'_>) -> Result<BasisProjection> {
    let amps = psi.amplitudes();
    let probabilities = basis
        .rows()
        .iter()
        .map(|row| {
            assert_eq!(row.len(), amps.len());
            row.iter()
                .zip(amps)
                .map(|(v, a)| a * v)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect();
    BasisProjection::checked(basis.kind(), probabilities)
}

/// Change of basis from the post-quench eigenbasis to a projection basis,
/// `W[n][k] = ⟨basis_n|v_k⟩`, so a state known by its eigen-amplitudes is
/// projected with one matrix-vector product.
#[derive(Debug, Clone)]
pub struct EigenbasisProjector {
    kind: BasisKind,
    overlaps: Vec<Vec<f64>>,
}

impl EigenbasisProjector {
    pub fn new(basis: Basis<'_>, post_quench: &SpectralDecomposition) -> Self {
        let overlaps = basis
            .rows()
            .iter()
            .map(|row| {
                let amps: Vec<Complex64> = row.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                post_quench
                    .coefficients(&amps)
                    .into_iter()
                    .map(|c| c.re)
                    .collect()
            })
            .collect();
        Self {
            kind: basis.kind(),
            overlaps,
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Overlap matrix rows `⟨basis_n|v_k⟩`.
    pub fn overlaps(&self) -> &[Vec<f64>] {
        &self.overlaps
    }

    pub fn project(&self, eigen_amplitudes: &[Complex64]) -> Result<BasisProjection> {
        let probabilities = self
            .overlaps
            .iter()
            .map(|row| {
                row.iter()
                    .zip(eigen_amplitudes)
                    .map(|(w, c)| c * w)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .collect();
        BasisProjection::checked(self.kind, probabilities)
    }
}

/// Mean chain position `Σ_n n·p_n` over a Krylov projection.
pub fn spread_complexity(proj: &BasisProjection) -> f64 {
    proj.probabilities
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum()
}

/// Inverse participation ratio `Σ_n p_n²`.
pub fn ipr(proj: &BasisProjection) -> f64 {
    proj.probabilities.iter().map(|p| p * p).sum()
}

/// `−Σ_n p_n ln p_n`, with `0·ln 0 = 0`.
pub fn shannon_entropy(proj: &BasisProjection) -> f64 {
    -proj
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}
