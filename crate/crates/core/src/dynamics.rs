//! Exact unitary evolution through the spectral decomposition of the
//! post-quench Hamiltonian, plus the raw observables built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralDecomposition;
use crate::spin::SpinSector;

/// Tolerance on `‖ψ‖ − 1` for states handed to routines that require normalization.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Pure state in the `m_z` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        Self(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        Self(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Coordinate vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.0
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.re).collect()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|a| a.im == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }
}

/// Uniform sampling `t_s = s·dt`, `s = 0, …, ⌊t_max/dt⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    dt: f64,
}

impl TimeGrid {
    pub const DEFAULT_T_MAX: f64 = 150.0;
    pub const DEFAULT_DT: f64 = 0.01;

    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        if !(t_max.is_finite() && t_max >= dt) {
            return Err(Error::invalid(
                "T",
                format!("must be at least dt = {dt}, got {t_max}"),
            ));
        }
        Ok(Self { t_max, dt })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> usize {
        // slack so that e.g. 150 / 0.01 does not floor to 14999
        (self.t_max / self.dt * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn time(&self, s: usize) -> f64 {
        s as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples()).map(|s| self.time(s)).collect()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_max: Self::DEFAULT_T_MAX,
            dt: Self::DEFAULT_DT,
        }
    }
}

/// `ψ(t) = Σ_k e^{−iE_k t} ⟨v_k|ψ₀⟩ v_k`.
pub fn evolve(spec: &SpectralDecomposition, psi0: &StateVector, t: f64) -> StateVector {
    if t == 0.0 {
        return psi0.clone();
    }
    Propagator::new(spec, psi0).state_at(t)
}

/// A fixed initial state expanded once in the eigenbasis, so that each time
/// sample costs one `O(D²)` synthesis.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    spec: &'a SpectralDecomposition,
    coefficients: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    pub fn new(spec: &'a SpectralDecomposition, psi0: &StateVector) -> Self {
        Self {
            spec,
            coefficients: spec.coefficients(psi0.amplitudes()),
        }
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        self.spec
    }

    /// `⟨v_k|ψ₀⟩`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Eigenbasis components of `ψ(t)`.
    pub fn eigen_amplitudes_at(&self, t: f64) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .zip(&self.spec.eigenvalues)
            .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        StateVector(self.spec.synthesize(&self.eigen_amplitudes_at(t)))
    }

    /// `⟨ψ₀|ψ(t)⟩ = Σ_k |c_k|² e^{−iE_k t}` without leaving the eigenbasis.
    pub fn survival_amplitude_at(&self, t: f64) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&self.spec.eigenvalues)
            .map(|(c, &e)| Complex64::from_polar(c.norm_sqr(), -e * t))
            .sum()
    }
}

/// `⟨ψ|S_z|ψ⟩ = Σ_n (−j + n)|ψ_n|²`.
pub fn expect_sz(psi: &StateVector, sector: SpinSector) -> f64 {
    assert_eq!(psi.dim(), sector.dim());
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| sector.m_of_index(n) * a.norm_sqr())
        .sum()
}

/// `G = ⟨ψ₀|ψ_t⟩`.
pub fn survival_amplitude(psi0: &StateVector, psit: &StateVector) -> Complex64 {
    psi0.inner(psit)
}

/// `L = |⟨ψ₀|ψ_t⟩|²`.
pub fn loschmidt(psi0: &StateVector, psit: &StateVector) -> f64 {
    survival_amplitude(psi0, psit).norm_sqr()
}

/// `r = −ln(L)/N`. A vanishing echo maps to `+∞` rather than an error.
pub fn rate_function(echo: f64, sites: usize) -> f64 {
    if echo <= 0.0 {
        return f64::INFINITY;
    }
    // L may exceed 1 by roundoff; r is then pinned at zero
    (-(echo.min(1.0)).ln() / sites as f64).max(0.0)
}
