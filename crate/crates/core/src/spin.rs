//! Collective angular-momentum operators in the `|j, m_z⟩` basis.
//!
//! Basis vectors are ordered by ascending `m_z`: index `n` holds `m_z = -j + n`,
//! so index 0 is the south-pole state `|↓⟩_z` and index `2j` is `|↑⟩_z`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DenseMatrix};
use crate::spectral::diagonalize;
use crate::tridiagonal::TridiagonalOperator;

/// A single collective spin made of `N = 2j` spin-1/2 sites.
///
/// The site count is stored as an integer; `j` is derived from it so that
/// half-integer spins never go through a rounding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSector {
    sites: usize,
}

impl SpinSector {
    pub fn new(sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::invalid("N", "the site count must be at least 1"));
        }
        Ok(Self { sites })
    }

    /// Site count `N`.
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Spin magnitude `j = N / 2`.
    pub fn j(&self) -> f64 {
        self.sites as f64 / 2.0
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(&self) -> usize {
        self.sites + 1
    }

    /// `m_z` eigenvalue carried by basis index `n`.
    pub fn m_of_index(&self, n: usize) -> f64 {
        debug_assert!(n < self.dim());
        n as f64 - self.j()
    }

    /// Basis index of the `m_z` eigenvalue `m`, if `m` is one of `-j, ..., j`.
    pub fn index_of_m(&self, m: f64) -> Option<usize> {
        let n = m + self.j();
        let rounded = n.round();
        if (n - rounded).abs() > 1e-9 || rounded < 0.0 || rounded > self.sites as f64 {
            return None;
        }
        Some(rounded as usize)
    }

    /// All `m_z` values in basis order.
    pub fn m_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.m_of_index(n)).collect()
    }

    /// `⟨m+1|S₊|m⟩` for `m = -j + n`, i.e. `√(j(j+1) − m(m+1))`.
    ///
    /// Evaluated as `√((N − n)(n + 1))`, an integer radicand, so it is exact
    /// to the last bit of the square root.
    pub fn raising_element(&self, n: usize) -> f64 {
        debug_assert!(n < self.sites);
        (((self.sites - n) * (n + 1)) as f64).sqrt()
    }
}

/// Dense spin matrices of one sector.
#[derive(Debug, Clone)]
pub struct SpinOperatorSet {
    sector: SpinSector,
    /// Diagonal of `S_z` in basis order.
    pub sz: Vec<f64>,
    pub sx: DenseMatrix,
    pub splus: DenseMatrix,
    pub sminus: DenseMatrix,
}

impl SpinOperatorSet {
    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn sz_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_diagonal(&self.sz)
    }

    /// Real matrix `A` with `S_y = i·A`, i.e. `A = (S₋ − S₊) / 2`.
    ///
    /// `S_y` itself is purely imaginary in this basis and is not needed by the
    /// dynamics, so only this real factor is exposed.
    pub fn sy_imag(&self) -> DenseMatrix {
        (&self.sminus - &self.splus).scale(0.5)
    }

    /// `S_x` in tridiagonal storage.
    pub fn sx_tridiagonal(&self) -> TridiagonalOperator {
        let d = self.sector.dim();
        let off = (0..d - 1).map(|n| self.sx[(n, n + 1)]).collect();
        TridiagonalOperator::new(vec![0.0; d], off).expect("sx dimensions are consistent")
    }
}

/// Builds `S_z`, `S_x`, `S₊` and `S₋` for `sector`.
pub fn build_spin_operators(sector: SpinSector) -> SpinOperatorSet {
    let d = sector.dim();
    let mut splus = DenseMatrix::zeros(d, d);
    for n in 0..d - 1 {
        splus[(n + 1, n)] = sector.raising_element(n);
    }
    let sminus = splus.transpose();
    let sx = (&splus + &sminus).scale(0.5);
    SpinOperatorSet {
        sector,
        sz: sector.m_values(),
        sx,
        splus,
        sminus,
    }
}

/// Spin-flip operator `Π = exp(iπ(S_x − j))`, built from the spectral
/// decomposition of `S_x`.
pub fn parity_operator(sector: SpinSector) -> ComplexMatrix {
    let ops = build_spin_operators(sector);
    let spec = diagonalize(&ops.sx_tridiagonal()).expect("S_x eigensolve cannot fail to converge");
    let d = sector.dim();
    let j = sector.j();
    let phases: Vec<Complex64> = spec
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, PI * (lambda - j)))
        .collect();
    let mut pi = ComplexMatrix::zeros(d, d);
    for (k, phase) in phases.iter().enumerate() {
        let v = spec.eigenvector(k);
        for r in 0..d {
            if v[r] == 0.0 {
                continue;
            }
            for c in 0..d {
                pi[(r, c)] += phase * (v[r] * v[c]);
            }
        }
    }
    pi
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sector(n: usize) -> SpinSector {
        SpinSector::new(n).unwrap()
    }

    #[test]
    fn rejects_empty_sector() {
        assert!(matches!(
            SpinSector::new(0),
            Err(Error::InvalidParameter { name: "N", .. })
        ));
    }

    #[test]
    fn basis_convention_is_bijective() {
        let s = sector(5);
        assert_eq!(s.dim(), 6);
        assert_eq!(s.m_of_index(0), -2.5);
        assert_eq!(s.m_of_index(5), 2.5);
        for n in 0..s.dim() {
            assert_eq!(s.index_of_m(s.m_of_index(n)), Some(n));
        }
        assert_eq!(s.index_of_m(3.5), None);
        assert_eq!(s.index_of_m(0.0), None);
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let ops = build_spin_operators(sector(1));
        assert_eq!(ops.sz, vec![-0.5, 0.5]);
        assert_eq!(ops.sx[(0, 1)], 0.5);
        assert_eq!(ops.sx[(1, 0)], 0.5);
        assert_eq!(ops.sx[(0, 0)], 0.0);
    }

    #[test]
    fn spin_one_ladder() {
        let ops = build_spin_operators(sector(2));
        assert_eq!(ops.sz, vec![-1.0, 0.0, 1.0]);
        assert_eq!(ops.splus[(1, 0)], 2f64.sqrt());
        assert_eq!(ops.splus[(2, 1)], 2f64.sqrt());
        assert_eq!(ops.sminus[(0, 1)], 2f64.sqrt());
    }

    #[test]
    fn spin_two_lowest_raising_element() {
        // sqrt(j(j+1) - m(m+1)) at j = 2, m = -2
        let ops = build_spin_operators(sector(4));
        assert_eq!(ops.splus[(1, 0)], 2.0);
    }

    #[test]
    fn spin_half_parity_is_pauli_x() {
        let pi = parity_operator(sector(1));
        let expected = [[0.0, 1.0], [1.0, 0.0]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((pi[(r, c)] - Complex64::new(expected[r][c], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn commutators_up_to_n_400() {
        for n in [1, 2, 3, 10, 57, 400] {
            let ops = build_spin_operators(sector(n));
            let sz = ops.sz_matrix();
            let plus = &sz.commutator(&ops.splus) - &ops.splus;
            let minus = &sz.commutator(&ops.sminus) + &ops.sminus;
            let pm = &ops.splus.commutator(&ops.sminus) - &sz.scale(2.0);
            // entries of the products grow like j², so compare relative to that
            let scale = ops.splus.max_abs().powi(2).max(1.0);
            assert!(plus.max_abs() < 1e-12 * scale, "N={n}");
            assert!(minus.max_abs() < 1e-12 * scale, "N={n}");
            assert!(pm.max_abs() < 1e-12 * scale, "N={n}");
        }
    }

    #[test]
    fn casimir() {
        for n in [1, 2, 7, 40, 200] {
            let s = sector(n);
            let ops = build_spin_operators(s);
            let sz = ops.sz_matrix();
            let a = ops.sy_imag();
            // S_y^2 = (iA)^2 = -A^2
            let sum = &(&(&ops.sx * &ops.sx) - &(&a * &a)) + &(&sz * &sz);
            let target = DenseMatrix::identity(s.dim()).scale(s.j() * (s.j() + 1.0));
            assert!((&sum - &target).max_abs() < 1e-10, "N={n}");
        }
    }

    #[test]
    fn hermitian_storage() {
        let ops = build_spin_operators(sector(9));
        assert!(ops.sx.is_symmetric());
        assert_eq!(ops.sminus, ops.splus.transpose());
        let a = ops.sy_imag();
        // A antisymmetric <=> S_y = iA Hermitian
        assert_eq!(a, a.transpose().scale(-1.0));
    }

    #[test]
    fn parity_maps_poles_into_each_other() {
        let s = sector(6);
        let pi = parity_operator(s);
        let mut down = vec![Complex64::new(0.0, 0.0); s.dim()];
        down[0] = Complex64::new(1.0, 0.0);
        let image = pi.matvec(&down);
        assert!((image[s.dim() - 1].norm() - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn parity_is_an_involution(n in 1usize..40) {
            let s = sector(n);
            let pi = parity_operator(s);
            let sq = &pi * &pi;
            prop_assert!((&sq - &ComplexMatrix::identity(s.dim())).max_abs() < 1e-12);
            let unit = &pi * &pi.adjoint();
            prop_assert!((&unit - &ComplexMatrix::identity(s.dim())).max_abs() < 1e-12);
        }
    }
}
