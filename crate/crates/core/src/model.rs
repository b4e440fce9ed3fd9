//! The LMG Hamiltonian `H(h) = −(J/N) S_z² − h S_x`, quench protocols, and
//! the closed-form Lanczos coefficients for quenches out of `h₀ = 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::StateVector;
use crate::error::{Error, Result};
use crate::spectral::{diagonalize, SpectralDecomposition};
use crate::spin::SpinSector;
use crate::tridiagonal::TridiagonalOperator;

/// Relative level spacing below which the two lowest levels of `H(h₀)` are
/// treated as a degenerate doublet when preparing a numerical ground state.
pub const GROUND_DOUBLET_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Ferromagnetic coupling; time is measured in units of `1/J`.
    pub coupling: f64,
    /// Transverse field along `x`.
    pub field: f64,
}

impl ModelParams {
    pub fn new(coupling: f64, field: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::invalid(
                "J",
                format!("must be positive and finite, got {coupling}"),
            ));
        }
        if !(field.is_finite() && field >= 0.0) {
            return Err(Error::invalid(
                "h",
                format!("must be non-negative and finite, got {field}"),
            ));
        }
        Ok(Self { coupling, field })
    }

    /// `J = 1` with field `h`.
    pub fn with_field(field: f64) -> Result<Self> {
        Self::new(1.0, field)
    }
}

/// Which state the system is prepared in before the quench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `|↓⟩_z`, basis index 0.
    #[default]
    #[serde(alias = "polarized-down")]
    Down,
    /// `|↑⟩_z`, basis index `2j`.
    #[serde(alias = "polarized-up")]
    Up,
    /// Lowest eigenvector of `H(h₀)`, symmetry-broken towards `|↓⟩_z` when the
    /// lowest doublet is degenerate.
    #[serde(alias = "numerical-ground")]
    Ground,
}

impl InitialState {
    pub fn is_polarized(self) -> bool {
        matches!(self, InitialState::Down | InitialState::Up)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            InitialState::Down => "down",
            InitialState::Up => "up",
            InitialState::Ground => "ground",
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitialState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "down" | "polarized-down" | "polarized_down" => Ok(InitialState::Down),
            "up" | "polarized-up" | "polarized_up" => Ok(InitialState::Up),
            "ground" | "numerical-ground" | "numerical_ground" => Ok(InitialState::Ground),
            other => Err(Error::invalid(
                "initial-state",
                format!("expected one of down, up, ground; got `{other}`"),
            )),
        }
    }
}

/// A sudden change `h₀ → h_f` at fixed coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    pub initial: ModelParams,
    pub fin: ModelParams,
    pub initial_state: InitialState,
}

impl QuenchSpec {
    pub fn new(coupling: f64, h0: f64, hf: f64, initial_state: InitialState) -> Result<Self> {
        let initial = ModelParams::new(coupling, h0).map_err(rename_field("h0"))?;
        let fin = ModelParams::new(coupling, hf).map_err(rename_field("hf"))?;
        Ok(Self {
            initial,
            fin,
            initial_state,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.initial.coupling
    }

    pub fn h0(&self) -> f64 {
        self.initial.field
    }

    pub fn hf(&self) -> f64 {
        self.fin.field
    }
}

fn rename_field(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidParameter { name: "h", reason } => Error::InvalidParameter { name, reason },
        other => other,
    }
}

/// `H = −(J/N) S_z² − h S_x` in the `m_z` basis.
pub fn build_hamiltonian(sector: SpinSector, params: ModelParams) -> TridiagonalOperator {
    let n_sites = sector.sites() as f64;
    let diag = (0..sector.dim())
        .map(|n| {
            let m = sector.m_of_index(n);
            -(params.coupling / n_sites) * m * m
        })
        .collect();
    let offdiag = (0..sector.sites())
        .map(|n| -0.5 * params.field * sector.raising_element(n))
        .collect();
    TridiagonalOperator::new(diag, offdiag).expect("LMG Hamiltonian has consistent shape")
}

/// Pre-quench state. For [`InitialState::Ground`] the eigendecomposition of
/// `H(h₀)` is needed; pass it in if it is already available.
pub fn initial_state(
    sector: SpinSector,
    quench: &QuenchSpec,
    prequench: Option<&SpectralDecomposition>,
) -> Result<StateVector> {
    let d = sector.dim();
    match quench.initial_state {
        InitialState::Down => Ok(StateVector::basis(d, 0)),
        InitialState::Up => Ok(StateVector::basis(d, d - 1)),
        InitialState::Ground => {
            let owned;
            let spec = match prequench {
                Some(s) => s,
                None => {
                    owned = diagonalize(&build_hamiltonian(sector, quench.initial))?;
                    &owned
                }
            };
            let scale = build_hamiltonian(sector, quench.initial).max_abs();
            Ok(symmetry_broken_ground(sector, spec, scale))
        }
    }
}

/// Lowest eigenvector, or, for a near-degenerate lowest doublet, the state in
/// the doublet with the most negative `⟨S_z⟩`.
///
/// Inside the doublet `S_z` is diagonalized as a 2×2 matrix. When the solver
/// returns the two parity eigenstates this is exactly `(v₁ ± v₂)/√2`; it also
/// stays correct if the solver returns an arbitrary rotation of the doublet.
fn symmetry_broken_ground(
    sector: SpinSector,
    spec: &SpectralDecomposition,
    scale: f64,
) -> StateVector {
    let v1 = spec.eigenvector(0);
    let degenerate = spec.dim() > 1
        && spec.eigenvalues[1] - spec.eigenvalues[0]
            < GROUND_DOUBLET_GAP * scale.max(f64::MIN_POSITIVE);
    if !degenerate {
        return StateVector::from_real(&v1);
    }
    let v2 = spec.eigenvector(1);
    let m = sector.m_values();
    let quad = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).zip(&m).map(|((x, y), mz)| x * y * mz).sum()
    };
    let (s11, s12, s22) = (quad(&v1, &v1), quad(&v1, &v2), quad(&v2, &v2));
    // lowest eigenvector of [[s11, s12], [s12, s22]]
    let half_diff = 0.5 * (s11 - s22);
    let radius = half_diff.hypot(s12);
    // eigenvalue (s11 + s22)/2 − radius; pick the row without cancellation
    let (x, y) = if radius == 0.0 {
        (1.0, 0.0)
    } else if half_diff >= 0.0 {
        (s12, -(half_diff + radius))
    } else {
        (radius - half_diff, -s12)
    };
    let len = x.hypot(y);
    let (c, s) = (x / len, y / len);
    let combined: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| c * a + s * b).collect();
    let norm = combined.iter().map(|x| x * x).sum::<f64>().sqrt();
    StateVector::new(
        combined
            .iter()
            .map(|x| Complex64::new(x / norm, 0.0))
            .collect(),
    )
}

/// Closed-form off-diagonal Lanczos coefficient `b_n = (h_f/2)√(n(2j − n + 1))`
/// for a polarized start under `H(h_f)`, valid for `1 ≤ n ≤ 2j`.
pub fn analytic_lanczos_b(sector: SpinSector, hf: f64, n: usize) -> Result<f64> {
    let top = sector.sites();
    if n < 1 || n > top {
        return Err(Error::IndexOutOfRange {
            index: n,
            min: 1,
            max: top,
        });
    }
    // identical integer radicand to the Hamiltonian's ladder element
    Ok(0.5 * hf * ((n * (top - n + 1)) as f64).sqrt())
}

/// Closed-form diagonal Lanczos coefficient `a_n = −(J/N)(−j + n)²`, valid for
/// `0 ≤ n ≤ 2j`.
pub fn analytic_lanczos_a(sector: SpinSector, coupling: f64, n: usize) -> Result<f64> {
    let top = sector.sites();
    if n > top {
        return Err(Error::IndexOutOfRange {
            index: n,
            min: 0,
            max: top,
        });
    }
    let m = sector.m_of_index(n);
    Ok(-(coupling / sector.sites() as f64) * m * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ComplexMatrix, DenseMatrix};
    use crate::spin::{build_spin_operators, parity_operator};
    use proptest::prelude::*;

    fn sector(n: usize) -> SpinSector {
        SpinSector::new(n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 0.1).is_err());
        assert!(ModelParams::new(1.0, -0.1).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
        let err = QuenchSpec::new(1.0, -1.0, 0.5, InitialState::Down).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "h0", .. }));
        let err = QuenchSpec::new(1.0, 0.0, -0.5, InitialState::Down).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "hf", .. }));
    }

    #[test]
    fn parses_initial_state_names() {
        assert_eq!("down".parse::<InitialState>().unwrap(), InitialState::Down);
        assert_eq!(
            "polarized_up".parse::<InitialState>().unwrap(),
            InitialState::Up
        );
        assert_eq!(
            "numerical-ground".parse::<InitialState>().unwrap(),
            InitialState::Ground
        );
        assert!("sideways".parse::<InitialState>().is_err());
    }

    #[test]
    fn hamiltonian_n2_zero_field() {
        let h = build_hamiltonian(sector(2), ModelParams::with_field(0.0).unwrap());
        assert_eq!(h.diag(), &[-0.5, 0.0, -0.5]);
        assert!(h.offdiag().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn hamiltonian_n1_unit_field() {
        let h = build_hamiltonian(sector(1), ModelParams::with_field(1.0).unwrap());
        assert_eq!(h.diag(), &[-0.25, -0.25]);
        assert_eq!(h.offdiag(), &[-0.5]);
    }

    #[test]
    fn hamiltonian_n2_half_field() {
        let h = build_hamiltonian(sector(2), ModelParams::with_field(0.5).unwrap());
        let expected = -0.25 * 2f64.sqrt();
        for &x in h.offdiag() {
            assert!((x - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_operator_assembly() {
        for (n, j, h) in [
            (1, 1.0, 0.7),
            (6, 2.0, 0.3),
            (31, 0.5, 1.4),
            (200, 1.0, 0.8),
        ] {
            let s = sector(n);
            let ops = build_spin_operators(s);
            let sz = ops.sz_matrix();
            let assembled = &(&sz * &sz).scale(-j / n as f64) - &ops.sx.scale(h);
            let built = build_hamiltonian(s, ModelParams::new(j, h).unwrap()).to_dense();
            assert!((&assembled - &built).max_abs() < 1e-14, "N={n}");
        }
    }

    #[test]
    fn polarized_states() {
        let q = QuenchSpec::new(1.0, 0.0, 0.5, InitialState::Down).unwrap();
        let psi = initial_state(sector(2), &q, None).unwrap();
        assert_eq!(psi.real_parts(), vec![1.0, 0.0, 0.0]);
        let q = QuenchSpec::new(1.0, 0.0, 0.5, InitialState::Up).unwrap();
        let psi = initial_state(sector(200), &q, None).unwrap();
        assert_eq!(psi.amplitudes()[200], Complex64::new(1.0, 0.0));
        assert_eq!(
            psi.amplitudes().iter().filter(|a| a.norm() > 0.0).count(),
            1
        );
    }

    #[test]
    fn ground_at_zero_field_is_south_pole() {
        let q = QuenchSpec::new(1.0, 0.0, 0.5, InitialState::Ground).unwrap();
        let psi = initial_state(sector(2), &q, None).unwrap();
        let p: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        assert!(p[1] < 1e-15);
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_breaks_symmetry_at_small_field() {
        let s = sector(40);
        let q = QuenchSpec::new(1.0, 0.1, 0.3, InitialState::Ground).unwrap();
        let psi = initial_state(s, &q, None).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let sz: f64 = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, a)| s.m_of_index(n) * a.norm_sqr())
            .sum();
        // mean-field polarization at h0 = 0.1 is close to -j
        assert!(sz < -0.9 * s.j(), "S_z = {sz}");
        // still an eigenvector of H(h0) to the doublet splitting
        let h = build_hamiltonian(s, q.initial);
        let e = h.expectation(psi.amplitudes());
        let spec = diagonalize(&h).unwrap();
        assert!((e - spec.eigenvalues[0]).abs() < 1e-8);
    }

    #[test]
    fn ground_without_doublet_is_lowest_vector() {
        // paramagnetic h0: unique ground state, parity-symmetric
        let s = sector(20);
        let q = QuenchSpec::new(1.0, 2.0, 0.3, InitialState::Ground).unwrap();
        let psi = initial_state(s, &q, None).unwrap();
        let spec = diagonalize(&build_hamiltonian(s, q.initial)).unwrap();
        let v = spec.eigenvector(0);
        let overlap: f64 = v.iter().zip(psi.real_parts()).map(|(a, b)| a * b).sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_b_values() {
        let b = analytic_lanczos_b(sector(2), 0.5, 1).unwrap();
        assert!((b - 0.353_553_390_593_273_8).abs() < 1e-15);
        let b = analytic_lanczos_b(sector(200), 0.8, 100).unwrap();
        assert!((b - 0.4 * (100.0f64 * 101.0).sqrt()).abs() < 1e-12);
        assert!((b - 40.199).abs() < 1e-3);
        for n in 1..=10 {
            assert_eq!(analytic_lanczos_b(sector(10), 0.0, n).unwrap(), 0.0);
        }
        assert!(analytic_lanczos_b(sector(4), 0.5, 0).is_err());
        assert!(analytic_lanczos_b(sector(4), 0.5, 5).is_err());
    }

    #[test]
    fn analytic_a_values() {
        assert_eq!(analytic_lanczos_a(sector(2), 1.0, 0).unwrap(), -0.5);
        assert_eq!(analytic_lanczos_a(sector(2), 1.0, 1).unwrap(), 0.0);
        assert_eq!(analytic_lanczos_a(sector(200), 1.0, 0).unwrap(), -50.0);
        assert_eq!(analytic_lanczos_a(sector(200), 2.0, 0).unwrap(), -100.0);
        assert!(analytic_lanczos_a(sector(2), 1.0, 3).is_err());
    }

    #[test]
    fn parity_commutes_with_hamiltonian() {
        for n in [1, 2, 5, 12, 30] {
            let s = sector(n);
            let pi = parity_operator(s);
            for h in [0.0, 0.3, 0.5, 1.7] {
                let ham = build_hamiltonian(s, ModelParams::with_field(h).unwrap())
                    .to_dense()
                    .to_complex();
                let comm = &(&pi * &ham) - &(&ham * &pi);
                assert!(comm.max_abs() < 1e-10, "N={n} h={h}");
            }
        }
    }

    /// Cyclic Jacobi eigenvalues of a dense symmetric matrix, independent of
    /// the tridiagonal QL path.
    fn jacobi_eigenvalues(mut a: DenseMatrix) -> Vec<f64> {
        let n = a.rows();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].powi(2))
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn real_part(m: &ComplexMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = m[(i, j)].re;
            }
        }
        out
    }

    #[test]
    fn spectrum_invariant_under_spin_flip() {
        for (n, h) in [(3, 0.2), (8, 0.45), (15, 0.9)] {
            let s = sector(n);
            let pi = parity_operator(s);
            let ham = build_hamiltonian(s, ModelParams::with_field(h).unwrap());
            let conj = &(&pi * &ham.to_dense().to_complex()) * &pi.adjoint();
            let imag = &conj - &real_part(&conj).to_complex();
            assert!(imag.max_abs() < 1e-10);
            let flipped = jacobi_eigenvalues(real_part(&conj));
            let direct = diagonalize(&ham).unwrap().eigenvalues;
            for (a, b) in flipped.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-10, "N={n}: {a} vs {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn analytic_b_is_palindromic(n in 1usize..300, hf in 0.0f64..2.0, k in 1usize..300) {
            let s = sector(n);
            let k = 1 + (k - 1) % n;
            let lhs = analytic_lanczos_b(s, hf, k).unwrap();
            let rhs = analytic_lanczos_b(s, hf, n - k + 1).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
