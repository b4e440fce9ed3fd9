//! Quench time series, long-time averages and `h_f` sweeps.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{expect_sz, rate_function, Propagator, StateVector, TimeGrid};
use crate::error::{Error, Result};
use crate::krylov::{
    ipr, lanczos, shannon_entropy, spread_complexity, Basis, EigenbasisProjector,
    KrylovDecomposition, DEFAULT_BREAKDOWN_TOL,
};
use crate::matrix::DenseMatrix;
use crate::model::{build_hamiltonian, initial_state, InitialState, ModelParams, QuenchSpec};
use crate::spectral::{diagonalize, SpectralDecomposition};
use crate::spin::SpinSector;
use crate::tridiagonal::TridiagonalOperator;

/// Observable channels of a [`TimeSeries`], in output column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Sz,
    Complexity,
    IprKrylov,
    IprEnergy,
    EntropyKrylov,
    EntropyEnergy,
    Loschmidt,
    Rate,
}

impl Channel {
    pub const ALL: [Channel; 8] = [
        Channel::Sz,
        Channel::Complexity,
        Channel::IprKrylov,
        Channel::IprEnergy,
        Channel::EntropyKrylov,
        Channel::EntropyEnergy,
        Channel::Loschmidt,
        Channel::Rate,
    ];

    /// Column name used in CSV/JSON output.
    pub fn column(self) -> &'static str {
        match self {
            Channel::Sz => "S_z",
            Channel::Complexity => "C_K",
            Channel::IprKrylov => "ipr_krylov",
            Channel::IprEnergy => "ipr_energy",
            Channel::EntropyKrylov => "entropy_krylov",
            Channel::EntropyEnergy => "entropy_energy",
            Channel::Loschmidt => "loschmidt",
            Channel::Rate => "rate",
        }
    }
}

/// Every observable of one quench, sampled on a time grid.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub sz: Vec<f64>,
    pub complexity: Vec<f64>,
    pub ipr_krylov: Vec<f64>,
    pub ipr_energy: Vec<f64>,
    pub entropy_krylov: Vec<f64>,
    pub entropy_energy: Vec<f64>,
    pub loschmidt: Vec<f64>,
    pub rate: Vec<f64>,
    pub krylov_dim: usize,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::Sz => &self.sz,
            Channel::Complexity => &self.complexity,
            Channel::IprKrylov => &self.ipr_krylov,
            Channel::IprEnergy => &self.ipr_energy,
            Channel::EntropyKrylov => &self.entropy_krylov,
            Channel::EntropyEnergy => &self.entropy_energy,
            Channel::Loschmidt => &self.loschmidt,
            Channel::Rate => &self.rate,
        }
    }

    /// Trapezoidal average of a channel over `[0, window]`.
    pub fn average(&self, channel: Channel, window: f64) -> Result<f64> {
        time_average(&self.times, self.channel(channel), window)
    }
}

/// All observables at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub sz: f64,
    pub complexity: f64,
    pub ipr_krylov: f64,
    pub ipr_energy: f64,
    pub entropy_krylov: f64,
    pub entropy_energy: f64,
    pub loschmidt: f64,
    pub rate: f64,
}

/// Everything a quench needs before sampling: both spectra, the initial
/// state, its Krylov basis and the change-of-basis maps.
#[derive(Debug, Clone)]
pub struct QuenchSetup {
    sector: SpinSector,
    quench: QuenchSpec,
    post_hamiltonian: TridiagonalOperator,
    post: SpectralDecomposition,
    pre: SpectralDecomposition,
    psi0: StateVector,
    krylov: KrylovDecomposition,
    coefficients: Vec<Complex64>,
    krylov_projector: EigenbasisProjector,
    energy_projector: EigenbasisProjector,
}

impl QuenchSetup {
    pub fn new(sector: SpinSector, quench: QuenchSpec, breakdown_tol: f64) -> Result<Self> {
        let pre = diagonalize(&build_hamiltonian(sector, quench.initial))?;
        Self::with_prequench(sector, quench, pre, breakdown_tol)
    }

    /// Same as [`QuenchSetup::new`] with the `H(h₀)` decomposition supplied,
    /// so sweeps over `h_f` diagonalize it once.
    pub fn with_prequench(
        sector: SpinSector,
        quench: QuenchSpec,
        pre: SpectralDecomposition,
        breakdown_tol: f64,
    ) -> Result<Self> {
        let psi0 = initial_state(sector, &quench, Some(&pre))?;
        let post_hamiltonian = build_hamiltonian(sector, quench.fin);
        let post = diagonalize(&post_hamiltonian)?;
        let krylov = lanczos(&post_hamiltonian, &psi0, breakdown_tol)?;
        let coefficients = post.coefficients(psi0.amplitudes());
        let krylov_projector = EigenbasisProjector::new(Basis::Krylov(&krylov), &post);
        let energy_projector = EigenbasisProjector::new(Basis::PrequenchEnergy(&pre), &post);
        Ok(Self {
            sector,
            quench,
            post_hamiltonian,
            post,
            pre,
            psi0,
            krylov,
            coefficients,
            krylov_projector,
            energy_projector,
        })
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn quench(&self) -> &QuenchSpec {
        &self.quench
    }

    pub fn post_hamiltonian(&self) -> &TridiagonalOperator {
        &self.post_hamiltonian
    }

    pub fn post_spectrum(&self) -> &SpectralDecomposition {
        &self.post
    }

    pub fn pre_spectrum(&self) -> &SpectralDecomposition {
        &self.pre
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.psi0
    }

    pub fn krylov(&self) -> &KrylovDecomposition {
        &self.krylov
    }

    pub fn propagator(&self) -> Propagator<'_> {
        Propagator::new(&self.post, &self.psi0)
    }

    fn eigen_amplitudes_at(&self, t: f64) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .zip(&self.post.eigenvalues)
            .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    pub fn sample(&self, t: f64) -> Result<Sample> {
        let phi = self.eigen_amplitudes_at(t);
        let psi = StateVector::new(self.post.synthesize(&phi));
        let krylov = self.krylov_projector.project(&phi)?;
        let energy = self.energy_projector.project(&phi)?;
        let amplitude: Complex64 = self
            .coefficients
            .iter()
            .zip(&phi)
            .map(|(c, p)| c.conj() * p)
            .sum();
        let echo = amplitude.norm_sqr().clamp(0.0, 1.0);
        Ok(Sample {
            sz: expect_sz(&psi, self.sector),
            complexity: spread_complexity(&krylov),
            ipr_krylov: ipr(&krylov),
            ipr_energy: ipr(&energy),
            entropy_krylov: shannon_entropy(&krylov),
            entropy_energy: shannon_entropy(&energy),
            loschmidt: echo,
            rate: rate_function(echo, self.sector.sites()),
        })
    }

    /// Samples every channel on `grid`; samples are computed in parallel and
    /// collected in grid order.
    pub fn run(&self, grid: TimeGrid) -> Result<TimeSeries> {
        let times = grid.times();
        let samples: Vec<Sample> = times
            .par_iter()
            .map(|&t| self.sample(t))
            .collect::<Result<_>>()?;
        let pick = |f: fn(&Sample) -> f64| samples.iter().map(f).collect::<Vec<_>>();
        Ok(TimeSeries {
            sz: pick(|s| s.sz),
            complexity: pick(|s| s.complexity),
            ipr_krylov: pick(|s| s.ipr_krylov),
            ipr_energy: pick(|s| s.ipr_energy),
            entropy_krylov: pick(|s| s.entropy_krylov),
            entropy_energy: pick(|s| s.entropy_energy),
            loschmidt: pick(|s| s.loschmidt),
            rate: pick(|s| s.rate),
            times,
            krylov_dim: self.krylov.dim(),
        })
    }

    /// Trapezoidal averages of `S_z` and `C_K` over `[0, window]` on `grid`,
    /// evaluated in closed form from the spectrum instead of by sampling.
    ///
    /// Each expectation value is `Σ_kl c̄_k c_l O_kl e^{i(E_k−E_l)t}`; the
    /// trapezoid rule applied to each exponential is a geometric sum, so the
    /// result equals [`time_average`] of the sampled channel up to roundoff
    /// while costing `O(D³)` instead of `O(D²·samples)`.
    pub fn trapezoid_averages(&self, grid: TimeGrid, window: f64) -> Result<(f64, f64)> {
        let weights = TrapezoidWeights::new(grid, window)?;
        let d = self.sector.dim();
        let m = self.sector.m_values();
        let sz_rows: Vec<&[f64]> = (0..d).map(|r| self.post.eigenvectors.row(r)).collect();
        let sz_op = weighted_gram(&sz_rows, &m);
        let chain: Vec<f64> = (0..self.krylov.dim()).map(|n| n as f64).collect();
        let krylov_rows: Vec<&[f64]> = self
            .krylov_projector
            .overlaps()
            .iter()
            .map(Vec::as_slice)
            .collect();
        let c_op = weighted_gram(&krylov_rows, &chain);

        let e = &self.post.eigenvalues;
        let c = &self.coefficients;
        let mut sz = 0.0;
        let mut complexity = 0.0;
        for k in 0..d {
            for l in 0..d {
                let w = weights.mean_phase(e[k] - e[l]);
                let pair = (c[k].conj() * c[l] * w).re;
                sz += pair * sz_op[(k, l)];
                complexity += pair * c_op[(k, l)];
            }
        }
        Ok((sz, complexity))
    }
}

/// `Σ_n w_n row_n row_nᵀ`.
fn weighted_gram(rows: &[&[f64]], weights: &[f64]) -> DenseMatrix {
    let d = rows.first().map_or(0, |r| r.len());
    let mut out = DenseMatrix::zeros(d, d);
    for (row, &w) in rows.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        for k in 0..d {
            let wk = w * row[k];
            if wk == 0.0 {
                continue;
            }
            for l in 0..d {
                out[(k, l)] += wk * row[l];
            }
        }
    }
    out
}

/// Trapezoid-rule average of `e^{iωt}` over `[0, window]` for the samples of a grid.
#[derive(Debug, Clone, Copy)]
struct TrapezoidWeights {
    dt: f64,
    /// samples with `t ≤ window`
    count: usize,
    /// last sample time
    last: f64,
    window: f64,
}

impl TrapezoidWeights {
    fn new(grid: TimeGrid, window: f64) -> Result<Self> {
        let (count, last) = window_extent(grid.dt(), grid.samples(), window)?;
        Ok(Self {
            dt: grid.dt(),
            count,
            last,
            window,
        })
    }

    fn mean_phase(&self, omega: f64) -> Complex64 {
        let f = |t: f64| Complex64::from_polar(1.0, omega * t);
        let theta = (omega * self.dt).sin().atan2((omega * self.dt).cos());
        let s = self.count as f64;
        // Σ_{s=0}^{S−1} e^{iθs}
        let sum = if theta == 0.0 {
            Complex64::new(s, 0.0)
        } else {
            Complex64::from_polar(
                (s * theta / 2.0).sin() / (theta / 2.0).sin(),
                (s - 1.0) * theta / 2.0,
            )
        };
        let mut integral = (sum - 0.5 * (f(0.0) + f(self.last))) * self.dt;
        if self.window > self.last {
            // sampled averaging interpolates linearly inside the partial step
            let frac = (self.window - self.last) / self.dt;
            let f_end = f(self.last) + frac * (f(self.last + self.dt) - f(self.last));
            integral += 0.5 * (self.window - self.last) * (f(self.last) + f_end);
        }
        integral / self.window
    }
}

/// Number of grid samples inside `[0, window]` and the last such time.
fn window_extent(dt: f64, samples: usize, window: f64) -> Result<(usize, f64)> {
    let span = (samples - 1) as f64 * dt;
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::invalid(
            "T",
            format!("averaging window must be positive, got {window}"),
        ));
    }
    if window > span * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "T",
            format!("averaging window {window} exceeds the sampled span {span}"),
        ));
    }
    let count = ((window / dt * (1.0 + 1e-12)).floor() as usize + 1).min(samples);
    let last = (count - 1) as f64 * dt;
    if count < 2 {
        return Err(Error::invalid(
            "T",
            "averaging window is shorter than one time step",
        ));
    }
    Ok((count, last))
}

/// Builds and runs one quench with the default breakdown tolerance.
pub fn run_quench(sector: SpinSector, quench: QuenchSpec, grid: TimeGrid) -> Result<TimeSeries> {
    QuenchSetup::new(sector, quench, DEFAULT_BREAKDOWN_TOL)?.run(grid)
}

/// `(1/T)∫₀ᵀ x(t) dt` by the trapezoid rule on the samples; when `T` falls
/// between samples the last interval is linearly interpolated.
pub fn time_average(times: &[f64], values: &[f64], window: f64) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::invalid(
            "values",
            "channel length differs from the time grid",
        ));
    }
    if times.len() < 2 {
        return Err(Error::invalid("times", "need at least two samples"));
    }
    let span = times[times.len() - 1] - times[0];
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::invalid(
            "T",
            format!("averaging window must be positive, got {window}"),
        ));
    }
    if window > span * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "T",
            format!("averaging window {window} exceeds the sampled span {span}"),
        ));
    }
    let end = times[0] + window.min(span);
    let mut integral = 0.0;
    for i in 1..times.len() {
        let (t0, t1) = (times[i - 1], times[i]);
        if t0 >= end {
            break;
        }
        if t1 <= end * (1.0 + 1e-15) {
            integral += 0.5 * (t1 - t0) * (values[i - 1] + values[i]);
        } else {
            let frac = (end - t0) / (t1 - t0);
            let v_end = values[i - 1] + frac * (values[i] - values[i - 1]);
            integral += 0.5 * (end - t0) * (values[i - 1] + v_end);
            break;
        }
    }
    Ok(integral / window)
}

/// Second-order finite-difference derivative: centered in the interior,
/// one-sided three-point stencils at both ends. Handles non-uniform spacing.
pub fn derivative(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::invalid("values", "length differs from the grid"));
    }
    if n < 3 {
        return Err(Error::invalid("grid", "need at least three points"));
    }
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let hs = x[i] - x[i - 1];
        let hd = x[i + 1] - x[i];
        out[i] = (hs * hs * y[i + 1] + (hd * hd - hs * hs) * y[i] - hd * hd * y[i - 1])
            / (hs * hd * (hd + hs));
    }
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
        - h1 / (h2 * (h1 + h2)) * y[2];
    let (h1, h2) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    out[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2]
        + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    Ok(out)
}

/// First sampled time at which `values` drops strictly below `threshold`.
pub fn first_time_below(times: &[f64], values: &[f64], threshold: f64) -> Option<f64> {
    times
        .iter()
        .zip(values)
        .find(|(_, &v)| v < threshold)
        .map(|(&t, _)| t)
}

/// Uniform grid of `steps` points from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid("hf-steps", "need at least two points"));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(Error::invalid(
            "hf-max",
            format!("range [{min}, {max}] is empty or degenerate"),
        ));
    }
    let step = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + i as f64 * step
            }
        })
        .collect())
}

/// Fixed settings of an `h_f` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub coupling: f64,
    pub h0: f64,
    pub initial_state: InitialState,
    pub grid: TimeGrid,
    /// Averaging window `T`.
    pub window: f64,
    pub breakdown_tol: f64,
}

impl SweepSpec {
    /// `J = 1`, polarized-down start, `T = 150`, `dt = 0.01`.
    pub fn new(h0: f64) -> Self {
        Self {
            coupling: 1.0,
            h0,
            initial_state: InitialState::Down,
            grid: TimeGrid::default(),
            window: TimeGrid::DEFAULT_T_MAX,
            breakdown_tol: DEFAULT_BREAKDOWN_TOL,
        }
    }
}

/// Order-parameter curves over `h_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub hf_grid: Vec<f64>,
    /// `C̄/j`
    pub cbar_over_j: Vec<f64>,
    /// `S̄_z`
    pub szbar: Vec<f64>,
    /// `dC̄/dh_f`, unnormalized
    pub dcbar_dhf: Vec<f64>,
    /// `h_f` at the largest `|dC̄/dh_f|`.
    pub hc_estimate: f64,
    pub j: f64,
}

impl SweepResult {
    pub fn szbar_over_j(&self) -> Vec<f64> {
        self.szbar.iter().map(|s| s / self.j).collect()
    }

    pub fn peak_derivative(&self) -> f64 {
        self.dcbar_dhf.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// Time-averaged complexity and magnetization for every `h_f` in `hf_grid`.
/// Points run in parallel; results keep grid order.
pub fn sweep_hf(sector: SpinSector, spec: &SweepSpec, hf_grid: &[f64]) -> Result<SweepResult> {
    if hf_grid.len() < 5 {
        return Err(Error::invalid(
            "hf-steps",
            format!("a sweep needs at least 5 points, got {}", hf_grid.len()),
        ));
    }
    if hf_grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::invalid("hf", "grid must be strictly ascending"));
    }
    // validate the window up front so it reports as a parameter error
    window_extent(spec.grid.dt(), spec.grid.samples(), spec.window)?;
    let pre = diagonalize(&build_hamiltonian(
        sector,
        ModelParams::new(spec.coupling, spec.h0).map_err(|e| match e {
            Error::InvalidParameter { name: "h", reason } => {
                Error::InvalidParameter { name: "h0", reason }
            }
            other => other,
        })?,
    ))?;
    let points: Vec<(f64, f64)> = hf_grid
        .par_iter()
        .map(|&hf| {
            let run = || -> Result<(f64, f64)> {
                let quench = QuenchSpec::new(spec.coupling, spec.h0, hf, spec.initial_state)?;
                let setup =
                    QuenchSetup::with_prequench(sector, quench, pre.clone(), spec.breakdown_tol)?;
                setup.trapezoid_averages(spec.grid, spec.window)
            };
            run().map_err(|source| Error::SweepPoint {
                hf,
                source: Box::new(source),
            })
        })
        .collect::<Result<_>>()?;
    let j = sector.j();
    let szbar: Vec<f64> = points.iter().map(|p| p.0).collect();
    let cbar: Vec<f64> = points.iter().map(|p| p.1).collect();
    let dcbar_dhf = derivative(hf_grid, &cbar)?;
    let peak = dcbar_dhf.iter().enumerate().fold(0, |best, (i, d)| {
        if d.abs() > dcbar_dhf[best].abs() {
            i
        } else {
            best
        }
    });
    Ok(SweepResult {
        hf_grid: hf_grid.to_vec(),
        cbar_over_j: cbar.iter().map(|c| c / j).collect(),
        szbar,
        dcbar_dhf,
        hc_estimate: hf_grid[peak],
        j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sector(n: usize) -> SpinSector {
        SpinSector::new(n).unwrap()
    }

    #[test]
    fn stationary_quench() {
        let q = QuenchSpec::new(1.0, 0.0, 0.0, InitialState::Down).unwrap();
        let grid = TimeGrid::new(5.0, 0.1).unwrap();
        let ts = run_quench(sector(10), q, grid).unwrap();
        assert_eq!(ts.len(), 51);
        assert_eq!(ts.krylov_dim, 1);
        for i in 0..ts.len() {
            assert!((ts.sz[i] + 5.0).abs() < 1e-14);
            assert!(ts.complexity[i].abs() < 1e-14);
            assert!((ts.loschmidt[i] - 1.0).abs() < 1e-14);
            assert!(ts.rate[i].abs() < 1e-14);
        }
    }

    #[test]
    fn average_of_constant_and_sine() {
        let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.005).collect();
        let ones = vec![3.25; times.len()];
        assert!((time_average(&times, &ones, 5.0).unwrap() - 3.25).abs() < 1e-13);
        let sine: Vec<f64> = times.iter().map(|t| (2.0 * PI * t).sin()).collect();
        assert!(time_average(&times, &sine, 5.0).unwrap().abs() < 1e-6);
        assert!(time_average(&times, &sine, 2.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn average_window_validation() {
        let times = [0.0, 1.0, 2.0];
        let v = [1.0, 1.0, 1.0];
        assert!(time_average(&times, &v, 3.0).is_err());
        assert!(time_average(&times, &v, 0.0).is_err());
        assert!(time_average(&times, &v[..2], 1.0).is_err());
        // partial last interval of a linear ramp is exact
        let ramp = [0.0, 1.0, 2.0];
        assert!((time_average(&times, &ramp, 1.5).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn derivative_is_exact_on_quadratics() {
        let x = [0.0, 0.1, 0.25, 0.3, 0.5, 0.8];
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t * t - t + 1.0).collect();
        let d = derivative(&x, &y).unwrap();
        for (t, di) in x.iter().zip(&d) {
            assert!((di - (4.0 * t - 1.0)).abs() < 1e-12, "{t}: {di}");
        }
    }

    #[test]
    fn grid_construction() {
        let g = uniform_grid(0.05, 1.0, 96).unwrap();
        assert_eq!(g.len(), 96);
        assert_eq!(g[95], 1.0);
        assert!((g[45] - 0.5).abs() < 1e-12);
        assert!(uniform_grid(0.5, 0.5, 10).is_err());
        assert!(uniform_grid(0.1, 0.5, 1).is_err());
    }

    #[test]
    fn spectral_average_matches_sampled() {
        for (n, h0, hf, state) in [
            (12, 0.0, 0.3, InitialState::Down),
            (15, 0.0, 0.8, InitialState::Up),
            (20, 0.2, 0.6, InitialState::Ground),
        ] {
            let q = QuenchSpec::new(1.0, h0, hf, state).unwrap();
            let setup = QuenchSetup::new(sector(n), q, DEFAULT_BREAKDOWN_TOL).unwrap();
            let grid = TimeGrid::new(20.0, 0.05).unwrap();
            let ts = setup.run(grid).unwrap();
            for window in [20.0, 13.37] {
                let (sz, c) = setup.trapezoid_averages(grid, window).unwrap();
                let sz_s = ts.average(Channel::Sz, window).unwrap();
                let c_s = ts.average(Channel::Complexity, window).unwrap();
                assert!((sz - sz_s).abs() < 1e-10, "N={n}: {sz} vs {sz_s}");
                assert!((c - c_s).abs() < 1e-10, "N={n}: {c} vs {c_s}");
            }
        }
    }

    #[test]
    fn sweep_rejects_short_or_unsorted_grids() {
        let spec = SweepSpec {
            grid: TimeGrid::new(10.0, 0.1).unwrap(),
            window: 10.0,
            ..SweepSpec::new(0.0)
        };
        assert!(sweep_hf(sector(4), &spec, &[0.1, 0.2, 0.3, 0.4]).is_err());
        assert!(sweep_hf(sector(4), &spec, &[0.1, 0.3, 0.2, 0.4, 0.5]).is_err());
        let long = SweepSpec {
            window: 11.0,
            ..spec
        };
        assert!(sweep_hf(sector(4), &long, &[0.1, 0.2, 0.3, 0.4, 0.5]).is_err());
    }

    #[test]
    fn small_sweep_shape() {
        let spec = SweepSpec {
            grid: TimeGrid::new(30.0, 0.05).unwrap(),
            window: 30.0,
            ..SweepSpec::new(0.0)
        };
        let grid = uniform_grid(0.1, 1.0, 10).unwrap();
        let s = sweep_hf(sector(10), &spec, &grid).unwrap();
        assert_eq!(s.cbar_over_j.len(), 10);
        assert!(s.cbar_over_j.iter().all(|c| (0.0..=2.0).contains(c)));
        assert!(s.hc_estimate >= 0.1 && s.hc_estimate <= 1.0);
        // C̄ = S̄_z + j for a polarized start at h0 = 0
        for (c, sz) in s.cbar_over_j.iter().zip(&s.szbar) {
            assert!((c * s.j - sz - s.j).abs() < 1e-9);
        }
    }

    #[test]
    fn first_crossing() {
        let t = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(first_time_below(&t, &[1.0, 0.6, 0.4, 0.2], 0.5), Some(2.0));
        assert_eq!(first_time_below(&t, &[1.0, 0.9, 0.8, 0.7], 0.5), None);
    }
}
