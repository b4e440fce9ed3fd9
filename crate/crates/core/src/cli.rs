//! Command-line front end. `main.rs` only forwards to [`main_with_args`].
//!
//! Every command writes one document (CSV by default, JSON on request) to
//! `--output` or stdout. Parameters come from flags, optionally layered over a
//! JSON `--config` file that uses the flag names as keys.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::analysis::{sweep_hf, uniform_grid, Channel, QuenchSetup, SweepSpec};
use crate::dynamics::TimeGrid;
use crate::error::Error;
use crate::format::Table;
use crate::krylov::{lanczos, DEFAULT_BREAKDOWN_TOL};
use crate::model::{
    analytic_lanczos_a, analytic_lanczos_b, build_hamiltonian, initial_state, InitialState,
    ModelParams, QuenchSpec,
};
use crate::spectral::diagonalize;
use crate::spin::SpinSector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lmg-krylov",
    version,
    about = "LMG quench dynamics and Krylov complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time series of all observables after a quench h0 -> hf
    Evolve(FlagArgs),
    /// Time-averaged complexity and magnetization over a range of hf
    Sweep(FlagArgs),
    /// Lanczos coefficients of the initial state under H(hf)
    Lanczos(FlagArgs),
    /// Eigenvalues of H(hf)
    Spectrum(FlagArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Evolve,
    Sweep,
    Lanczos,
    Spectrum,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Evolve => "evolve",
            CommandKind::Sweep => "sweep",
            CommandKind::Lanczos => "lanczos",
            CommandKind::Spectrum => "spectrum",
        }
    }
}

/// Flag values as parsed; `None` means "not given on the command line".
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagArgs {
    /// Number of spin-1/2 sites (j = N/2)
    #[arg(long = "N")]
    #[serde(rename = "N")]
    sites: Option<usize>,
    /// Ferromagnetic coupling [default: 1]
    #[arg(long = "J", allow_negative_numbers = true)]
    #[serde(rename = "J")]
    coupling: Option<f64>,
    /// Pre-quench field [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    h0: Option<f64>,
    /// Post-quench field
    #[arg(long, allow_negative_numbers = true)]
    hf: Option<f64>,
    /// Lowest hf of a sweep
    #[arg(long = "hf-min", allow_negative_numbers = true)]
    #[serde(rename = "hf-min")]
    hf_min: Option<f64>,
    /// Highest hf of a sweep
    #[arg(long = "hf-max", allow_negative_numbers = true)]
    #[serde(rename = "hf-max")]
    hf_max: Option<f64>,
    /// Number of sweep points, endpoints included
    #[arg(long = "hf-steps")]
    #[serde(rename = "hf-steps")]
    hf_steps: Option<usize>,
    /// Final time, also the averaging window of a sweep [default: 150]
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t_max: Option<f64>,
    /// Sampling step [default: 0.01]
    #[arg(long)]
    dt: Option<f64>,
    /// down | up | ground [default: down]
    #[arg(long = "initial-state")]
    #[serde(rename = "initial-state")]
    initial_state: Option<InitialState>,
    /// Lanczos breakdown threshold relative to max|H_ij| [default: 1e-12]
    #[arg(long = "breakdown-tol")]
    #[serde(rename = "breakdown-tol")]
    breakdown_tol: Option<f64>,
    /// Output file (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl FlagArgs {
    /// `self` wins where both are set.
    fn overlay(self, base: FlagArgs) -> FlagArgs {
        FlagArgs {
            sites: self.sites.or(base.sites),
            coupling: self.coupling.or(base.coupling),
            h0: self.h0.or(base.h0),
            hf: self.hf.or(base.hf),
            hf_min: self.hf_min.or(base.hf_min),
            hf_max: self.hf_max.or(base.hf_max),
            hf_steps: self.hf_steps.or(base.hf_steps),
            t_max: self.t_max.or(base.t_max),
            dt: self.dt.or(base.dt),
            initial_state: self.initial_state.or(base.initial_state),
            breakdown_tol: self.breakdown_tol.or(base.breakdown_tol),
            output: self.output.or(base.output),
            format: self.format.or(base.format),
            config: self.config,
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub sites: usize,
    pub coupling: f64,
    pub h0: f64,
    pub hf: Option<f64>,
    pub hf_min: Option<f64>,
    pub hf_max: Option<f64>,
    pub hf_steps: Option<usize>,
    pub t_max: f64,
    pub dt: f64,
    pub initial_state: InitialState,
    pub breakdown_tol: f64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    fn resolve(command: CommandKind, flags: FlagArgs) -> Result<Self, CliError> {
        let flags = match &flags.config {
            Some(path) => flags.clone().overlay(read_config(path)?),
            None => flags,
        };
        let sites = flags
            .sites
            .ok_or_else(|| CliError::usage("missing required flag `--N`"))?;
        let config = RunConfig {
            command,
            sites,
            coupling: flags.coupling.unwrap_or(1.0),
            h0: flags.h0.unwrap_or(0.0),
            hf: flags.hf,
            hf_min: flags.hf_min,
            hf_max: flags.hf_max,
            hf_steps: flags.hf_steps,
            t_max: flags.t_max.unwrap_or(TimeGrid::DEFAULT_T_MAX),
            dt: flags.dt.unwrap_or(TimeGrid::DEFAULT_DT),
            initial_state: flags.initial_state.unwrap_or_default(),
            breakdown_tol: flags.breakdown_tol.unwrap_or(DEFAULT_BREAKDOWN_TOL),
            output: flags.output,
            format: flags.format.unwrap_or(OutputFormat::Csv),
        };
        match command {
            CommandKind::Sweep => {
                for (flag, present) in [
                    ("--hf-min", config.hf_min.is_some()),
                    ("--hf-max", config.hf_max.is_some()),
                    ("--hf-steps", config.hf_steps.is_some()),
                ] {
                    if !present {
                        return Err(CliError::usage(format!("missing required flag `{flag}`")));
                    }
                }
            }
            _ if config.hf.is_none() => {
                return Err(CliError::usage("missing required flag `--hf`"));
            }
            _ => {}
        }
        Ok(config)
    }

    fn sector(&self) -> Result<SpinSector, CliError> {
        Ok(SpinSector::new(self.sites)?)
    }

    fn hf(&self) -> f64 {
        self.hf.expect("validated in resolve")
    }

    fn quench(&self) -> Result<QuenchSpec, CliError> {
        Ok(QuenchSpec::new(
            self.coupling,
            self.h0,
            self.hf(),
            self.initial_state,
        )?)
    }

    fn grid(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(self.t_max, self.dt)?)
    }

    fn write_common_metadata(&self, table: &mut Table) {
        table
            .meta(env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
            .meta("command", self.command.name())
            .meta("N", self.sites)
            .meta_float("J", self.coupling);
    }
}

fn read_config(path: &Path) -> Result<FlagArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config `{}`: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid config `{}`: {e}", path.display())))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(Error),
    Io(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Model(Error::InvalidParameter { name, reason }) => {
                write!(f, "invalid value for `--{name}`: {reason}")
            }
            CliError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

/// Runs one command and returns the document it produced.
pub fn execute(config: &RunConfig) -> Result<Table, CliError> {
    match config.command {
        CommandKind::Evolve => cmd_evolve(config),
        CommandKind::Sweep => cmd_sweep(config),
        CommandKind::Lanczos => cmd_lanczos(config),
        CommandKind::Spectrum => cmd_spectrum(config),
    }
}

fn cmd_evolve(config: &RunConfig) -> Result<Table, CliError> {
    let sector = config.sector()?;
    let quench = config.quench()?;
    let grid = config.grid()?;
    let setup = QuenchSetup::new(sector, quench, config.breakdown_tol)?;
    let series = setup.run(grid)?;

    let mut columns = vec!["t"];
    columns.extend(Channel::ALL.iter().map(|c| c.column()));
    let mut table = Table::new(&columns);
    config.write_common_metadata(&mut table);
    table
        .meta_float("h0", config.h0)
        .meta_float("hf", config.hf())
        .meta_float("T", config.t_max)
        .meta_float("dt", config.dt)
        .meta("initial-state", config.initial_state)
        .meta_float("breakdown-tol", config.breakdown_tol)
        .meta("krylov-dimension", series.krylov_dim);
    for (i, &t) in series.times.iter().enumerate() {
        let mut row = vec![t];
        row.extend(Channel::ALL.iter().map(|&c| series.channel(c)[i]));
        table.push_values(&row);
    }
    Ok(table)
}

fn cmd_sweep(config: &RunConfig) -> Result<Table, CliError> {
    let sector = config.sector()?;
    let (min, max, steps) = (
        config.hf_min.expect("validated"),
        config.hf_max.expect("validated"),
        config.hf_steps.expect("validated"),
    );
    if steps < 5 {
        return Err(CliError::usage(format!(
            "`--hf-steps` must be at least 5 for a sweep, got {steps}"
        )));
    }
    if max.partial_cmp(&min) != Some(std::cmp::Ordering::Greater) {
        return Err(CliError::usage(format!(
            "`--hf-max` ({max}) must exceed `--hf-min` ({min})"
        )));
    }
    let hf_grid = uniform_grid(min, max, steps)?;
    let spec = SweepSpec {
        coupling: config.coupling,
        h0: config.h0,
        initial_state: config.initial_state,
        grid: config.grid()?,
        window: config.t_max,
        breakdown_tol: config.breakdown_tol,
    };
    let result = sweep_hf(sector, &spec, &hf_grid)?;

    let mut table = Table::new(&["h_f", "cbar_over_j", "szbar_over_j", "dcbar_dhf"]);
    config.write_common_metadata(&mut table);
    table
        .meta_float("h0", config.h0)
        .meta_float("hf-min", min)
        .meta_float("hf-max", max)
        .meta("hf-steps", steps)
        .meta_float("hf-resolution", (max - min) / (steps - 1) as f64)
        .meta_float("T", config.t_max)
        .meta_float("dt", config.dt)
        .meta("initial-state", config.initial_state)
        .meta_float("breakdown-tol", config.breakdown_tol);
    let sz_over_j = result.szbar_over_j();
    for (i, &hf) in result.hf_grid.iter().enumerate() {
        table.push_values(&[hf, result.cbar_over_j[i], sz_over_j[i], result.dcbar_dhf[i]]);
    }
    table
        .summary
        .push(("hc_estimate".into(), result.hc_estimate));
    Ok(table)
}

fn cmd_lanczos(config: &RunConfig) -> Result<Table, CliError> {
    let sector = config.sector()?;
    let quench = config.quench()?;
    let psi0 = initial_state(sector, &quench, None)?;
    let h = build_hamiltonian(sector, quench.fin);
    let krylov = lanczos(&h, &psi0, config.breakdown_tol)?;
    let analytic = config.h0 == 0.0 && config.initial_state.is_polarized();

    let mut table = Table::new(&[
        "n",
        "a_numeric",
        "b_numeric",
        "a_analytic",
        "b_analytic",
        "abs_err_b",
    ]);
    config.write_common_metadata(&mut table);
    table
        .meta_float("h0", config.h0)
        .meta_float("hf", config.hf())
        .meta("initial-state", config.initial_state)
        .meta_float("breakdown-tol", config.breakdown_tol)
        .meta("krylov-dimension", krylov.dim());
    for n in 0..krylov.dim() {
        let (a, b) = (krylov.a()[n], krylov.b()[n]);
        let (a_ref, b_ref, err) = if analytic {
            let a_ref = analytic_lanczos_a(sector, config.coupling, n)?;
            let b_ref = if n == 0 {
                0.0
            } else {
                analytic_lanczos_b(sector, config.hf(), n)?
            };
            (Some(a_ref), Some(b_ref), Some((b - b_ref).abs()))
        } else {
            (None, None, None)
        };
        table.push_row(vec![Some(n as f64), Some(a), Some(b), a_ref, b_ref, err]);
    }
    Ok(table)
}

fn cmd_spectrum(config: &RunConfig) -> Result<Table, CliError> {
    let sector = config.sector()?;
    let params = ModelParams::new(config.coupling, config.hf()).map_err(|e| match e {
        Error::InvalidParameter { name: "h", reason } => {
            Error::InvalidParameter { name: "hf", reason }
        }
        other => other,
    })?;
    let spec = diagonalize(&build_hamiltonian(sector, params))?;
    let mut table = Table::new(&["k", "E_k"]);
    config.write_common_metadata(&mut table);
    table.meta_float("hf", config.hf());
    for (k, e) in spec.eigenvalues.iter().enumerate() {
        table.push_values(&[k as f64, *e]);
    }
    Ok(table)
}

/// Renders `table` in the configured format and writes it to the configured
/// destination.
pub fn emit(config: &RunConfig, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = match config.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    match &config.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write `{}`: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

/// Parses `args` (including the program name), runs, and returns the
/// process exit code. Diagnostics go to `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_VALIDATION;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let (kind, flags) = match cli.command {
        Command::Evolve(f) => (CommandKind::Evolve, f),
        Command::Sweep(f) => (CommandKind::Sweep, f),
        Command::Lanczos(f) => (CommandKind::Lanczos, f),
        Command::Spectrum(f) => (CommandKind::Spectrum, f),
    };
    let outcome = RunConfig::resolve(kind, flags).and_then(|config| {
        let table = execute(&config)?;
        if kind == CommandKind::Lanczos && table.rows.len() == 1 {
            let _ = writeln!(stderr, "Krylov dimension 1: initial state is stationary");
        }
        emit(&config, &table, stdout)
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lmg-krylov"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn data_rows(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn spectrum_two_level() {
        let (code, out, _) = run(&["spectrum", "--N", "1", "--hf", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("\nk,E_k\n0,-0.75\n1,0.25\n"), "{out}");
    }

    #[test]
    fn spectrum_zero_field() {
        let (code, out, _) = run(&["spectrum", "--N", "2", "--hf", "0"]);
        assert_eq!(code, 0);
        let rows = data_rows(&out);
        let e: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
        assert_eq!(e, vec!["-0.5", "-0.5", "0"]);
    }

    #[test]
    fn lanczos_spin_one() {
        let (code, out, _) = run(&["lanczos", "--N", "2", "--h0", "0", "--hf", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("# lmg-krylov="));
        assert!(out.contains("n,a_numeric,b_numeric,a_analytic,b_analytic,abs_err_b\n"));
        let rows = data_rows(&out);
        let b: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
        assert_eq!(b, vec!["0", "0.353553390593", "0.353553390593"]);
        assert!(rows.iter().all(|r| r[5] == "0"));
    }

    #[test]
    fn lanczos_stationary_reports_dimension_one() {
        let (code, out, err) = run(&["lanczos", "--N", "6", "--hf", "0"]);
        assert_eq!(code, 0);
        assert_eq!(data_rows(&out).len(), 1);
        assert!(out.contains("# krylov-dimension=1\n"));
        assert!(err.contains("Krylov dimension 1"));
    }

    #[test]
    fn lanczos_analytic_columns_blank_for_ground_start() {
        let (code, out, _) = run(&[
            "lanczos",
            "--N",
            "6",
            "--h0",
            "0.2",
            "--hf",
            "0.5",
            "--initial-state",
            "ground",
        ]);
        assert_eq!(code, 0);
        assert!(data_rows(&out)
            .iter()
            .all(|r| r[3].is_empty() && r[5].is_empty()));
    }

    #[test]
    fn evolve_stationary_rows() {
        let (code, out, _) = run(&[
            "evolve", "--N", "2", "--h0", "0", "--hf", "0", "--T", "1", "--dt", "0.25",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains(
            "t,S_z,C_K,ipr_krylov,ipr_energy,entropy_krylov,entropy_energy,loschmidt,rate\n"
        ));
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 5);
        let expected = [-1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        for r in &rows {
            for (cell, want) in r[1..].iter().zip(expected) {
                let got: f64 = cell.parse().unwrap();
                assert!((got - want).abs() < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn sweep_output_and_trailer() {
        let (code, out, _) = run(&[
            "sweep",
            "--N",
            "8",
            "--hf-min",
            "0.1",
            "--hf-max",
            "0.9",
            "--hf-steps",
            "5",
            "--T",
            "10",
            "--dt",
            "0.1",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("h_f,cbar_over_j,szbar_over_j,dcbar_dhf\n"));
        assert_eq!(data_rows(&out).len(), 5);
        assert!(out
            .trim_end()
            .lines()
            .last()
            .unwrap()
            .starts_with("# hc_estimate="));
    }

    #[test]
    fn degenerate_sweep_range_is_a_usage_error() {
        let (code, _, err) = run(&[
            "sweep",
            "--N",
            "8",
            "--hf-min",
            "0.5",
            "--hf-max",
            "0.5",
            "--hf-steps",
            "1",
        ]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("hf-steps"), "{err}");
        let (code, _, err) = run(&[
            "sweep",
            "--N",
            "8",
            "--hf-min",
            "0.5",
            "--hf-max",
            "0.5",
            "--hf-steps",
            "9",
        ]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("hf-max"), "{err}");
    }

    #[test]
    fn validation_errors_name_the_flag() {
        let (code, _, err) = run(&["evolve", "--N", "0", "--hf", "0.5"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("`--N`"), "{err}");
        let (code, _, err) = run(&["evolve", "--N", "4", "--hf", "-1"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("`--hf`"), "{err}");
        let (code, _, err) = run(&["evolve", "--N", "4", "--hf", "0.3", "--dt", "0"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("`--dt`"), "{err}");
        let (code, _, err) = run(&["evolve", "--N", "4"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("--hf"), "{err}");
        let (code, _, _) = run(&[
            "evolve",
            "--N",
            "4",
            "--hf",
            "0.3",
            "--initial-state",
            "left",
        ]);
        assert_eq!(code, EXIT_VALIDATION);
        let (code, _, _) = run(&["frobnicate"]);
        assert_eq!(code, EXIT_VALIDATION);
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("evolve"));
    }

    #[test]
    fn numerical_errors_map_to_exit_two() {
        let e = CliError::Model(Error::NoConvergence { index: 3 });
        assert_eq!(e.exit_code(), EXIT_NUMERICAL);
        let e = CliError::Model(Error::invalid("N", "bad"));
        assert_eq!(e.exit_code(), EXIT_VALIDATION);
    }
}
