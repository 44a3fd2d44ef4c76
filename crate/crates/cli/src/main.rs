//! `fastmode`: spectra, currents and parameter sweeps of atoms on a rotating
//! ring lattice.

mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ControlKind, RunConfig, SpeciesKind};
use error::CliError;

#[derive(Parser)]
#[command(name = "fastmode", version, about = "Exact diagonalization of atoms on a rotating ring lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Single-particle energies against rotation (closed form).
    Spectrum,
    /// Single-particle currents against rotation (closed form).
    Currents,
    /// Many-body ground state over a rotation or interaction grid.
    Sweep,
    /// Refined ground-state level crossings on a rotation grid.
    Crossings,
    /// Interaction strengths where the fermion ground-state current changes sign.
    Boundary,
    /// Run the built-in consistency checks.
    Verify,
}

/// Overrides of configuration-file values. Energies are in units of t and
/// rotations in units of t/K.
#[derive(Args)]
struct Flags {
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    sites: Option<usize>,
    #[arg(long, global = true)]
    t: Option<f64>,
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Geometric factor K, replacing the value derived from beta.
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega_max: Option<f64>,
    #[arg(long, global = true)]
    omega_points: Option<usize>,
    /// Fixed ΩK/t of interaction scans.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    u_min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    u_max: Option<f64>,
    #[arg(long, global = true)]
    u_points: Option<usize>,
    /// Scanned parameter of `sweep`; inferred from the U bounds when unset.
    #[arg(long, global = true, value_enum)]
    control: Option<ControlKind>,
    #[arg(long, global = true, value_enum)]
    species: Option<SpeciesKind>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    n_up: Option<usize>,
    #[arg(long, global = true)]
    n_down: Option<usize>,
    /// Winding numbers shown by `spectrum` and `currents`.
    #[arg(long, global = true, value_delimiter = ',')]
    windings: Option<Vec<usize>>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    svg: bool,
    /// Refine crossings or sign changes after a sweep.
    #[arg(long, global = true)]
    refine: bool,
    /// Bisection bracket width.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

fn set<T: Clone>(target: &mut T, value: &Option<T>) {
    if let Some(v) = value {
        *target = v.clone();
    }
}

fn set_some<T: Clone>(target: &mut Option<T>, value: &Option<T>) {
    if value.is_some() {
        *target = value.clone();
    }
}

impl Flags {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.ring.sites, &self.sites);
        set(&mut cfg.ring.t, &self.t);
        set(&mut cfg.ring.beta, &self.beta);
        set_some(&mut cfg.ring.k, &self.k);
        set(&mut cfg.species.kind, &self.species);
        set(&mut cfg.species.n, &self.n);
        set(&mut cfg.species.n_up, &self.n_up);
        set(&mut cfg.species.n_down, &self.n_down);
        set(&mut cfg.species.u, &self.u);
        set(&mut cfg.sweep.omega_min, &self.omega_min);
        set(&mut cfg.sweep.omega_max, &self.omega_max);
        set(&mut cfg.sweep.omega_points, &self.omega_points);
        set(&mut cfg.sweep.omega, &self.omega);
        set_some(&mut cfg.sweep.u_min, &self.u_min);
        set_some(&mut cfg.sweep.u_max, &self.u_max);
        set_some(&mut cfg.sweep.u_points, &self.u_points);
        set_some(&mut cfg.sweep.control, &self.control);
        set_some(&mut cfg.sweep.windings, &self.windings);
        set(&mut cfg.sweep.tol, &self.tol);
        cfg.sweep.refine |= self.refine;
        set(&mut cfg.output.dir, &self.out);
        cfg.output.svg |= self.svg;
        set_some(&mut cfg.solver.workers, &self.workers);
        set(&mut cfg.solver.seed, &self.seed);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.flags.apply(&mut cfg);
    cfg.validate()?;
    if let Some(workers) = cfg.solver.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Currents => commands::currents(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Crossings => commands::crossings(&cfg),
        Command::Boundary => commands::boundary(&cfg),
        Command::Verify => commands::verify(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fastmode: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
