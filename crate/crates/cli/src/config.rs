//! Run configuration: TOML file, command-line overrides, and conversion
//! into library specifications.
//!
//! Every energy in the configuration is measured in units of `t` and every
//! rotation as `ΩK/t`.

use std::path::{Path, PathBuf};

use fastmode_core::sweep::{Control, SweepSpec};
use fastmode_core::{EigenConfig, RingSpec, SpeciesSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesKind {
    Boson,
    Fermion,
    Polarized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ControlKind {
    Omega,
    Interaction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingConfig {
    pub sites: usize,
    pub t: f64,
    pub beta: f64,
    /// Geometric factor; replaces the one derived from `beta` when set.
    pub k: Option<f64>,
}

impl Default for RingConfig {
    fn default() -> Self {
        Self { sites: 8, t: 1.0, beta: 1.0, k: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeciesConfig {
    pub kind: SpeciesKind,
    /// Particle number of bosons and polarized fermions.
    pub n: usize,
    pub n_up: usize,
    pub n_down: usize,
    /// Interaction in units of t.
    pub u: f64,
}

impl Default for SpeciesConfig {
    fn default() -> Self {
        Self { kind: SpeciesKind::Boson, n: 1, n_up: 1, n_down: 1, u: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Scanned parameter; inferred from the interaction bounds when unset.
    pub control: Option<ControlKind>,
    /// Fixed rotation of interaction scans.
    pub omega: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub u_points: Option<usize>,
    pub refine: bool,
    /// Bisection bracket width.
    pub tol: f64,
    /// Winding numbers drawn by `spectrum` and `currents`; all when unset.
    pub windings: Option<Vec<usize>>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            control: None,
            omega: 10.0,
            omega_min: 0.0,
            omega_max: 4.0,
            omega_points: 201,
            u_min: None,
            u_max: None,
            u_points: None,
            refine: false,
            tol: 1e-8,
            windings: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dense_threshold: usize,
    pub tol: f64,
    pub degeneracy_tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Worker threads; all available cores when unset.
    pub workers: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let e = EigenConfig::default();
        Self {
            dense_threshold: e.dense_threshold,
            tol: e.tol,
            degeneracy_tol: e.degeneracy_tol,
            max_restarts: e.max_restarts,
            seed: e.seed,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("."), svg: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ring: RingConfig,
    pub species: SpeciesConfig,
    pub sweep: SweepConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

pub const DEFAULT_U_MIN: f64 = -12.0;
pub const DEFAULT_U_MAX: f64 = 12.0;
pub const DEFAULT_U_POINTS: usize = 49;

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// The configuration as TOML, for output headers.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn ring(&self) -> Result<RingSpec, CliError> {
        let r = &self.ring;
        let ring = match r.k {
            Some(k) => RingSpec::with_k(r.sites, r.t, k, 0.0),
            None => RingSpec::new(r.sites, r.t, r.beta, 0.0),
        }?;
        Ok(ring)
    }

    /// Species with the interaction converted from units of t.
    pub fn species(&self) -> Result<SpeciesSpec, CliError> {
        let s = &self.species;
        let u = s.u * self.ring.t;
        let species = match s.kind {
            SpeciesKind::Boson => SpeciesSpec::Bosons { n_particles: s.n, u },
            SpeciesKind::Fermion => SpeciesSpec::Fermions { n_up: s.n_up, n_down: s.n_down, u },
            SpeciesKind::Polarized => SpeciesSpec::PolarizedFermions { n_particles: s.n },
        };
        Ok(species.validate(&self.ring()?)?)
    }

    pub fn eigen(&self) -> EigenConfig {
        let s = &self.solver;
        EigenConfig {
            dense_threshold: s.dense_threshold,
            tol: s.tol,
            degeneracy_tol: s.degeneracy_tol,
            max_restarts: s.max_restarts,
            krylov_dimension: None,
            seed: s.seed,
        }
    }

    pub fn control_kind(&self) -> ControlKind {
        let s = &self.sweep;
        s.control.unwrap_or(if s.u_min.is_some() || s.u_max.is_some() || s.u_points.is_some() {
            ControlKind::Interaction
        } else {
            ControlKind::Omega
        })
    }

    pub fn control(&self, kind: ControlKind) -> Control {
        let s = &self.sweep;
        match kind {
            ControlKind::Omega => Control::Omega { min: s.omega_min, max: s.omega_max, points: s.omega_points },
            ControlKind::Interaction => Control::Interaction {
                min: s.u_min.unwrap_or(DEFAULT_U_MIN),
                max: s.u_max.unwrap_or(DEFAULT_U_MAX),
                points: s.u_points.unwrap_or(DEFAULT_U_POINTS),
                omega_k_over_t: s.omega,
            },
        }
    }

    pub fn sweep_spec(&self, kind: ControlKind) -> Result<SweepSpec, CliError> {
        let mut spec = SweepSpec::new(self.ring()?, self.species()?, self.control(kind));
        spec.refine_crossings = self.sweep.refine;
        spec.bisection_tol = self.sweep.tol;
        spec.eigen = self.eigen();
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every numeric field before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        self.ring()?;
        self.species()?;
        let s = &self.solver;
        if !(s.tol > 0.0 && s.degeneracy_tol > 0.0) {
            return Err(CliError::Config("solver tolerances must be positive".into()));
        }
        if s.workers == Some(0) {
            return Err(CliError::Config("`workers` must be at least 1".into()));
        }
        if !(self.sweep.tol > 0.0) {
            return Err(CliError::Config(format!("`tol` must be positive, got {}", self.sweep.tol)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn echo_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.species.kind = SpeciesKind::Fermion;
        cfg.sweep.u_min = Some(-3.0);
        cfg.ring.k = Some(0.25);
        assert_eq!(RunConfig::from_toml(&cfg.echo()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("[ring]\nsite = 8\n").unwrap_err();
        assert!(matches!(err, CliError::Config(ref m) if m.contains("site")));
    }

    #[test]
    fn interaction_bounds_select_the_interaction_scan() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.control_kind(), ControlKind::Omega);
        cfg.sweep.u_max = Some(4.0);
        assert_eq!(cfg.control_kind(), ControlKind::Interaction);
        cfg.sweep.control = Some(ControlKind::Omega);
        assert_eq!(cfg.control_kind(), ControlKind::Omega);
    }

    #[test]
    fn interaction_is_scaled_by_t() {
        let mut cfg = RunConfig::default();
        cfg.ring.t = 2.0;
        cfg.species.u = 3.0;
        assert_eq!(cfg.species().unwrap().u(), 6.0);
    }

    #[test]
    fn invalid_values_name_their_field() {
        let mut cfg = RunConfig::default();
        cfg.ring.sites = 2;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("n_sites"), "{msg}");
        let mut cfg = RunConfig::default();
        cfg.species.kind = SpeciesKind::Polarized;
        cfg.species.n = 9;
        assert!(cfg.validate().is_err());
    }
}
