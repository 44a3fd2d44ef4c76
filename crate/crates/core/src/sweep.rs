//! Parameter scans over the rotation frequency or the interaction, with
//! level-crossing and fast-mode boundary refinement.
//!
//! Grid values are dimensionless: `ΩK/t` for [`Control::Omega`] and `U/t`
//! for [`Control::Interaction`]. Grid points are solved on the rayon pool and
//! gathered in grid order, so results do not depend on scheduling.

use std::fmt::Write as _;
use std::io;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{FockBasis, Sector, DEFAULT_DIMENSION_CAP};
use crate::eigen::{self, EigenConfig};
use crate::error::{Error, Result};
use crate::hamiltonian;
use crate::model::{RingSpec, SpeciesSpec};
use crate::observables::{max_winding_sector, CurrentObservable};

/// Overlap below which two neighbouring ground states count as different.
pub const FIDELITY_THRESHOLD: f64 = 0.5;

/// The scanned parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Control {
    /// `ΩK/t` from `min` to `max`.
    Omega { min: f64, max: f64, points: usize },
    /// `U/t` from `min` to `max` at fixed `ΩK/t`.
    Interaction {
        min: f64,
        max: f64,
        points: usize,
        omega_k_over_t: f64,
    },
}

impl Control {
    fn bounds(&self) -> (f64, f64, usize) {
        match *self {
            Control::Omega { min, max, points } => (min, max, points),
            Control::Interaction { min, max, points, .. } => (min, max, points),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Control::Omega { .. } => "omegaK_over_t",
            Control::Interaction { .. } => "u_over_t",
        }
    }

    /// Evenly spaced grid values, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        let (min, max, points) = self.bounds();
        let step = (max - min) / (points - 1) as f64;
        (0..points)
            .map(|i| if i + 1 == points { max } else { min + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Geometry and hopping; its Ω is overridden by the control or by the
    /// fixed rotation of an interaction scan.
    pub ring: RingSpec,
    /// Particle content; its U is overridden by an interaction scan.
    pub species: SpeciesSpec,
    pub control: Control,
    /// Refine level crossings by bisection after an Ω scan.
    pub refine_crossings: bool,
    /// Bracket width at which bisection stops, in control units.
    pub bisection_tol: f64,
    pub eigen: EigenConfig,
    pub dimension_cap: usize,
}

impl SweepSpec {
    pub fn new(ring: RingSpec, species: SpeciesSpec, control: Control) -> Self {
        let eigen = EigenConfig {
            degeneracy_tol: 1e-8 * ring.t(),
            ..EigenConfig::default()
        };
        Self {
            ring,
            species,
            control,
            refine_crossings: false,
            bisection_tol: 1e-8,
            eigen,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (min, max, points) = self.control.bounds();
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::domain(
                "control",
                format!("need min < max, got [{min}, {max}]"),
            ));
        }
        if points < 2 {
            return Err(Error::domain("points", format!("need at least 2, got {points}")));
        }
        if !(self.bisection_tol > 0.0) {
            return Err(Error::domain(
                "bisection_tol",
                format!("must be positive, got {}", self.bisection_tol),
            ));
        }
        if let Control::Interaction { omega_k_over_t, .. } = self.control {
            if !omega_k_over_t.is_finite() {
                return Err(Error::domain("omega", "fixed rotation must be finite"));
            }
        }
        self.species.validate(&self.ring)?;
        Ok(())
    }

    /// Ring and species at a control value.
    pub fn point(&self, value: f64) -> (RingSpec, SpeciesSpec) {
        match self.control {
            Control::Omega { .. } => (self.ring.with_omega_k_over_t(value), self.species),
            Control::Interaction { omega_k_over_t, .. } => (
                self.ring.with_omega_k_over_t(omega_k_over_t),
                self.species.with_u(value * self.ring.t()),
            ),
        }
    }

    /// Human-readable echo of the specification for output headers.
    pub fn describe(&self) -> Vec<String> {
        let r = &self.ring;
        let control = match self.control {
            Control::Omega { min, max, points } => {
                format!("omegaK_over_t from {min} to {max}, {points} points")
            }
            Control::Interaction { min, max, points, omega_k_over_t } => format!(
                "u_over_t from {min} to {max}, {points} points at omegaK_over_t = {omega_k_over_t}"
            ),
        };
        vec![
            format!(
                "ring: n_sites={} t={} k_factor={} omega={}",
                r.n_sites(),
                r.t(),
                r.k_factor(),
                r.omega()
            ),
            format!("species: {:?}", self.species),
            format!("control: {control}"),
            format!(
                "solver: dense_threshold={} tol={:e} degeneracy_tol={:e} max_restarts={} seed={:#x} bisection_tol={:e}",
                self.eigen.dense_threshold,
                self.eigen.tol,
                self.eigen.degeneracy_tol,
                self.eigen.max_restarts,
                self.eigen.seed,
                self.bisection_tol
            ),
        ]
    }
}

/// One solved grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub control: f64,
    pub omega: f64,
    pub omega_k_over_t: f64,
    pub u_over_t: f64,
    pub ground_energy_over_t: f64,
    pub gap_over_t: Option<f64>,
    pub current_total_over_t: f64,
    pub current_per_particle_over_t: f64,
    /// Sectors of the ground space; more than one at a degeneracy.
    pub sectors: Vec<Sector>,
    pub degenerate: bool,
    pub fast_current: bool,
    pub max_winding: bool,
    /// Solver failure at this point; the numeric fields are NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Column names of the sweep CSV.
pub const CSV_COLUMNS: &str = "control,omega,omegaK_over_t,u_over_t,ground_energy_over_t,gap_over_t,\
current_total_over_t,current_per_particle_over_t,sector,degenerate,fast_current,max_winding";

fn sector_list(sectors: &[Sector]) -> String {
    sectors
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

impl SweepResult {
    /// Writes the header lines (prefixed `#`), extra header lines, the column
    /// row and one row per grid point.
    pub fn write_csv<W: io::Write>(&self, out: &mut W, extra_header: &[String]) -> io::Result<()> {
        for line in self.header.iter().chain(extra_header) {
            writeln!(out, "# {line}")?;
        }
        for row in self.rows.iter().filter(|r| r.error.is_some()) {
            writeln!(
                out,
                "# failed: control={} error={}",
                row.control,
                row.error.as_deref().unwrap_or_default()
            )?;
        }
        writeln!(out, "{CSV_COLUMNS}")?;
        for row in &self.rows {
            let mut line = String::new();
            let gap = row.gap_over_t.map_or_else(|| "nan".to_string(), |g| g.to_string());
            write!(
                line,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                row.control,
                row.omega,
                row.omega_k_over_t,
                row.u_over_t,
                row.ground_energy_over_t,
                gap,
                row.current_total_over_t,
                row.current_per_particle_over_t,
                if row.error.is_some() { "error".to_string() } else { sector_list(&row.sectors) },
                row.degenerate,
                row.fast_current,
                row.max_winding
            )
            .expect("writing to a String");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Ground space at one control value, resolved into translation sectors.
struct PointSolution {
    row: SweepRow,
    states: Vec<Vec<Complex64>>,
}

struct Solver<'a> {
    spec: &'a SweepSpec,
    basis: FockBasis,
}

impl<'a> Solver<'a> {
    fn new(spec: &'a SweepSpec) -> Result<Self> {
        spec.validate()?;
        let basis = FockBasis::enumerate_with_cap(&spec.ring, &spec.species, spec.dimension_cap)?;
        Ok(Self { spec, basis })
    }

    fn solve(&self, value: f64) -> Result<PointSolution> {
        let (ring, species) = self.spec.point(value);
        let t = ring.t();
        let h = hamiltonian::build(&ring, &species, &self.basis)?;
        let gs = eigen::ground_state(&h, &self.spec.eigen)?;
        let resolved = self.basis.sector_eigenbasis(&gs.vectors)?;
        let observable = CurrentObservable::new(&ring, &species, &self.basis)?;
        let reports = resolved
            .iter()
            .map(|(_, v)| observable.evaluate(v, &self.basis, &ring))
            .collect::<Result<Vec<_>>>()?;
        let m = reports.len() as f64;
        let total = reports.iter().map(|r| r.total_current).sum::<f64>() / m;
        let per_particle = reports.iter().map(|r| r.per_particle_current).sum::<f64>() / m;
        let mut sectors: Vec<Sector> = resolved.iter().map(|(s, _)| *s).collect();
        sectors.sort_by_key(sector_key);
        sectors.dedup();
        let max_sector = max_winding_sector(&self.basis, &ring);
        let row = SweepRow {
            control: value,
            omega: ring.omega(),
            omega_k_over_t: ring.omega_k_over_t(),
            u_over_t: species.u() / t,
            ground_energy_over_t: gs.energy / t,
            gap_over_t: gs.gap.map(|g| g / t),
            current_total_over_t: total / t,
            current_per_particle_over_t: per_particle / t,
            degenerate: gs.degenerate,
            fast_current: total > crate::analytic::FAST_CURRENT_ZERO_BAND * t,
            max_winding: sectors.contains(&max_sector),
            sectors,
            error: None,
        };
        Ok(PointSolution {
            row,
            states: resolved.into_iter().map(|(_, v)| v).collect(),
        })
    }

    fn failed_row(&self, value: f64, err: &Error) -> SweepRow {
        let (ring, species) = self.spec.point(value);
        SweepRow {
            control: value,
            omega: ring.omega(),
            omega_k_over_t: ring.omega_k_over_t(),
            u_over_t: species.u() / ring.t(),
            ground_energy_over_t: f64::NAN,
            gap_over_t: None,
            current_total_over_t: f64::NAN,
            current_per_particle_over_t: f64::NAN,
            sectors: Vec::new(),
            degenerate: false,
            fast_current: false,
            max_winding: false,
            error: Some(err.to_string()),
        }
    }

    fn solve_grid(&self, values: &[f64]) -> Vec<Result<PointSolution>> {
        values.par_iter().map(|&x| self.solve(x)).collect()
    }
}

fn sector_key(s: &Sector) -> usize {
    match s {
        Sector::Winding(q) => *q,
        Sector::Mixed => usize::MAX,
    }
}

/// Solves every grid point. Solver failures are recorded in the affected
/// rows rather than aborting the scan.
pub fn run(spec: &SweepSpec) -> Result<SweepResult> {
    let solver = Solver::new(spec)?;
    let grid = spec.control.grid();
    let rows = solver
        .solve_grid(&grid)
        .into_iter()
        .zip(&grid)
        .map(|(res, &x)| match res {
            Ok(p) => p.row,
            Err(e) => solver.failed_row(x, &e),
        })
        .collect();
    let mut header = vec![format!("fastmode-core {}", env!("CARGO_PKG_VERSION"))];
    header.extend(spec.describe());
    Ok(SweepResult { header, rows })
}

/// A refined ground-state level crossing.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    /// Location in `ΩK/t`.
    pub omega_k_over_t: f64,
    pub sectors_below: Vec<Sector>,
    pub sectors_above: Vec<Sector>,
}

fn fidelity(a: &PointSolution, b: &PointSolution) -> f64 {
    // Largest overlap between the two ground spaces' sector states.
    a.states
        .iter()
        .flat_map(|x| {
            b.states
                .iter()
                .map(move |y| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<Complex64>().norm())
        })
        .fold(0.0, f64::max)
}

fn same_ground(a: &PointSolution, b: &PointSolution) -> bool {
    let labelled = |p: &PointSolution| !p.row.sectors.contains(&Sector::Mixed);
    if labelled(a) && labelled(b) && a.row.sectors != b.row.sectors {
        return false;
    }
    fidelity(a, b) >= FIDELITY_THRESHOLD
}

/// Scans an Ω grid for ground-state changes and refines each by bisection
/// to `bisection_tol`.
pub fn find_crossings(spec: &SweepSpec) -> Result<Vec<Crossing>> {
    if !matches!(spec.control, Control::Omega { .. }) {
        return Err(Error::domain("control", "crossings are located on an Omega scan"));
    }
    let solver = Solver::new(spec)?;
    let grid = spec.control.grid();
    let solutions = solver
        .solve_grid(&grid)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let brackets: Vec<usize> = (0..grid.len() - 1)
        .filter(|&i| !same_ground(&solutions[i], &solutions[i + 1]))
        .collect();
    let refined = brackets
        .par_iter()
        .map(|&i| {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            let left = &solutions[i];
            while hi - lo > spec.bisection_tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let probe = solver.solve(mid)?;
                if same_ground(left, &probe) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(Crossing {
                omega_k_over_t: 0.5 * (lo + hi),
                sectors_below: left.row.sectors.clone(),
                sectors_above: solutions[i + 1].row.sectors.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // A grid point sitting on a degeneracy brackets the same crossing from
    // both sides; merge the two halves.
    let mut merged: Vec<Crossing> = Vec::with_capacity(refined.len());
    for c in refined {
        match merged.last_mut() {
            Some(prev) if c.omega_k_over_t - prev.omega_k_over_t <= 2.0 * spec.bisection_tol => {
                prev.omega_k_over_t = 0.5 * (prev.omega_k_over_t + c.omega_k_over_t);
                prev.sectors_above = c.sectors_above;
            }
            _ => merged.push(c),
        }
    }
    Ok(merged)
}

/// A sign change of the ground-state current along an interaction scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    pub u_over_t: f64,
    /// Per-particle current (units of t) at the lower end of the final bracket.
    pub current_below: f64,
    /// Per-particle current at the upper end of the final bracket.
    pub current_above: f64,
}

fn current_sign(per_particle: f64) -> i8 {
    if per_particle > crate::analytic::FAST_CURRENT_ZERO_BAND {
        1
    } else if per_particle < -crate::analytic::FAST_CURRENT_ZERO_BAND {
        -1
    } else {
        0
    }
}

/// Locates the interaction strengths where the ground-state current changes
/// sign on a fixed-Ω interaction scan of fermions.
pub fn fast_mode_boundary(spec: &SweepSpec) -> Result<Vec<Boundary>> {
    if !matches!(spec.control, Control::Interaction { .. }) {
        return Err(Error::domain("control", "boundaries are located on an Interaction scan"));
    }
    if !spec.species.is_fermionic() {
        return Err(Error::domain("species", "fast-mode boundaries are defined for fermions"));
    }
    let solver = Solver::new(spec)?;
    let grid = spec.control.grid();
    let currents = solver
        .solve_grid(&grid)
        .into_iter()
        .map(|r| r.map(|p| p.row.current_per_particle_over_t))
        .collect::<Result<Vec<_>>>()?;
    let signed: Vec<(usize, i8)> = currents
        .iter()
        .enumerate()
        .map(|(i, &j)| (i, current_sign(j)))
        .filter(|&(_, s)| s != 0)
        .collect();
    let brackets: Vec<(usize, usize)> = signed
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    brackets
        .par_iter()
        .map(|&(i, j)| {
            let (mut lo, mut hi) = (grid[i], grid[j]);
            let (mut j_lo, mut j_hi) = (currents[i], currents[j]);
            let sign_lo = current_sign(j_lo);
            while hi - lo > spec.bisection_tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let j_mid = solver.solve(mid)?.row.current_per_particle_over_t;
                if current_sign(j_mid) == sign_lo {
                    lo = mid;
                    j_lo = j_mid;
                } else {
                    hi = mid;
                    j_hi = j_mid;
                }
            }
            Ok(Boundary {
                u_over_t: 0.5 * (lo + hi),
                current_below: j_lo,
                current_above: j_hi,
            })
        })
        .collect()
}
