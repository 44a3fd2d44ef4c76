use fastmode_core::analytic::{self, WindingState};
use fastmode_core::sweep::{self, Control};
use fastmode_core::{verify, RingSpec, Sector};

use crate::config::{ControlKind, RunConfig};
use crate::error::CliError;
use crate::output::Output;
use crate::svg::{LinePlot, Series};

fn sector_list(sectors: &[Sector]) -> String {
    sectors.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";")
}

/// Ring, requested winding states and the Ω grid of the single-particle
/// commands.
fn single_particle(cfg: &RunConfig) -> Result<(RingSpec, Vec<WindingState>, Vec<f64>), CliError> {
    let ring = cfg.ring()?;
    if cfg.species()?.particle_count() != 1 {
        return Err(CliError::Config(
            "single-particle command: the species must hold exactly one particle".into(),
        ));
    }
    let windings = match &cfg.sweep.windings {
        Some(list) => list.iter().map(|&n| WindingState::new(n, &ring)).collect::<Result<Vec<_>, _>>()?,
        None => analytic::winding_states(&ring),
    };
    let spec = cfg.sweep_spec(ControlKind::Omega)?;
    Ok((ring, windings, spec.control.grid()))
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let (ring, windings, grid) = single_particle(cfg)?;
    let out = Output::new(cfg, "spectrum")?;
    let t = ring.t();
    let mut rows = Vec::with_capacity(grid.len() * windings.len());
    let mut series: Vec<Series> =
        windings.iter().map(|w| Series { label: format!("n = {}", w.n()), points: Vec::new() }).collect();
    for &x in &grid {
        let r = ring.with_omega_k_over_t(x);
        for (w, s) in windings.iter().zip(&mut series) {
            let e = analytic::energy(w, &r) / t;
            rows.push(format!("{},{},{},{}", r.omega(), x, w.n(), e));
            s.points.push((x, e));
        }
    }
    let path = out.write_csv("spectrum.csv", &[], "omega,omegaK_over_t,n,energy", &rows)?;
    println!("wrote {}", path.display());
    if cfg.output.svg {
        let plot = LinePlot {
            title: format!("Single-particle energies, {} sites", ring.n_sites()),
            x_label: "ΩK/t".into(),
            y_label: "E/t".into(),
            series,
        };
        println!("wrote {}", out.write_svg("spectrum.svg", &plot)?.display());
    }
    Ok(())
}

pub fn currents(cfg: &RunConfig) -> Result<(), CliError> {
    let (ring, windings, grid) = single_particle(cfg)?;
    let out = Output::new(cfg, "currents")?;
    let t = ring.t();
    let mut rows = Vec::new();
    let mut series: Vec<Series> =
        windings.iter().map(|w| Series { label: format!("n = {}", w.n()), points: Vec::new() }).collect();
    let mut ground = Series { label: "ground state".into(), points: Vec::new() };
    for &x in &grid {
        let r = ring.with_omega_k_over_t(x);
        let g = analytic::ground_winding(&r);
        for (w, s) in windings.iter().zip(&mut series) {
            let j = analytic::current(w, &r) / t;
            rows.push(format!("{},{},{},{},{}", r.omega(), x, w.n(), j, w.n() == g.n()));
            s.points.push((x, j));
        }
        ground.points.push((x, analytic::current(&g, &r) / t));
    }
    let mut notes = Vec::new();
    if let Ok(omega_c) = analytic::fast_mode_threshold(&ring) {
        notes.push(format!(
            "saturation: ground-state current is 2t for omegaK_over_t > {}",
            omega_c * ring.k_factor() / t
        ));
    }
    let path = out.write_csv("currents.csv", &notes, "omega,omegaK_over_t,n,current,ground", &rows)?;
    println!("wrote {}", path.display());
    if cfg.output.svg {
        series.push(ground);
        let plot = LinePlot {
            title: format!("Single-particle currents, {} sites", ring.n_sites()),
            x_label: "ΩK/t".into(),
            y_label: "J/t".into(),
            series,
        };
        println!("wrote {}", out.write_svg("currents.svg", &plot)?.display());
    }
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.sweep_spec(cfg.control_kind())?;
    let out = Output::new(cfg, "sweep")?;
    let result = sweep::run(&spec)?;
    let path = out.write_with("sweep.csv", |w| result.write_csv(w, out.header()))?;
    println!("wrote {}", path.display());
    if cfg.output.svg {
        let x_label = match spec.control {
            Control::Omega { .. } => "ΩK/t",
            Control::Interaction { .. } => "U/t",
        };
        let plot = LinePlot {
            title: format!("Ground-state current per particle, {:?}", spec.species),
            x_label: x_label.into(),
            y_label: "J/(N t)".into(),
            series: vec![Series {
                label: "current".into(),
                points: result.rows.iter().map(|r| (r.control, r.current_per_particle_over_t)).collect(),
            }],
        };
        println!("wrote {}", out.write_svg("sweep.svg", &plot)?.display());
    }
    if spec.refine_crossings {
        match spec.control {
            Control::Omega { .. } => write_crossings(&out, &sweep::find_crossings(&spec)?, &spec.ring)?,
            Control::Interaction { .. } => write_boundaries(&out, &sweep::fast_mode_boundary(&spec)?)?,
        }
    }
    let failed = result.rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} grid point(s) failed; see the CSV header")));
    }
    Ok(())
}

fn write_crossings(out: &Output, found: &[sweep::Crossing], ring: &RingSpec) -> Result<(), CliError> {
    let rows: Vec<String> = found
        .iter()
        .map(|c| {
            format!(
                "{},{},{},{}",
                c.omega_k_over_t,
                ring.with_omega_k_over_t(c.omega_k_over_t).omega(),
                sector_list(&c.sectors_below),
                sector_list(&c.sectors_above)
            )
        })
        .collect();
    let path = out.write_csv("crossings.csv", &[], "omegaK_over_t,omega,sectors_below,sectors_above", &rows)?;
    for row in &rows {
        println!("crossing {row}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn sign(x: f64) -> &'static str {
    if x > 0.0 {
        "+"
    } else if x < 0.0 {
        "-"
    } else {
        "0"
    }
}

fn write_boundaries(out: &Output, found: &[sweep::Boundary]) -> Result<(), CliError> {
    let rows: Vec<String> = found
        .iter()
        .map(|b| {
            format!(
                "{},{},{},{},{}",
                b.u_over_t,
                b.current_below,
                b.current_above,
                sign(b.current_below),
                sign(b.current_above)
            )
        })
        .collect();
    let path = out.write_csv(
        "boundary.csv",
        &[],
        "u_over_t,current_below_over_t,current_above_over_t,sign_below,sign_above",
        &rows,
    )?;
    for row in &rows {
        println!("boundary {row}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn crossings(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.sweep_spec(ControlKind::Omega)?;
    let out = Output::new(cfg, "crossings")?;
    write_crossings(&out, &sweep::find_crossings(&spec)?, &spec.ring)
}

pub fn boundary(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.sweep_spec(ControlKind::Interaction)?;
    let out = Output::new(cfg, "boundary")?;
    write_boundaries(&out, &sweep::fast_mode_boundary(&spec)?)
}

pub fn verify() -> Result<(), CliError> {
    let report = verify::run_all()?;
    for c in &report.checks {
        println!(
            "{} {}: max deviation {:.3e} (tolerance {:.0e})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.max_deviation,
            c.tolerance
        );
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Solver("verification failed".into()))
    }
}
