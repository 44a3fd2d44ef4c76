//! Built-in consistency checks of the solver stack against independent
//! references.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic;
use crate::basis::FockBasis;
use crate::eigen::{self, EigenConfig};
use crate::error::Result;
use crate::hamiltonian::{self, HermitianOperator};
use crate::model::{RingSpec, SpeciesSpec};
use crate::observables;
use crate::sweep::{self, Control, SweepSpec};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Builds the current operator whose expectation is compared with the twist
/// derivative.
pub type CurrentBuilder = dyn Fn(&RingSpec, &SpeciesSpec, &FockBasis) -> Result<HermitianOperator>;

const SEED: u64 = 0xC0FFEE;

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn systems() -> Result<Vec<(RingSpec, SpeciesSpec)>> {
    Ok(vec![
        (RingSpec::new(8, 1.0, 1.0, 0.0)?.with_omega_k_over_t(2.3), SpeciesSpec::Bosons { n_particles: 1, u: 0.0 }),
        (RingSpec::new(5, 1.0, 1.3, 0.0)?.with_omega_k_over_t(0.7), SpeciesSpec::Bosons { n_particles: 3, u: 1.5 }),
        (
            RingSpec::new(6, 0.8, 1.0, 0.0)?.with_omega_k_over_t(4.0),
            SpeciesSpec::Fermions { n_up: 2, n_down: 2, u: -2.5 },
        ),
        (RingSpec::new(8, 1.0, 1.0, 0.0)?.with_omega_k_over_t(10.0), SpeciesSpec::Fermions { n_up: 1, n_down: 1, u: 3.0 }),
        (RingSpec::new(7, 1.0, 1.0, 0.0)?.with_omega_k_over_t(-1.2), SpeciesSpec::PolarizedFermions { n_particles: 3 }),
    ])
}

/// Lowest exact eigenvalue of one particle against `min_n E(n)` on several
/// rings and rotations.
pub fn single_particle_energies() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for n_sites in [4, 6, 8, 12, 16] {
        for x in [0.0, 0.25, 1.0, 2.7, -3.1, 10.0] {
            let ring = RingSpec::new(n_sites, 1.0, 1.0, 0.0)?.with_omega_k_over_t(x);
            let species = SpeciesSpec::Bosons { n_particles: 1, u: 0.0 };
            let basis = FockBasis::enumerate(&ring, &species)?;
            let h = hamiltonian::build(&ring, &species, &basis)?;
            let result = eigen::lowest_k(&h, n_sites, &EigenConfig::default())?;
            let mut exact: Vec<f64> = analytic::winding_states(&ring)
                .iter()
                .map(|s| analytic::energy(s, &ring))
                .collect();
            exact.sort_by(f64::total_cmp);
            for (a, b) in result.values.iter().zip(&exact) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(Check { name: "single-particle spectrum", max_deviation: worst, tolerance: 1e-10 })
}

/// Current of the exact one-particle ground state against the closed form.
pub fn single_particle_currents() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for x in [0.1, 0.9, 1.7, 3.0, 6.0] {
        let ring = RingSpec::new(8, 1.0, 1.0, 0.0)?.with_omega_k_over_t(x);
        let species = SpeciesSpec::Bosons { n_particles: 1, u: 0.0 };
        let basis = FockBasis::enumerate(&ring, &species)?;
        let h = hamiltonian::build(&ring, &species, &basis)?;
        let gs = eigen::ground_state(&h, &EigenConfig::default())?;
        let obs = observables::CurrentObservable::new(&ring, &species, &basis)?;
        let j = obs.evaluate(&gs.vectors[0], &basis, &ring)?.total_current;
        let exact = analytic::current(&analytic::ground_winding(&ring), &ring);
        worst = worst.max((j - exact).abs());
    }
    Ok(Check { name: "single-particle current", max_deviation: worst, tolerance: 1e-9 })
}

/// `⟨J⟩` against `-∂⟨H(θ)⟩/∂θ` at `θ = 0` by central differences, on random
/// states of several systems, using the given current operator.
pub fn twist_derivative_with(build_current: &CurrentBuilder) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let step = 1e-6;
    let mut worst: f64 = 0.0;
    for (ring, species) in systems()? {
        let basis = FockBasis::enumerate(&ring, &species)?;
        let plus = hamiltonian::build_twisted(&ring, &species, &basis, step)?;
        let minus = hamiltonian::build_twisted(&ring, &species, &basis, -step)?;
        let j = build_current(&ring, &species, &basis)?;
        for _ in 0..3 {
            let v = random_state(basis.dimension(), &mut rng);
            let derivative = (plus.expectation(&v)?.re - minus.expectation(&v)?.re) / (2.0 * step);
            let deviation = (j.expectation(&v)?.re + derivative).abs() / ring.t();
            worst = worst.max(deviation);
        }
    }
    Ok(Check { name: "current equals twist derivative", max_deviation: worst, tolerance: 1e-6 })
}

pub fn twist_derivative() -> Result<Check> {
    twist_derivative_with(&observables::current_operator)
}

/// `|⟨u|Hv⟩ - conj⟨v|Hu⟩|` on random unit vectors.
pub fn hermiticity() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for (ring, species) in systems()? {
        let basis = FockBasis::enumerate(&ring, &species)?;
        let h = hamiltonian::build(&ring, &species, &basis)?;
        for _ in 0..3 {
            let u = random_state(basis.dimension(), &mut rng);
            let v = random_state(basis.dimension(), &mut rng);
            let a = dot(&u, &h.apply(&v)?);
            let b = dot(&v, &h.apply(&u)?).conj();
            worst = worst.max((a - b).norm());
        }
    }
    Ok(Check { name: "hermiticity", max_deviation: worst, tolerance: 1e-12 })
}

/// `‖(HT - TH)v‖` on random unit vectors.
pub fn translation_symmetry() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst: f64 = 0.0;
    for (ring, species) in systems()? {
        let basis = FockBasis::enumerate(&ring, &species)?;
        let h = hamiltonian::build(&ring, &species, &basis)?;
        for _ in 0..3 {
            let v = random_state(basis.dimension(), &mut rng);
            let htv = h.apply(&basis.translate_vector(&v)?)?;
            let thv = basis.translate_vector(&h.apply(&v)?)?;
            let d = htv.iter().zip(&thv).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(d);
        }
    }
    Ok(Check { name: "translation commutes with H", max_deviation: worst, tolerance: 1e-12 })
}

/// Two runs of the same sweep must agree bit for bit.
pub fn determinism() -> Result<Check> {
    let spec = SweepSpec::new(
        RingSpec::new(6, 1.0, 1.0, 0.0)?,
        SpeciesSpec::Fermions { n_up: 2, n_down: 1, u: 2.0 },
        Control::Omega { min: 0.0, max: 4.0, points: 9 },
    );
    let a = sweep::run(&spec)?;
    let b = sweep::run(&spec)?;
    let mut worst: f64 = 0.0;
    for (x, y) in a.rows.iter().zip(&b.rows) {
        let pairs = [
            (x.ground_energy_over_t, y.ground_energy_over_t),
            (x.current_total_over_t, y.current_total_over_t),
            (x.gap_over_t.unwrap_or(0.0), y.gap_over_t.unwrap_or(0.0)),
        ];
        for (p, q) in pairs {
            if p.to_bits() != q.to_bits() {
                worst = worst.max((p - q).abs().max(f64::MIN_POSITIVE));
            }
        }
        if x.sectors != y.sectors {
            worst = f64::INFINITY;
        }
    }
    Ok(Check { name: "deterministic sweep", max_deviation: worst, tolerance: 0.0 })
}

/// Runs every check.
pub fn run_all() -> Result<VerifyReport> {
    Ok(VerifyReport {
        checks: vec![
            single_particle_energies()?,
            single_particle_currents()?,
            twist_derivative()?,
            hermiticity()?,
            translation_symmetry()?,
            determinism()?,
        ],
    })
}
