//! Physical parameters of the rotating ring lattice and its particle content.
//!
//! Units: ħ = 1 and lattice constant = 1, so the rotation frequency Ω carries
//! energy units. The dimensionless group `ΩK/t` is what every observable
//! actually depends on, which is why [`RingSpec::omega_k_over_t`] is the
//! canonical control variable throughout the crate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Geometry and couplings of a homogeneous ring of `n_sites` lattice sites
/// stirred at frequency Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec {
    n_sites: usize,
    t: f64,
    k_factor: f64,
    omega: f64,
}

impl RingSpec {
    /// Builds a ring whose geometric factor follows from the lattice shape,
    /// `K = β sin(α)/2` with `α = 2π/n_sites`.
    pub fn new(n_sites: usize, t: f64, beta: f64, omega: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain("beta", format!("must be positive, got {beta}")));
        }
        let alpha = 2.0 * PI / n_sites.max(1) as f64;
        Self::with_k(n_sites, t, beta * alpha.sin() / 2.0, omega)
    }

    /// Builds a ring with an explicitly chosen geometric factor `K`.
    pub fn with_k(n_sites: usize, t: f64, k_factor: f64, omega: f64) -> Result<Self> {
        if n_sites < 3 {
            return Err(Error::domain(
                "n_sites",
                format!("a ring needs at least 3 sites, got {n_sites}"),
            ));
        }
        if n_sites > 64 {
            return Err(Error::domain(
                "n_sites",
                format!("at most 64 sites are supported, got {n_sites}"),
            ));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain("t", format!("must be positive, got {t}")));
        }
        if !(k_factor.is_finite() && k_factor > 0.0) {
            return Err(Error::domain(
                "k_factor",
                format!("must be positive, got {k_factor}"),
            ));
        }
        if !omega.is_finite() {
            return Err(Error::domain("omega", "must be finite"));
        }
        Ok(Self {
            n_sites,
            t,
            k_factor,
            omega,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The product ΩK, the imaginary part of the hopping amplitude.
    pub fn omega_k(&self) -> f64 {
        self.omega * self.k_factor
    }

    pub fn omega_k_over_t(&self) -> f64 {
        self.omega_k() / self.t
    }

    /// Same ring, different stirring frequency.
    pub fn with_omega(&self, omega: f64) -> Self {
        Self { omega, ..*self }
    }

    /// Same ring, stirred so that `ΩK/t` equals `ratio`.
    pub fn with_omega_k_over_t(&self, ratio: f64) -> Self {
        self.with_omega(ratio * self.t / self.k_factor)
    }

    /// Amplitude `-t - iΩK` of the forward hop `c†_{j+1} c_j`.
    pub fn hopping(&self) -> Complex64 {
        Complex64::new(-self.t, -self.omega_k())
    }

    /// Largest winding number reachable on this ring, `n_m = ⌊N_A/4⌋`.
    pub fn max_winding(&self) -> usize {
        self.n_sites / 4
    }
}

/// Particle content of the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpeciesSpec {
    /// Spinless bosons with on-site interaction `U n(n-1)`.
    Bosons { n_particles: usize, u: f64 },
    /// Spin-1/2 fermions with on-site interaction `U n↑ n↓`.
    Fermions { n_up: usize, n_down: usize, u: f64 },
    /// Identical fermions in a single spin state; no interaction.
    PolarizedFermions { n_particles: usize },
}

impl SpeciesSpec {
    /// Checks the particle counts against the ring, returning the species
    /// unchanged when all bounds hold.
    pub fn validate(self, ring: &RingSpec) -> Result<Self> {
        let n_sites = ring.n_sites();
        match self {
            SpeciesSpec::Bosons { n_particles, u } => {
                if n_particles == 0 {
                    return Err(Error::domain("n_particles", "need at least one boson"));
                }
                check_finite_u(u)?;
            }
            SpeciesSpec::Fermions { n_up, n_down, u } => {
                if n_up > n_sites {
                    return Err(Error::domain(
                        "n_up",
                        format!("{n_up} spin-up fermions do not fit on {n_sites} sites"),
                    ));
                }
                if n_down > n_sites {
                    return Err(Error::domain(
                        "n_down",
                        format!("{n_down} spin-down fermions do not fit on {n_sites} sites"),
                    ));
                }
                if n_up + n_down == 0 {
                    return Err(Error::domain("n_up", "need at least one fermion"));
                }
                check_finite_u(u)?;
            }
            SpeciesSpec::PolarizedFermions { n_particles } => {
                if n_particles == 0 || n_particles > n_sites {
                    return Err(Error::domain(
                        "n_particles",
                        format!("need 1..={n_sites} polarized fermions, got {n_particles}"),
                    ));
                }
            }
        }
        Ok(self)
    }

    pub fn particle_count(&self) -> usize {
        match *self {
            SpeciesSpec::Bosons { n_particles, .. } => n_particles,
            SpeciesSpec::Fermions { n_up, n_down, .. } => n_up + n_down,
            SpeciesSpec::PolarizedFermions { n_particles } => n_particles,
        }
    }

    /// Interaction strength; zero for polarized fermions.
    pub fn u(&self) -> f64 {
        match *self {
            SpeciesSpec::Bosons { u, .. } | SpeciesSpec::Fermions { u, .. } => u,
            SpeciesSpec::PolarizedFermions { .. } => 0.0,
        }
    }

    /// Same particle content with a different interaction. Polarized
    /// fermions carry no interaction and are returned unchanged.
    pub fn with_u(&self, u: f64) -> Self {
        match *self {
            SpeciesSpec::Bosons { n_particles, .. } => SpeciesSpec::Bosons { n_particles, u },
            SpeciesSpec::Fermions { n_up, n_down, .. } => SpeciesSpec::Fermions { n_up, n_down, u },
            polarized @ SpeciesSpec::PolarizedFermions { .. } => polarized,
        }
    }

    pub fn is_fermionic(&self) -> bool {
        !matches!(self, SpeciesSpec::Bosons { .. })
    }
}

fn check_finite_u(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("u", "interaction must be finite"))
    }
}

/// A single particle of mass `m` on a continuum ring of radius `R`, ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumSpec {
    mass: f64,
    radius: f64,
    omega: f64,
}

impl ContinuumSpec {
    pub fn new(mass: f64, radius: f64, omega: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain("mass", format!("must be positive, got {mass}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain("radius", format!("must be positive, got {radius}")));
        }
        if !omega.is_finite() {
            return Err(Error::domain("omega", "must be finite"));
        }
        Ok(Self {
            mass,
            radius,
            omega,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The flux-like quantity `mΩR²/ħ`.
    pub fn flux(&self) -> f64 {
        self.mass * self.omega * self.radius * self.radius
    }
}
