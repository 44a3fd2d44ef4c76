//! Ring currents, densities and winding sectors of many-body states.
//!
//! The bond current is the continuity-equation current `J_ij = i[n_i, H_ij]`
//! in normal order. With the hop `h c†_{j+1} c_j + h.c.`, `h = -t - iΩK`, it
//! reads `(it - ΩK) c†_{j+1} c_j + h.c.`, which is exactly `-∂H(θ)/∂θ` for
//! the uniform twist `h → h e^{iθ}`. On the plane wave with winding `n` the
//! integrated current is `2t sin φ(n) - 2ΩK cos φ(n)`.

use num_complex::Complex64;

use crate::analytic::FAST_CURRENT_ZERO_BAND;
use crate::basis::{FockBasis, Sector};
use crate::error::{Error, Result};
use crate::hamiltonian::{check_compatible, hopping_entries, Bonds, HermitianOperator};
use crate::model::{RingSpec, SpeciesSpec};

/// Forward-hop amplitude of the bond current, `-i h`.
fn current_amplitude(ring: &RingSpec) -> Complex64 {
    -Complex64::i() * ring.hopping()
}

/// Integrated ring current `Σ_j J_{j,j+1}`.
pub fn current_operator(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<HermitianOperator> {
    check_compatible(ring, species, basis)?;
    HermitianOperator::from_upper(
        basis.dimension(),
        hopping_entries(basis, current_amplitude(ring), Bonds::All),
    )
}

/// Current through each bond `(j, j+1)`, `j = 0..N_A`.
pub fn bond_current_operators(
    ring: &RingSpec,
    species: &SpeciesSpec,
    basis: &FockBasis,
) -> Result<Vec<HermitianOperator>> {
    check_compatible(ring, species, basis)?;
    (0..ring.n_sites())
        .map(|j| {
            HermitianOperator::from_upper(
                basis.dimension(),
                hopping_entries(basis, current_amplitude(ring), Bonds::Single(j)),
            )
        })
        .collect()
}

/// Current operators of one ring and basis, built once and reused.
#[derive(Debug, Clone)]
pub struct CurrentObservable {
    total: HermitianOperator,
    bonds: Vec<HermitianOperator>,
}

impl CurrentObservable {
    pub fn new(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<Self> {
        Ok(Self {
            total: current_operator(ring, species, basis)?,
            bonds: bond_current_operators(ring, species, basis)?,
        })
    }

    pub fn total(&self) -> &HermitianOperator {
        &self.total
    }

    /// Current expectation and fast-mode predicates for a normalized state.
    pub fn evaluate(&self, state: &[Complex64], basis: &FockBasis, ring: &RingSpec) -> Result<CurrentReport> {
        let total = real_expectation(&self.total, state)?;
        let per_bond = self
            .bonds
            .iter()
            .map(|op| real_expectation(op, state))
            .collect::<Result<Vec<_>>>()?;
        let n_particles = basis.species().particle_count();
        let sector = basis.sector_of_state(state)?;
        Ok(CurrentReport {
            total_current: total,
            per_particle_current: total / n_particles as f64,
            per_bond,
            sector,
            is_fast_current: total > FAST_CURRENT_ZERO_BAND * ring.t(),
            is_max_winding: sector == max_winding_sector(basis, ring),
        })
    }
}

fn real_expectation(op: &HermitianOperator, state: &[Complex64]) -> Result<f64> {
    let value = op.expectation(state)?;
    debug_assert!(value.im.abs() < 1e-10 * value.re.abs().max(1.0));
    Ok(value.re)
}

/// Sector in which every particle carries the maximal winding `⌊N_A/4⌋`.
pub fn max_winding_sector(basis: &FockBasis, ring: &RingSpec) -> Sector {
    let n = basis.species().particle_count();
    Sector::Winding((n * ring.max_winding()) % ring.n_sites())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentReport {
    /// Integrated current around the ring, energy units.
    pub total_current: f64,
    pub per_particle_current: f64,
    pub per_bond: Vec<f64>,
    pub sector: Sector,
    /// Total current exceeds the zero band `1e-9 t`.
    pub is_fast_current: bool,
    /// State lies in the sector of [`max_winding_sector`].
    pub is_max_winding: bool,
}

/// Expected number of particles on each site.
pub fn occupations(state: &[Complex64], basis: &FockBasis) -> Result<Vec<f64>> {
    if state.len() != basis.dimension() {
        return Err(Error::Length {
            expected: basis.dimension(),
            found: state.len(),
        });
    }
    let mut out = vec![0.0; basis.n_sites()];
    for (k, amp) in state.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (site, o) in out.iter_mut().enumerate() {
            *o += p * basis.occupation(k, site) as f64;
        }
    }
    Ok(out)
}
