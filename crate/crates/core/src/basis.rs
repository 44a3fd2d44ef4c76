//! Occupation-number bases for bosons and spin-1/2 fermions on the ring.
//!
//! Fermion sign convention: a basis state is
//! `Π_{i↑ ascending} c†_{i↑} Π_{i↓ ascending} c†_{i↓} |0⟩`, all spin-up
//! creators to the left of all spin-down ones. Every matrix element derives
//! its sign from this ordering.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{RingSpec, SpeciesSpec};

/// Default upper bound on the number of basis states.
pub const DEFAULT_DIMENSION_CAP: usize = 2_000_000;

/// Tolerance for recognizing a vector as a translation eigenvector.
pub const SECTOR_TOL: f64 = 1e-8;

/// Bosons per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BosonFockState {
    pub occupations: Vec<u32>,
}

/// Occupied sites of each spin species, bit `i` standing for site `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FermionFockState {
    pub up_mask: u64,
    pub down_mask: u64,
}

#[derive(Debug, Clone)]
enum States {
    Bosons {
        states: Vec<BosonFockState>,
        index: HashMap<BosonFockState, usize>,
    },
    Fermions {
        states: Vec<FermionFockState>,
        index: HashMap<FermionFockState, usize>,
    },
}

/// An enumerated many-body basis at fixed particle numbers.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_sites: usize,
    species: SpeciesSpec,
    states: States,
}

/// Translation sector of a many-body vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Eigenvector of the one-site shift, labelled by its winding `q`.
    Winding(usize),
    /// Not a translation eigenvector.
    Mixed,
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sector::Winding(q) => write!(f, "{q}"),
            Sector::Mixed => f.write_str("mixed"),
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Hilbert-space dimension of `species` on `ring` without enumerating it.
pub fn dimension_of(ring: &RingSpec, species: &SpeciesSpec) -> u128 {
    let ns = ring.n_sites() as u64;
    match *species {
        SpeciesSpec::Bosons { n_particles, .. } => {
            binomial(n_particles as u64 + ns - 1, ns - 1)
        }
        SpeciesSpec::Fermions { n_up, n_down, .. } => {
            binomial(ns, n_up as u64) * binomial(ns, n_down as u64)
        }
        SpeciesSpec::PolarizedFermions { n_particles } => binomial(ns, n_particles as u64),
    }
}

/// All `n_sites`-bit masks with `count` bits set, ascending.
fn masks_with_popcount(n_sites: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if count == 0 {
        out.push(0);
        return out;
    }
    if count > n_sites {
        return out;
    }
    let limit: u128 = 1u128 << n_sites;
    let mut mask: u64 = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
    loop {
        out.push(mask);
        // Gosper's hack: next integer with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 {
            break;
        }
        let next = (((r ^ mask) >> 2) / c) | r;
        if next as u128 >= limit || next < mask {
            break;
        }
        mask = next;
    }
    out
}

/// Boson occupations summing to `n_particles`, lexicographically ascending.
fn boson_occupations(n_sites: usize, n_particles: usize) -> Vec<BosonFockState> {
    fn fill(site: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<BosonFockState>) {
        if site + 1 == cur.len() {
            cur[site] = left;
            out.push(BosonFockState {
                occupations: cur.clone(),
            });
            return;
        }
        for n in 0..=left {
            cur[site] = n;
            fill(site + 1, left - n, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_sites];
    fill(0, n_particles as u32, &mut cur, &mut out);
    out
}

/// Shifts every bit of `mask` one site forward around the ring, returning
/// the new mask and the fermionic sign of the reordering.
fn rotate_mask(mask: u64, n_sites: usize) -> (u64, f64) {
    let last = 1u64 << (n_sites - 1);
    let all = if n_sites == 64 { u64::MAX } else { (1u64 << n_sites) - 1 };
    let wraps = mask & last != 0;
    let shifted = ((mask << 1) & all) | if wraps { 1 } else { 0 };
    // The wrapped creator moves past every other particle of its species.
    let sign = if wraps && (mask.count_ones() - 1) % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    (shifted, sign)
}

impl BosonFockState {
    pub fn translate(&self) -> (BosonFockState, f64) {
        let mut occupations = self.occupations.clone();
        occupations.rotate_right(1);
        (BosonFockState { occupations }, 1.0)
    }
}

impl FermionFockState {
    pub fn translate(&self, n_sites: usize) -> (FermionFockState, f64) {
        let (up_mask, s_up) = rotate_mask(self.up_mask, n_sites);
        let (down_mask, s_down) = rotate_mask(self.down_mask, n_sites);
        (FermionFockState { up_mask, down_mask }, s_up * s_down)
    }
}

impl FockBasis {
    /// Enumerates the basis with the default dimension cap.
    pub fn enumerate(ring: &RingSpec, species: &SpeciesSpec) -> Result<Self> {
        Self::enumerate_with_cap(ring, species, DEFAULT_DIMENSION_CAP)
    }

    pub fn enumerate_with_cap(ring: &RingSpec, species: &SpeciesSpec, cap: usize) -> Result<Self> {
        let species = species.validate(ring)?;
        let dimension = dimension_of(ring, &species);
        if dimension > cap as u128 {
            return Err(Error::Resource { dimension, cap });
        }
        let n_sites = ring.n_sites();
        let states = match species {
            SpeciesSpec::Bosons { n_particles, .. } => {
                let states = boson_occupations(n_sites, n_particles);
                let index = states
                    .iter()
                    .enumerate()
                    .map(|(k, s)| (s.clone(), k))
                    .collect();
                States::Bosons { states, index }
            }
            SpeciesSpec::Fermions { n_up, n_down, .. } => fermion_states(n_sites, n_up, n_down),
            SpeciesSpec::PolarizedFermions { n_particles } => {
                fermion_states(n_sites, n_particles, 0)
            }
        };
        Ok(Self {
            n_sites,
            species,
            states,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn species(&self) -> &SpeciesSpec {
        &self.species
    }

    pub fn dimension(&self) -> usize {
        match &self.states {
            States::Bosons { states, .. } => states.len(),
            States::Fermions { states, .. } => states.len(),
        }
    }

    pub fn boson_states(&self) -> Option<&[BosonFockState]> {
        match &self.states {
            States::Bosons { states, .. } => Some(states),
            States::Fermions { .. } => None,
        }
    }

    pub fn fermion_states(&self) -> Option<&[FermionFockState]> {
        match &self.states {
            States::Fermions { states, .. } => Some(states),
            States::Bosons { .. } => None,
        }
    }

    pub fn index_of_boson(&self, state: &BosonFockState) -> Option<usize> {
        match &self.states {
            States::Bosons { index, .. } => index.get(state).copied(),
            States::Fermions { .. } => None,
        }
    }

    pub fn index_of_fermion(&self, state: &FermionFockState) -> Option<usize> {
        match &self.states {
            States::Fermions { index, .. } => index.get(state).copied(),
            States::Bosons { .. } => None,
        }
    }

    /// Occupation of `site` in basis state `k`, summed over spin.
    pub fn occupation(&self, k: usize, site: usize) -> u32 {
        match &self.states {
            States::Bosons { states, .. } => states[k].occupations[site],
            States::Fermions { states, .. } => {
                let s = states[k];
                ((s.up_mask >> site) & 1) as u32 + ((s.down_mask >> site) & 1) as u32
            }
        }
    }

    /// Image of basis state `k` under the one-site shift, with its sign.
    pub fn translate_index(&self, k: usize) -> (usize, f64) {
        match &self.states {
            States::Bosons { states, index } => {
                let (s, sign) = states[k].translate();
                (index[&s], sign)
            }
            States::Fermions { states, index } => {
                let (s, sign) = states[k].translate(self.n_sites);
                (index[&s], sign)
            }
        }
    }

    /// Applies the many-body one-site shift `T` to an amplitude vector.
    pub fn translate_vector(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dimension() {
            return Err(Error::Length {
                expected: self.dimension(),
                found: v.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (k, &amp) in v.iter().enumerate() {
            let (image, sign) = self.translate_index(k);
            out[image] = amp * sign;
        }
        Ok(out)
    }

    /// Translation sector of a normalized vector.
    ///
    /// A single particle in the plane wave `e^{iφ(n) j}` satisfies
    /// `T ψ = e^{-iφ(n)} ψ`; the label `q` is defined so that this state has
    /// `q = n`, i.e. `T ψ = e^{-2πiq/N_A} ψ`.
    pub fn sector_of_state(&self, v: &[Complex64]) -> Result<Sector> {
        let shifted = self.translate_vector(v)?;
        let overlap: Complex64 = v
            .iter()
            .zip(&shifted)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let residual = shifted
            .iter()
            .zip(v)
            .map(|(b, a)| (b - overlap * a).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > SECTOR_TOL || (overlap.norm() - 1.0).abs() > SECTOR_TOL {
            return Ok(Sector::Mixed);
        }
        let n = self.n_sites as f64;
        let q = (-overlap.arg() * n / (2.0 * PI)).round() as i64;
        Ok(Sector::Winding(q.rem_euclid(self.n_sites as i64) as usize))
    }
}

impl FockBasis {
    /// Rotates an orthonormal set spanning a translation-invariant subspace
    /// (a degenerate eigenspace) into translation eigenvectors and labels
    /// each of them.
    pub fn sector_eigenbasis(&self, vectors: &[Vec<Complex64>]) -> Result<Vec<(Sector, Vec<Complex64>)>> {
        if vectors.len() <= 1 {
            return vectors
                .iter()
                .map(|v| Ok((self.sector_of_state(v)?, v.clone())))
                .collect();
        }
        let c = vectors.len();
        let shifted = vectors
            .iter()
            .map(|v| self.translate_vector(v))
            .collect::<Result<Vec<_>>>()?;
        // T restricted to the subspace is unitary with eigenvalues on the unit
        // circle. A generic phase rotation makes the Hermitian part
        // non-degenerate between distinct sectors.
        let gamma = Complex64::from_polar(1.0, 0.3 * 2.0 * PI / self.n_sites as f64);
        let mut m = vec![Complex64::new(0.0, 0.0); c * c];
        for j in 0..c {
            for i in 0..c {
                let tij: Complex64 = vectors[i].iter().zip(&shifted[j]).map(|(a, b)| a.conj() * b).sum();
                m[j * c + i] += 0.5 * gamma * tij;
                m[i * c + j] += 0.5 * (gamma * tij).conj();
            }
        }
        let eig = crate::eigen::dense::DenseEigen::new(m, c, 0)?;
        let mut out = Vec::with_capacity(c);
        for coeffs in eig.vectors(0..c) {
            let mut v = vec![Complex64::new(0.0, 0.0); self.dimension()];
            for (vec, &a) in vectors.iter().zip(&coeffs) {
                for (o, x) in v.iter_mut().zip(vec) {
                    *o += a * x;
                }
            }
            out.push((self.sector_of_state(&v)?, v));
        }
        Ok(out)
    }
}

fn fermion_states(n_sites: usize, n_up: usize, n_down: usize) -> States {
    let ups = masks_with_popcount(n_sites, n_up);
    let downs = masks_with_popcount(n_sites, n_down);
    let states: Vec<FermionFockState> = ups
        .iter()
        .flat_map(|&up_mask| {
            downs
                .iter()
                .map(move |&down_mask| FermionFockState { up_mask, down_mask })
        })
        .collect();
    let index = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    States::Fermions { states, index }
}
