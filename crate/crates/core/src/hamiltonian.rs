//! Rotating-frame Hubbard Hamiltonians on an enumerated Fock basis.
//!
//! Every ring bond `(j, j+1)` carries the forward hop `h c†_{j+1} c_j` and its
//! conjugate, with `h = -t - iΩK`. This orientation makes the single-particle
//! spectrum `E(n) = -2(t cos φ(n) + ΩK sin φ(n))`.
//!
//! Interactions follow the printed forms literally: `U Σ_i n_i(n_i - 1)` for
//! bosons (note: no factor 1/2, so this is twice the common `U/2` convention)
//! and `U Σ_i n_{i↑} n_{i↓}` for fermions.

use num_complex::Complex64;

use crate::basis::FockBasis;
use crate::error::{Error, Result};
use crate::model::{RingSpec, SpeciesSpec};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sparse Hermitian matrix stored as the upper triangle in coordinate form.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dimension: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl HermitianOperator {
    /// Builds an operator from upper-triangle entries `(row, col, value)`
    /// with `row <= col`. Repeated positions are summed.
    pub fn from_upper(dimension: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::domain("dimension", "operator must be non-empty"));
        }
        for &(r, c, v) in &entries {
            if r > c || c >= dimension {
                return Err(Error::Mismatch(format!(
                    "entry ({r}, {c}) is not in the upper triangle of a {dimension}-dimensional operator"
                )));
            }
            if r == c && v.im.abs() > 1e-14 * v.re.abs().max(1.0) {
                return Err(Error::Mismatch(format!(
                    "diagonal entry {r} has imaginary part {}",
                    v.im
                )));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        for e in merged.iter_mut().filter(|e| e.0 == e.1) {
            e.2.im = 0.0;
        }
        Ok(Self {
            dimension,
            entries: merged,
        })
    }

    /// Upper triangle of a dense row-major Hermitian matrix.
    pub fn from_dense(dimension: usize, rows: &[Complex64]) -> Result<Self> {
        if rows.len() != dimension * dimension {
            return Err(Error::Length {
                expected: dimension * dimension,
                found: rows.len(),
            });
        }
        let mut entries = Vec::new();
        for r in 0..dimension {
            for c in r..dimension {
                let v = rows[r * dimension + c];
                if v != ZERO {
                    entries.push((r, c, v));
                }
            }
        }
        Self::from_upper(dimension, entries)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    /// Returns `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![ZERO; self.dimension];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Writes `H v` into `out`.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        if v.len() != self.dimension {
            return Err(Error::Length {
                expected: self.dimension,
                found: v.len(),
            });
        }
        if out.len() != self.dimension {
            return Err(Error::Length {
                expected: self.dimension,
                found: out.len(),
            });
        }
        out.fill(ZERO);
        for &(r, c, h) in &self.entries {
            out[r] += h * v[c];
            if r != c {
                out[c] += h.conj() * v[r];
            }
        }
        Ok(())
    }

    /// `⟨v, H v⟩`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        let hv = self.apply(v)?;
        Ok(v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum())
    }

    /// Full matrix, column-major.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.dimension;
        let mut a = vec![ZERO; n * n];
        for &(r, c, h) in &self.entries {
            a[c * n + r] += h;
            if r != c {
                a[r * n + c] += h.conj();
            }
        }
        a
    }

    /// Sum of two operators on the same space.
    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.dimension != other.dimension {
            return Err(Error::Mismatch(format!(
                "cannot add operators of dimension {} and {}",
                self.dimension, other.dimension
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::from_upper(self.dimension, entries)
    }
}

/// Which ring bonds a hopping operator runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Bonds {
    All,
    Single(usize),
}

impl Bonds {
    fn contains(&self, bond: usize) -> bool {
        match *self {
            Bonds::All => true,
            Bonds::Single(b) => b == bond,
        }
    }
}

/// Sign of `c†_dst c_src` acting on a single-species occupation mask.
fn hop_sign(mask: u64, src: usize, dst: usize) -> f64 {
    let (lo, hi) = if src < dst { (src, dst) } else { (dst, src) };
    let between = if hi - lo <= 1 {
        0
    } else {
        (mask >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1)
    };
    if between.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Upper-triangle entries of `Σ_bonds (a c†_{j+1} c_j + a* c†_j c_{j+1})`,
/// summed over spin for fermions.
pub(crate) fn hopping_entries(
    basis: &FockBasis,
    forward: Complex64,
    bonds: Bonds,
) -> Vec<(usize, usize, Complex64)> {
    let n_sites = basis.n_sites();
    let mut entries = Vec::new();
    let moves = |j: usize| {
        let jp = (j + 1) % n_sites;
        [(j, jp, forward), (jp, j, forward.conj())]
    };
    if let Some(states) = basis.boson_states() {
        let mut scratch;
        for (k, state) in states.iter().enumerate() {
            for j in (0..n_sites).filter(|&j| bonds.contains(j)) {
                for (src, dst, amp) in moves(j) {
                    let n_src = state.occupations[src];
                    if n_src == 0 {
                        continue;
                    }
                    let n_dst = state.occupations[dst];
                    scratch = state.clone();
                    scratch.occupations[src] -= 1;
                    scratch.occupations[dst] += 1;
                    let target = basis
                        .index_of_boson(&scratch)
                        .expect("hopping preserves particle number");
                    if target < k {
                        let factor = ((n_src as f64) * (n_dst as f64 + 1.0)).sqrt();
                        entries.push((target, k, amp * factor));
                    }
                }
            }
        }
    } else if let Some(states) = basis.fermion_states() {
        for (k, state) in states.iter().enumerate() {
            for j in (0..n_sites).filter(|&j| bonds.contains(j)) {
                for (src, dst, amp) in moves(j) {
                    let (src_bit, dst_bit) = (1u64 << src, 1u64 << dst);
                    for spin_up in [true, false] {
                        let mask = if spin_up { state.up_mask } else { state.down_mask };
                        if mask & src_bit == 0 || mask & dst_bit != 0 {
                            continue;
                        }
                        let moved = mask ^ src_bit ^ dst_bit;
                        let mut next = *state;
                        if spin_up {
                            next.up_mask = moved;
                        } else {
                            next.down_mask = moved;
                        }
                        let target = basis
                            .index_of_fermion(&next)
                            .expect("hopping preserves particle number");
                        if target < k {
                            entries.push((target, k, amp * hop_sign(mask, src, dst)));
                        }
                    }
                }
            }
        }
    }
    entries
}

fn interaction_entries(basis: &FockBasis, u: f64) -> Vec<(usize, usize, Complex64)> {
    if u == 0.0 {
        return Vec::new();
    }
    let diag = |k: usize, value: f64| (k, k, Complex64::new(value, 0.0));
    if let Some(states) = basis.boson_states() {
        states
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let pairs: u32 = s.occupations.iter().map(|&n| n * n.saturating_sub(1)).sum();
                diag(k, u * pairs as f64)
            })
            .filter(|e| e.2.re != 0.0)
            .collect()
    } else {
        basis
            .fermion_states()
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(k, s)| diag(k, u * (s.up_mask & s.down_mask).count_ones() as f64))
            .filter(|e| e.2.re != 0.0)
            .collect()
    }
}

fn same_content(a: &SpeciesSpec, b: &SpeciesSpec) -> bool {
    use SpeciesSpec::*;
    match (a, b) {
        (Bosons { n_particles: x, .. }, Bosons { n_particles: y, .. }) => x == y,
        (Fermions { n_up: u1, n_down: d1, .. }, Fermions { n_up: u2, n_down: d2, .. }) => {
            u1 == u2 && d1 == d2
        }
        (PolarizedFermions { n_particles: x }, PolarizedFermions { n_particles: y }) => x == y,
        _ => false,
    }
}

/// Checks that `basis` was enumerated for `species` on `ring`.
pub(crate) fn check_compatible(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<()> {
    if basis.n_sites() != ring.n_sites() {
        return Err(Error::Mismatch(format!(
            "basis has {} sites, ring has {}",
            basis.n_sites(),
            ring.n_sites()
        )));
    }
    if !same_content(species, basis.species()) {
        return Err(Error::Mismatch(format!(
            "basis was enumerated for {:?}, not {:?}",
            basis.species(),
            species
        )));
    }
    Ok(())
}

/// Boson Hubbard Hamiltonian with complex hopping `-t - iΩK`.
pub fn build_boson(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<HermitianOperator> {
    if !matches!(species, SpeciesSpec::Bosons { .. }) {
        return Err(Error::Mismatch(format!("build_boson called with {species:?}")));
    }
    build_twisted(ring, species, basis, 0.0)
}

/// Fermion Hubbard Hamiltonian; polarized fermions are treated as a single
/// spin species without interaction.
pub fn build_fermion(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<HermitianOperator> {
    if !species.is_fermionic() {
        return Err(Error::Mismatch(format!("build_fermion called with {species:?}")));
    }
    build_twisted(ring, species, basis, 0.0)
}

/// Hamiltonian for whichever species the basis holds.
pub fn build(ring: &RingSpec, species: &SpeciesSpec, basis: &FockBasis) -> Result<HermitianOperator> {
    build_twisted(ring, species, basis, 0.0)
}

/// Hamiltonian with every forward hop multiplied by the twist `e^{iθ}`.
pub fn build_twisted(
    ring: &RingSpec,
    species: &SpeciesSpec,
    basis: &FockBasis,
    theta: f64,
) -> Result<HermitianOperator> {
    check_compatible(ring, species, basis)?;
    let forward = ring.hopping() * Complex64::from_polar(1.0, theta);
    let mut entries = hopping_entries(basis, forward, Bonds::All);
    entries.extend(interaction_entries(basis, species.u()));
    HermitianOperator::from_upper(basis.dimension(), entries)
}
