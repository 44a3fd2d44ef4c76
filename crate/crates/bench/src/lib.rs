//! Fixtures shared by the benchmarks.

use fastmode_core::{hamiltonian, FockBasis, HermitianOperator, RingSpec, SpeciesSpec};

/// Four fermions on eight sites at strong rotation, the largest system of
/// the interaction scans (dimension 784).
pub fn four_fermions() -> (RingSpec, SpeciesSpec) {
    let ring = RingSpec::new(8, 1.0, 1.0, 0.0)
        .expect("valid ring")
        .with_omega_k_over_t(8.0);
    (ring, SpeciesSpec::Fermions { n_up: 2, n_down: 2, u: 4.0 })
}

pub fn operator(ring: &RingSpec, species: &SpeciesSpec) -> (FockBasis, HermitianOperator) {
    let basis = FockBasis::enumerate(ring, species).expect("basis within cap");
    let h = hamiltonian::build(ring, species, &basis).expect("compatible basis");
    (basis, h)
}
