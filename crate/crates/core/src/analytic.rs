//! Closed-form single-particle physics on the ring lattice and on the
//! continuum ring.
//!
//! A single atom on a homogeneous ring is diagonalized by plane waves
//! `ψ_j = e^{iφj}/√N_A` with per-bond phase `φ(n) = 2πn/N_A`. Their energies
//! are linear in Ω,
//!
//! ```text
//! E(n) = -2 (t cos φ(n) + ΩK sin φ(n))
//! ```
//!
//! and their integrated ring current is `J(n) = dE/dφ = 2t sin φ - 2ΩK cos φ`.
//! The current is defined as `J = -∂⟨H(θ)⟩/∂θ` where the twist θ multiplies
//! every forward hop by `e^{iθ}`; with this orientation a state at rest in the
//! lab frame (n = 0) lags the stirring, `J = -2ΩK`, and the state with a
//! quarter-turn phase per bond carries the constant current `2t`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ContinuumSpec, RingSpec};

/// Relative tolerance used to call two single-particle levels degenerate.
const LEVEL_TIE_TOL: f64 = 1e-12;

/// A single-particle plane wave with winding number `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingState {
    n: usize,
    phase: f64,
}

impl WindingState {
    pub fn new(n: usize, ring: &RingSpec) -> Result<Self> {
        let n_sites = ring.n_sites();
        if n >= n_sites {
            return Err(Error::domain(
                "n",
                format!("winding {n} out of range 0..{n_sites}"),
            ));
        }
        Ok(Self {
            n,
            phase: 2.0 * PI * n as f64 / n_sites as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Phase advance per bond, `φ(n) = 2πn/N_A`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Total phase wound around the ring, `n·2π`.
    pub fn total_phase(&self) -> f64 {
        2.0 * PI * self.n as f64
    }
}

/// All winding states of the ring, `n = 0..N_A`.
pub fn winding_states(ring: &RingSpec) -> Vec<WindingState> {
    (0..ring.n_sites())
        .map(|n| WindingState::new(n, ring).expect("n in range"))
        .collect()
}

/// Energy of a winding state, `E(n) = -2(t cos φ + ΩK sin φ)`.
pub fn energy(state: &WindingState, ring: &RingSpec) -> f64 {
    let (sin, cos) = state.phase.sin_cos();
    -2.0 * (ring.t() * cos + ring.omega_k() * sin)
}

/// Integrated ring current of a winding state, `2t sin φ - 2ΩK cos φ`.
pub fn current(state: &WindingState, ring: &RingSpec) -> f64 {
    let (sin, cos) = state.phase.sin_cos();
    2.0 * ring.t() * sin - 2.0 * ring.omega_k() * cos
}

/// Slope `dE/dΩ` of a winding level.
fn energy_slope(state: &WindingState, ring: &RingSpec) -> f64 {
    -2.0 * ring.k_factor() * state.phase.sin()
}

/// The lowest-energy winding state. At an exact degeneracy the smaller `n`
/// is returned; use [`crossing_frequency`] to locate such points.
pub fn ground_winding(ring: &RingSpec) -> WindingState {
    let mut best = WindingState::new(0, ring).expect("n = 0 exists");
    let mut best_energy = energy(&best, ring);
    for state in winding_states(ring).into_iter().skip(1) {
        let e = energy(&state, ring);
        if e < best_energy - level_tie_tol(ring) {
            best = state;
            best_energy = e;
        }
    }
    best
}

fn level_tie_tol(ring: &RingSpec) -> f64 {
    LEVEL_TIE_TOL * (ring.t() + ring.omega_k().abs())
}

/// Rotation frequency Ω > 0 at which the levels `n1` and `n2` cross, or
/// `None` when they never cross at a positive frequency.
///
/// Solves `ΩK (sin φ1 - sin φ2) = t (cos φ2 - cos φ1)`.
pub fn crossing_frequency(n1: usize, n2: usize, ring: &RingSpec) -> Option<f64> {
    if n1 == n2 {
        return None;
    }
    let s1 = WindingState::new(n1, ring).ok()?;
    let s2 = WindingState::new(n2, ring).ok()?;
    let (sin1, cos1) = s1.phase.sin_cos();
    let (sin2, cos2) = s2.phase.sin_cos();
    let dsin = sin1 - sin2;
    if dsin.abs() < 1e-12 {
        return None;
    }
    let omega_k = ring.t() * (cos2 - cos1) / dsin;
    if omega_k.is_finite() && omega_k > 0.0 {
        Some(omega_k / ring.k_factor())
    } else {
        None
    }
}

/// Closed-form frequency above which the ground state has the maximal
/// winding `⌊N_A/4⌋`: `Ω_c K (1 - cos 2π/N_A) = t sin 2π/N_A`.
///
/// Only meaningful when `N_A` is divisible by 4; otherwise the last level
/// crossing does not follow this formula and a domain error is returned.
pub fn fast_mode_threshold(ring: &RingSpec) -> Result<f64> {
    let n_sites = ring.n_sites();
    if !n_sites.is_multiple_of(4) {
        return Err(Error::domain(
            "n_sites",
            format!(
                "the closed-form threshold needs a ring size divisible by 4, got {n_sites}; \
                 use crossing_frequency instead"
            ),
        ));
    }
    let alpha = 2.0 * PI / n_sites as f64;
    Ok(ring.t() / ring.k_factor() * alpha.sin() / (1.0 - alpha.cos()))
}

/// Ground-state current of a single particle is positive.
pub fn is_fast_current(current: f64, t: f64) -> bool {
    current > FAST_CURRENT_ZERO_BAND * t
}

/// Width of the band around zero current reported as "no current".
pub const FAST_CURRENT_ZERO_BAND: f64 = 1e-9;

/// Ground winding is the maximal one, `⌊N_A/4⌋`.
pub fn is_max_winding(state: &WindingState, ring: &RingSpec) -> bool {
    state.n() == ring.max_winding()
}

/// Total current of spin-polarized fermions filling the lowest levels.
///
/// When the last filled level is degenerate with the first empty one the
/// filling is ambiguous; `left` and `right` then hold the limits approached
/// from smaller and larger Ω respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedCurrent {
    pub left: f64,
    pub right: f64,
}

impl PolarizedCurrent {
    pub fn is_degenerate(&self) -> bool {
        self.left != self.right
    }

    /// Midpoint of the two limits; the exact value away from degeneracies.
    pub fn value(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Sums the single-particle currents over the `n_particles` lowest winding
/// states.
pub fn polarized_current(n_particles: usize, ring: &RingSpec) -> Result<PolarizedCurrent> {
    if n_particles == 0 || n_particles > ring.n_sites() {
        return Err(Error::domain(
            "n_particles",
            format!(
                "need 1..={} polarized fermions, got {n_particles}",
                ring.n_sites()
            ),
        ));
    }
    let states = winding_states(ring);
    let tol = level_tie_tol(ring);
    let filled_sum = |order: &dyn Fn(&WindingState, &WindingState) -> std::cmp::Ordering| {
        let mut sorted = states.clone();
        sorted.sort_by(|a, b| {
            let (ea, eb) = (energy(a, ring), energy(b, ring));
            if (ea - eb).abs() <= tol {
                order(a, b)
            } else {
                ea.total_cmp(&eb)
            }
        });
        sorted[..n_particles]
            .iter()
            .map(|s| current(s, ring))
            .sum::<f64>()
    };
    // Just below a crossing the level with the larger slope dE/dΩ lies lower.
    let left = filled_sum(&|a, b| {
        energy_slope(b, ring)
            .total_cmp(&energy_slope(a, ring))
            .then(a.n.cmp(&b.n))
    });
    let right = filled_sum(&|a, b| {
        energy_slope(a, ring)
            .total_cmp(&energy_slope(b, ring))
            .then(a.n.cmp(&b.n))
    });
    // Rounding differences in the sum must not masquerade as degeneracy.
    let scale = (ring.t() + ring.omega_k().abs()) * n_particles as f64;
    if (left - right).abs() <= 1e-12 * scale {
        Ok(PolarizedCurrent {
            left,
            right: left,
        })
    } else {
        Ok(PolarizedCurrent { left, right })
    }
}

/// Mean-field energy per boson of a condensate in the plane wave `state`.
///
/// A uniform condensate at `density` bosons per site gains the interaction
/// energy `U ρ` per particle from `U n(n-1)`, independent of the winding, so
/// the preferred winding is the noninteracting one.
pub fn meanfield_energy_per_particle(
    state: &WindingState,
    ring: &RingSpec,
    density: f64,
    u: f64,
) -> Result<f64> {
    if !(density.is_finite() && density >= 0.0) {
        return Err(Error::domain(
            "density",
            format!("must be non-negative, got {density}"),
        ));
    }
    Ok(energy(state, ring) + u * density)
}

/// Continuum ring spectrum
/// `E_n = (n - mΩR²)²/(2mR²) - mΩ²R²/2` with ħ = 1.
pub fn continuum_spectrum(n: i64, spec: &ContinuumSpec) -> f64 {
    let inertia = spec.mass() * spec.radius() * spec.radius();
    let shifted = n as f64 - spec.flux();
    shifted * shifted / (2.0 * inertia) - 0.5 * inertia * spec.omega() * spec.omega()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn ring(n_sites: usize, omega_k_over_t: f64) -> RingSpec {
        RingSpec::new(n_sites, 1.0, 1.0, 0.0)
            .unwrap()
            .with_omega_k_over_t(omega_k_over_t)
    }

    fn ws(n: usize, r: &RingSpec) -> WindingState {
        WindingState::new(n, r).unwrap()
    }

    #[test]
    fn energy_examples() {
        let r = ring(8, 3.7);
        assert!((energy(&ws(0, &r), &r) + 2.0).abs() < 1e-14);
        assert!((energy(&ws(2, &r), &r) + 2.0 * r.omega_k()).abs() < 1e-12);
        let r = ring(8, 1.0);
        assert!((energy(&ws(1, &r), &r) + 2.0 * SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn current_examples() {
        for omega_k in [0.0, 1.0, 10.0] {
            let r = ring(8, omega_k);
            assert!((current(&ws(2, &r), &r) - 2.0).abs() < 1e-12);
            assert!((current(&ws(0, &r), &r) + 2.0 * r.omega_k()).abs() < 1e-12);
        }
        let r = ring(8, 0.0);
        assert_eq!(current(&ws(0, &r), &r), 0.0);
    }

    #[test]
    fn winding_out_of_range() {
        let r = ring(8, 0.0);
        assert!(WindingState::new(8, &r).is_err());
        assert!((ws(3, &r).total_phase() - 6.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn ground_winding_examples() {
        assert_eq!(ground_winding(&ring(8, 0.0)).n(), 0);
        assert_eq!(ground_winding(&ring(8, 10.0)).n(), 2);
        assert_eq!(ground_winding(&ring(8, 1.0)).n(), 1);
    }

    #[test]
    fn ground_winding_prefers_smaller_n_at_a_tie() {
        let r = ring(8, (PI / 8.0).tan());
        assert_eq!(ground_winding(&r).n(), 0);
    }

    #[test]
    fn crossing_examples() {
        let r = ring(8, 0.0);
        let k = r.k_factor();
        let c01 = crossing_frequency(0, 1, &r).unwrap() * k;
        assert!((c01 - (SQRT_2 - 1.0)).abs() < 1e-12);
        let c12 = crossing_frequency(1, 2, &r).unwrap() * k;
        assert!((c12 - (1.0 + SQRT_2)).abs() < 1e-12);
        assert_eq!(crossing_frequency(1, 2, &ring(6, 0.0)), None);
        assert_eq!(crossing_frequency(3, 3, &r), None);
    }

    #[test]
    fn crossings_match_the_energy_oracle() {
        // Bisection on E(n1) - E(n2), independent of the closed form.
        for n_sites in [4usize, 8, 12, 16] {
            let base = ring(n_sites, 0.0);
            for n in 0..base.max_winding() {
                let diff = |x: f64| {
                    let r = base.with_omega_k_over_t(x);
                    energy(&ws(n, &r), &r) - energy(&ws(n + 1, &r), &r)
                };
                let (mut lo, mut hi) = (0.0, 1e3);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if (diff(mid) > 0.0) == (diff(lo) > 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let x = crossing_frequency(n, n + 1, &base).unwrap() * base.k_factor();
                assert!((x - lo).abs() < 1e-9, "N_A={n_sites} n={n}: {x} vs {lo}");
            }
        }
    }

    #[test]
    fn threshold_examples() {
        let r4 = ring(4, 0.0);
        let w4 = fast_mode_threshold(&r4).unwrap();
        assert!((w4 - r4.t() / r4.k_factor()).abs() < 1e-12);

        let r8 = ring(8, 0.0);
        let w8 = fast_mode_threshold(&r8).unwrap() * r8.k_factor();
        assert!((w8 - (1.0 + SQRT_2)).abs() < 1e-12);
        let c = crossing_frequency(1, 2, &r8).unwrap() * r8.k_factor();
        assert!((w8 - c).abs() < 1e-12);

        let r12 = ring(12, 0.0);
        let w12 = fast_mode_threshold(&r12).unwrap() * r12.k_factor();
        assert!((w12 - (2.0 + 3f64.sqrt())).abs() < 1e-12);
        let c = crossing_frequency(2, 3, &r12).unwrap() * r12.k_factor();
        assert!((w12 - c).abs() < 1e-12);

        assert!(fast_mode_threshold(&ring(6, 0.0)).is_err());
    }

    #[test]
    fn polarized_examples() {
        let r = ring(8, 10.0);
        let two = polarized_current(2, &r).unwrap();
        assert!(!two.is_degenerate());
        assert!((two.value() - (2.0 + SQRT_2 - 10.0 * SQRT_2)).abs() < 1e-12);
        assert!(two.value() < 0.0);

        let three = polarized_current(3, &r).unwrap();
        assert!((three.value() - 2.0 * (1.0 + SQRT_2)).abs() < 1e-12);

        for x in [0.1, 0.9, 4.0] {
            let r = ring(8, x);
            let one = polarized_current(1, &r).unwrap().value();
            assert!((one - current(&ground_winding(&r), &r)).abs() < 1e-14);
        }
        assert!(polarized_current(9, &r).is_err());
    }

    #[test]
    fn polarized_reports_both_limits_at_a_crossing() {
        let at = (PI / 8.0).tan();
        let r = ring(8, at);
        let pc = polarized_current(1, &r).unwrap();
        assert!(pc.is_degenerate());
        let below = polarized_current(1, &ring(8, at - 1e-7)).unwrap().value();
        let above = polarized_current(1, &ring(8, at + 1e-7)).unwrap().value();
        assert!((pc.left - below).abs() < 1e-5);
        assert!((pc.right - above).abs() < 1e-5);
    }

    #[test]
    fn meanfield_examples() {
        let r = ring(8, 10.0);
        let s = ws(1, &r);
        assert_eq!(
            meanfield_energy_per_particle(&s, &r, 3.0, 0.0).unwrap(),
            energy(&s, &r)
        );
        let d = meanfield_energy_per_particle(&ws(1, &r), &r, 2.0, 5.0).unwrap()
            - meanfield_energy_per_particle(&ws(3, &r), &r, 2.0, 5.0).unwrap();
        assert!((d - (energy(&ws(1, &r), &r) - energy(&ws(3, &r), &r))).abs() < 1e-12);

        let argmin = winding_states(&r)
            .into_iter()
            .min_by(|a, b| {
                let ea = meanfield_energy_per_particle(a, &r, 2.0, 5.0).unwrap();
                let eb = meanfield_energy_per_particle(b, &r, 2.0, 5.0).unwrap();
                ea.total_cmp(&eb)
            })
            .unwrap();
        assert_eq!(argmin.n(), 2);
        assert!(meanfield_energy_per_particle(&s, &r, -1.0, 1.0).is_err());
    }

    #[test]
    fn continuum_examples() {
        let spec = ContinuumSpec::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(continuum_spectrum(0, &spec), 0.0);
        let spec = ContinuumSpec::new(1.0, 1.0, 1.0).unwrap();
        assert!((continuum_spectrum(1, &spec) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn continuum_half_integer_flux_is_doubly_degenerate() {
        for k in 0..3i64 {
            let spec = ContinuumSpec::new(2.0, 0.5, (k as f64 + 0.5) / 0.5).unwrap();
            for l in 0..3i64 {
                let a = continuum_spectrum(k + l + 1, &spec);
                let b = continuum_spectrum(k - l, &spec);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    /// ⟨ψ_n|H(θ)|ψ_n⟩ for the plane wave, with H(θ) assembled bond by bond.
    fn twisted_expectation(n: usize, r: &RingSpec, theta: f64) -> f64 {
        let ns = r.n_sites();
        let phi = 2.0 * PI * n as f64 / ns as f64;
        let psi: Vec<Complex64> = (0..ns)
            .map(|j| Complex64::from_polar(1.0 / (ns as f64).sqrt(), phi * j as f64))
            .collect();
        let forward = r.hopping() * Complex64::from_polar(1.0, theta);
        let mut e = Complex64::new(0.0, 0.0);
        for j in 0..ns {
            let jp = (j + 1) % ns;
            e += psi[jp].conj() * forward * psi[j] + psi[j].conj() * forward.conj() * psi[jp];
        }
        e.re
    }

    proptest! {
        #[test]
        fn current_is_minus_twist_derivative(
            n_sites in 3usize..20, n_frac in 0.0f64..1.0, x in -5.0f64..5.0
        ) {
            let r = ring(n_sites, x);
            let n = ((n_frac * n_sites as f64) as usize).min(n_sites - 1);
            let h = 1e-6;
            let deriv = (twisted_expectation(n, &r, h) - twisted_expectation(n, &r, -h)) / (2.0 * h);
            prop_assert!((-deriv - current(&ws(n, &r), &r)).abs() < 1e-6);
            prop_assert!((twisted_expectation(n, &r, 0.0) - energy(&ws(n, &r), &r)).abs() < 1e-10);
        }

        #[test]
        fn crossings_increase_with_winding(n_quarter in 1usize..8) {
            let r = ring(4 * n_quarter, 0.0);
            let xs: Vec<f64> = (0..r.max_winding())
                .map(|n| crossing_frequency(n, n + 1, &r).unwrap())
                .collect();
            prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn polarized_current_is_piecewise_linear(n_particles in 1usize..8, x in 0.0f64..12.0) {
            let r = ring(8, 0.0);
            let h = 1e-3;
            // Skip windows containing a single-particle level crossing.
            let ok = |y: f64| {
                let pc = polarized_current(n_particles, &r.with_omega_k_over_t(y)).unwrap();
                pc.value()
            };
            let crosses = (0..8).flat_map(|a| (0..8).map(move |b| (a, b)))
                .filter_map(|(a, b)| crossing_frequency(a, b, &r))
                .any(|w| ((w * r.k_factor()) - x).abs() < 2.0 * h);
            prop_assume!(!crosses);
            let (a, b, c) = (ok(x - h), ok(x), ok(x + h));
            prop_assert!((a + c - 2.0 * b).abs() < 1e-9);
        }

        #[test]
        fn meanfield_argmin_is_interaction_independent(
            x in -10.0f64..10.0, u in -10.0f64..10.0, density in 0.0f64..5.0
        ) {
            let r = ring(8, x);
            let pick = |f: &dyn Fn(&WindingState) -> f64| {
                winding_states(&r).into_iter()
                    .min_by(|a, b| f(a).total_cmp(&f(b)).then(a.n().cmp(&b.n())))
                    .unwrap().n()
            };
            let mf = pick(&|s| meanfield_energy_per_particle(s, &r, density, u).unwrap());
            let bare = pick(&|s| energy(s, &r));
            prop_assert_eq!(mf, bare);
        }
    }
}
