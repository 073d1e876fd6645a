//! Randomized invariants: global-phase invariance of the derived fields,
//! additivity of interval probabilities, and Faddeeva reflection symmetry.

use num_complex::Complex64;
use proptest::prelude::*;
use qflux::field::{Boundary, Grid1D, PhysConstants, WaveField};
use qflux::hydro::{kinetic_energy_split, probability_density};
use qflux::packets::{gaussian_state, GaussianSpec};
use qflux::specfun::faddeeva;

fn unit_gaussian(k0: f64, t: f64) -> WaveField {
    let pc = PhysConstants::new(1.0, 1.0).unwrap();
    let spec = GaussianSpec::new(1.0, k0, 0.0, pc).unwrap();
    let grid = Grid1D::new(-14.0, 14.0, 1024, Boundary::Periodic).unwrap();
    gaussian_state(&spec, &grid, t).unwrap().field
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn global_phase_leaves_density_and_energy_alone(
        alpha in 0.0..std::f64::consts::TAU,
        k0 in -2.0..2.0f64,
    ) {
        let psi = unit_gaussian(k0, 0.1);
        let phase = Complex64::from_polar(1.0, alpha);
        let rotated = WaveField::new(
            psi.grid().clone(),
            psi.values().iter().map(|v| v * phase).collect(),
            psi.constants(),
        ).unwrap();

        let rho_a = probability_density(&psi);
        let rho_b = probability_density(&rotated);
        for (a, b) in rho_a.iter().zip(&rho_b) {
            prop_assert!((a - b).abs() <= 1e-15 + 1e-12 * a.abs());
        }
        let ea = kinetic_energy_split(&psi, None).unwrap();
        let eb = kinetic_energy_split(&rotated, None).unwrap();
        prop_assert!((ea.e_diff - eb.e_diff).abs() <= 1e-10 * ea.e_total.max(1e-30));
        prop_assert!((ea.e_flow - eb.e_flow).abs() <= 1e-10 * ea.e_total.max(1e-30));
    }

    #[test]
    fn interval_probability_is_additive(
        a in -10.0..-1.0f64,
        mid in -1.0..1.0f64,
        b in 1.0..10.0f64,
    ) {
        let psi = unit_gaussian(0.5, 0.2);
        let left = psi.probability_in_interval(a, mid).unwrap();
        let right = psi.probability_in_interval(mid, b).unwrap();
        let whole = psi.probability_in_interval(a, b).unwrap();
        prop_assert!((left + right - whole).abs() <= 1e-12);
    }

    #[test]
    fn faddeeva_reflection_symmetry(re in -5.0..5.0f64, im in -3.0..3.0f64) {
        // w(-conj(z)) = conj(w(z))
        let z = Complex64::new(re, im);
        let lhs = faddeeva(Complex64::new(-re, im)).unwrap();
        let rhs = faddeeva(z).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }
}
