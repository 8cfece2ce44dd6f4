use eit_core::dressed::{dark_state_residual, perturbative_eigenvalues, RabiPair};
use eit_core::field::FieldSpec;
use eit_core::hamiltonian::{exact_eigenvalues, Branch};
use eit_core::nonlinear::chi_series_closed;
use eit_core::optics::susceptibility_probe;
use eit_core::params::{FockBlock, SystemParams};
use eit_core::state::{adiabatic_state, dark_energy, reduced_density_matrix};
use proptest::prelude::*;

fn physical(delta1: f64, delta2: f64) -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 1.0,
        delta1,
        delta2,
        omega1: 3.2e15,
        omega2: 3.2e15,
        mu12: 1.22e-29,
        mu32: 1e-29,
        atom_density: 3e18,
        mode_volume: 1e-6,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adiabatic_norm_is_time_independent(
        alpha in 0.2f64..3.0,
        beta in 0.2f64..3.0,
        d1 in -0.2f64..0.2,
        t in 0.0f64..50.0,
    ) {
        let p = SystemParams::dimensionless(0.8, 1.1, d1, 0.0);
        let f = FieldSpec::coherent(alpha, beta);
        let n0 = adiabatic_state(&p, &f, 0.0).norm_sqr();
        let nt = adiabatic_state(&p, &f, t).norm_sqr();
        prop_assert!((n0 - nt).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_is_hermitian_with_state_trace(
        alpha in 0.2f64..2.5,
        beta in 0.2f64..2.5,
        d1 in -0.1f64..0.1,
        d2 in -0.1f64..0.1,
        t in 0.0f64..20.0,
    ) {
        let p = SystemParams::dimensionless(1.0, 0.7, d1, d2);
        let f = FieldSpec::coherent(alpha, beta);
        let rho = reduced_density_matrix(&p, &f, t);
        prop_assert!(rho.hermiticity_defect() < 1e-14);
        let norm = adiabatic_state(&p, &f, t).norm_sqr();
        prop_assert!((rho.trace() - norm).abs() < 1e-12);
    }

    #[test]
    fn dark_energy_is_linear_in_two_photon_detuning(
        n1 in 1u32..50,
        n2 in 0u32..50,
        d in 1e-4f64..0.1,
        s in 0.1f64..5.0,
    ) {
        let base = SystemParams { omega1: 0.0, omega2: 0.0, ..SystemParams::dimensionless(0.9, 1.3, 0.0, 0.0) };
        let p = base.with_detunings(d, 0.0);
        let q = base.with_detunings(s * d, 0.0);
        let a = dark_energy(&p, n1, n2);
        let b = dark_energy(&q, n1, n2);
        prop_assert_eq!(a, perturbative_eigenvalues(&p, FockBlock::new(n1, n2).unwrap()).zero);
        prop_assert!((b - s * a).abs() <= 1e-12 * b.abs());
    }

    #[test]
    fn susceptibility_vanishes_on_two_photon_resonance(
        d in -5e6f64..5e6,
        o1 in 1e5f64..1e7,
        o2 in 1e6f64..1e8,
    ) {
        let p = physical(d, d);
        let chi = susceptibility_probe(&p, &RabiPair::new(o1, o2)).unwrap();
        prop_assert_eq!(chi, 0.0);
    }

    #[test]
    fn kerr_sign_follows_detuning_sign(d in 1e3f64..1e7) {
        let plus = chi_series_closed(&physical(d, 0.0), 400.0).unwrap();
        let minus = chi_series_closed(&physical(-d, 0.0), 400.0).unwrap();
        prop_assert!(plus.chi3 * minus.chi3 < 0.0);
        prop_assert!(plus.alternates() && minus.alternates());
    }

    #[test]
    fn perturbative_spectrum_tracks_exact_spectrum(
        n1 in 1u32..200,
        n2 in 0u32..200,
        g1 in 0.3f64..2.0,
        g2 in 0.3f64..2.0,
        d1 in -1e-3f64..1e-3,
        d2 in -1e-3f64..1e-3,
    ) {
        let p = SystemParams::dimensionless(g1, g2, d1, d2);
        let b = FockBlock::new(n1, n2).unwrap();
        let exact = exact_eigenvalues(&p, b).unwrap();
        let approx = perturbative_eigenvalues(&p, b);
        let scale = RabiPair::from_photon_numbers(g1, g2, f64::from(n1), f64::from(n2)).omega_total;
        for br in [Branch::Plus, Branch::Zero, Branch::Minus] {
            let err = (exact.get(br) - approx.get(br)).abs();
            prop_assert!(err < 1e-5 * scale, "{:?}: {}", br, err);
        }
        let exact_sum = exact.sum();
        prop_assert!((exact_sum - (2.0 * d1 - d2)).abs() < 1e-9 * scale);
    }

    #[test]
    fn resonant_dark_state_is_exact(n1 in 1u32..1000, n2 in 0u32..1000, g1 in 0.1f64..3.0, g2 in 0.1f64..3.0) {
        let p = SystemParams::dimensionless(g1, g2, 0.0, 0.0);
        let b = FockBlock::new(n1, n2).unwrap();
        let scale = RabiPair::from_photon_numbers(g1, g2, f64::from(n1), f64::from(n2)).omega_total;
        prop_assert!(dark_state_residual(&p, b) < 1e-12 * scale);
    }
}
