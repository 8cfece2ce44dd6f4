use eit_core::dressed::RabiPair;
use eit_core::field::FieldSpec;
use eit_core::oracle::{evolve_ramped, suggested_step, RampOrdering, RampProfile, MAX_NORM_DRIFT};
use eit_core::params::SystemParams;
use eit_core::verify::ramp_suite;

fn small_ramp(time_factor: f64, trunc_extra: u32) -> f64 {
    let (alpha, beta) = (1.0, 1.2);
    let p = SystemParams::dimensionless(1.0, 1.0, 0.0, 0.0);
    let base = FieldSpec::coherent(alpha, beta);
    let field =
        FieldSpec::coherent_truncated(alpha, beta, base.trunc1 + trunc_extra, base.trunc2 + trunc_extra);
    let omega_bar =
        RabiPair::from_photon_numbers(p.g1, p.g2, alpha * alpha, beta * beta).omega_total;
    let ramp = RampProfile::sequential(time_factor / omega_bar, RampOrdering::CouplingFirst);
    let dt = suggested_step(&p, &field, 0.8).unwrap();
    let out = evolve_ramped(&p, &field, &ramp, dt).unwrap();
    assert!(out.norm_drift <= MAX_NORM_DRIFT);
    out.fidelity
}

#[test]
fn slower_ramps_are_more_adiabatic() {
    let fast = small_ramp(10.0, 0);
    let mid = small_ramp(20.0, 0);
    let slow = small_ramp(40.0, 0);
    assert!(fast < mid && mid < slow, "{fast} {mid} {slow}");
}

#[test]
fn fidelity_is_insensitive_to_extra_truncation() {
    let a = small_ramp(40.0, 0);
    let b = small_ramp(40.0, 5);
    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
}

#[test]
fn reversed_ordering_is_reported_as_diagnostic() {
    let checks = ramp_suite(RampOrdering::ProbeFirst).unwrap();
    let fid = &checks[0];
    assert!(fid.diagnostic);
    assert!(!fid.counts_as_failure());
    assert!(fid.observed < 0.99, "probe-first fidelity {}", fid.observed);
}
