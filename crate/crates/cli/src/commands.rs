//! Subcommand implementations. Each returns a fully populated record.

use std::path::Path;

use eit_core::dressed::perturbative_eigenvalues;
use eit_core::field::FieldSpec;
use eit_core::hamiltonian::{cubic_intermediates, exact_eigenvalues, Branch, EigenTriple};
use eit_core::nonlinear::{nonlinear_report, AuditConfig};
use eit_core::optics::{optical_response, preset_response};
use eit_core::oracle::RampOrdering;
use eit_core::params::{FockBlock, SystemParams};
use eit_core::presets::{builtin_presets, preset, ExperimentPreset};
use eit_core::state::{
    coherences_timeseries, large_n_coherences, nonclassical_coherence, reduced_density_matrix,
};
use eit_core::verify::{run_suite, Suite, VerifyConfig};
use eit_core::{Complex64, EitError};
use serde::Deserialize;

use crate::record::{Quantity, ResultRecord, Table};
use crate::{
    Context, EigenArgs, Failure, NonlinearArgs, Ordering, PresetOverrides, ResponseArgs,
    StateArgs, VerifyArgs,
};

const BRANCHES: [(Branch, &str); 3] = [
    (Branch::Plus, "plus"),
    (Branch::Zero, "zero"),
    (Branch::Minus, "minus"),
];
/// Largest allowed deviation of Σ|C|² from 1 for amplitude files.
const NORM_TOLERANCE: f64 = 1e-6;

impl From<EitError> for Failure {
    fn from(e: EitError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn invalid(name: &str, value: impl std::fmt::Display, reason: &str) -> Failure {
    Failure::Validation(format!("invalid {name} = {value}: {reason}"))
}

fn positive(name: &str, value: f64) -> Result<(), Failure> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, value, "must be a finite number > 0"))
    }
}

fn finite(name: &str, value: f64) -> Result<(), Failure> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, value, "must be finite"))
    }
}

pub fn eigen(a: &EigenArgs, _ctx: &Context) -> Result<ResultRecord, Failure> {
    positive("g1", a.g1)?;
    positive("g2", a.g2)?;
    finite("delta1", a.delta1)?;
    finite("delta2", a.delta2)?;
    if a.n1 == 0 {
        return Err(invalid("n1", 0, "blocks start at n1 = 1 (n1 = 0 is uncoupled)"));
    }
    let n1_max = a.n1_max.unwrap_or(a.n1);
    let n2_max = a.n2_max.unwrap_or(a.n2);
    if n1_max < a.n1 {
        return Err(invalid("n1_max", n1_max, "must be >= n1"));
    }
    if n2_max < a.n2 {
        return Err(invalid("n2_max", n2_max, "must be >= n2"));
    }

    let mut r = ResultRecord::new("eigen");
    r.input("g1", a.g1, "rad/s");
    r.input("g2", a.g2, "rad/s");
    r.input("n1", f64::from(a.n1), "photons");
    r.input("n2", f64::from(a.n2), "photons");
    r.input("delta2", a.delta2, "rad/s");

    let base = SystemParams::dimensionless(a.g1, a.g2, a.delta1, a.delta2);
    let solve = |p: &SystemParams, b: FockBlock| -> Result<(EigenTriple, EigenTriple, f64), Failure> {
        let exact = exact_eigenvalues(p, b)?;
        let pert = perturbative_eigenvalues(p, b);
        Ok((exact, pert, cubic_intermediates(p, b).discriminant()))
    };

    let is_table = a.sweep_delta1.is_some() || n1_max > a.n1 || n2_max > a.n2;
    if !is_table {
        r.input("delta1", a.delta1, "rad/s");
        let (exact, pert, disc) = solve(&base, FockBlock::new(a.n1, a.n2)?)?;
        for (b, name) in BRANCHES {
            r.output(&format!("exact.{name}"), exact.get(b), "rad/s");
            r.output(&format!("perturbative.{name}"), pert.get(b), "rad/s");
            r.output(&format!("difference.{name}"), pert.get(b) - exact.get(b), "rad/s");
        }
        r.output("reality_discriminant", disc, "rad^6/s^6");
        return Ok(r);
    }

    let deltas = match &a.sweep_delta1 {
        Some(g) => {
            r.input("delta1_start", g.start, "rad/s");
            r.input("delta1_stop", g.stop, "rad/s");
            r.input("delta1_count", g.count as f64, "points");
            g.points()
        }
        None => {
            r.input("delta1", a.delta1, "rad/s");
            vec![a.delta1]
        }
    };
    r.input("n1_max", f64::from(n1_max), "photons");
    r.input("n2_max", f64::from(n2_max), "photons");
    let mut table = Table::new(&[
        ("n1", "photons"),
        ("n2", "photons"),
        ("delta1", "rad/s"),
        ("exact_plus", "rad/s"),
        ("exact_zero", "rad/s"),
        ("exact_minus", "rad/s"),
        ("perturbative_plus", "rad/s"),
        ("perturbative_zero", "rad/s"),
        ("perturbative_minus", "rad/s"),
        ("reality_discriminant", "rad^6/s^6"),
    ]);
    for n1 in a.n1..=n1_max {
        for n2 in a.n2..=n2_max {
            let block = FockBlock::new(n1, n2)?;
            for &d in &deltas {
                let p = base.with_detunings(d, a.delta2);
                let (exact, pert, disc) = solve(&p, block)?;
                let mut row = vec![f64::from(n1), f64::from(n2), d];
                row.extend(BRANCHES.map(|(b, _)| exact.get(b)));
                row.extend(BRANCHES.map(|(b, _)| pert.get(b)));
                row.push(disc);
                table.rows.push(row);
            }
        }
    }
    r.table = Some(table);
    Ok(r)
}

fn resolve_preset(o: &PresetOverrides) -> Result<ExperimentPreset, Failure> {
    let mut p = match &o.preset {
        Some(name) => preset(name)?,
        None => {
            let need = |name: &str, v: Option<f64>| {
                v.ok_or_else(|| Failure::Validation(format!("missing {name}: pass --preset or --{name}")))
            };
            ExperimentPreset {
                name: "custom".into(),
                description: "parameters given on the command line".into(),
                intensity_probe: need("intensity-probe", o.intensity_probe)?,
                intensity_coupling: need("intensity-coupling", o.intensity_coupling)?,
                delta1: o.delta1.unwrap_or(0.0),
                delta2: o.delta2.unwrap_or(0.0),
                lambda1: need("lambda1", o.lambda1)?,
                lambda2: need("lambda2", o.lambda2)?,
                v_probe_group_observed: need("v-probe-observed", o.v_probe_observed)?,
                dipole_ratio: need("dipole-ratio", o.dipole_ratio)?,
                mu32_nominal: need("mu32", o.mu32)?,
                mode_volume_nominal: need("mode-volume", o.mode_volume)?,
                reported: None,
            }
        }
    };
    let set = |field: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *field = v;
        }
    };
    set(&mut p.intensity_probe, o.intensity_probe);
    set(&mut p.intensity_coupling, o.intensity_coupling);
    set(&mut p.delta1, o.delta1);
    set(&mut p.delta2, o.delta2);
    set(&mut p.lambda1, o.lambda1);
    set(&mut p.lambda2, o.lambda2);
    set(&mut p.v_probe_group_observed, o.v_probe_observed);
    set(&mut p.dipole_ratio, o.dipole_ratio);
    set(&mut p.mu32_nominal, o.mu32);
    set(&mut p.mode_volume_nominal, o.mode_volume);
    p.validate()?;
    Ok(p)
}

fn echo_preset(r: &mut ResultRecord, p: &ExperimentPreset, ctx: &Context) {
    r.input("intensity_probe", p.intensity_probe, "W/m^2");
    r.input("intensity_coupling", p.intensity_coupling, "W/m^2");
    r.input("delta1", p.delta1, "rad/s");
    r.input("delta2", p.delta2, "rad/s");
    r.input("lambda1", p.lambda1, "m");
    r.input("lambda2", p.lambda2, "m");
    r.input("v_probe_group_observed", p.v_probe_group_observed, "m/s");
    r.input("dipole_ratio", p.dipole_ratio, "1");
    r.input("mu32", p.mu32_nominal, "C*m");
    r.input("mode_volume", p.mode_volume_nominal, "m^3");
    r.provenance.preset = Some(p.name.clone());
    r.provenance.rabi_from_intensity = Some(ctx.interpretation.label().to_string());
}

fn reference(r: &mut ResultRecord, p: &ExperimentPreset, keys: &[(&str, &str)]) {
    let Some(rep) = p.reported else { return };
    let value = serde_json::to_value(rep).unwrap_or_default();
    for (k, unit) in keys {
        if let Some(v) = value.get(*k).and_then(|v| v.as_f64()) {
            r.provenance
                .reference_values
                .insert(k.to_string(), Quantity::new(v, unit));
        }
    }
}

pub fn response(a: &ResponseArgs, ctx: &Context) -> Result<ResultRecord, Failure> {
    let p = resolve_preset(&a.preset)?;
    let mut r = ResultRecord::new("response");
    echo_preset(&mut r, &p, ctx);
    reference(
        &mut r,
        &p,
        &[
            ("dn_probe", "1"),
            ("dn_coupling", "1"),
            ("v_coupling_group", "m/s"),
        ],
    );

    let pr = preset_response(&p, ctx.interpretation)?;
    let cal = pr.calibration;
    let s = pr.response;
    r.output("rabi_probe", cal.rabi.omega1, "rad/s");
    r.output("rabi_coupling", cal.rabi.omega2, "rad/s");
    r.output("atom_density", cal.params.atom_density, "1/m^3");
    r.output("g1", cal.params.g1, "rad/s");
    r.output("g2", cal.params.g2, "rad/s");
    r.output("nbar_probe", cal.nbar_probe, "photons");
    r.output("nbar_coupling", cal.nbar_coupling, "photons");
    r.output("chi_probe", s.chi_probe, "1");
    r.output("chi_coupling", s.chi_coupling, "1");
    r.output("chi_probe_linear", s.chi_probe_linear, "1");
    r.output("chi_coupling_linear", s.chi_coupling_linear, "1");
    r.output("dchi_domega1", s.dchi_domega1, "s/rad");
    r.output("v_probe_group", s.v_probe_group, "m/s");
    r.output("v_probe_group_base", s.v_probe_group_base, "m/s");
    if let (Some(v), Some(v0)) = (s.v_coupling_group, s.v_coupling_group_base) {
        r.output("v_coupling_group", v, "m/s");
        r.output("v_coupling_group_base", v0, "m/s");
    }
    r.output(
        "v_coupling_group_base_intensity_form",
        pr.v_coupling_group_base_intensity_form,
        "m/s",
    );
    r.output("dn_probe", s.dn_probe, "1");
    if let Some(dn) = s.dn_coupling {
        r.output("dn_coupling", dn, "1");
    }
    r.output("dn_coupling_explicit", s.dn_coupling_explicit, "1");
    if s.is_transparent() {
        r.notes.push(
            "EIT: two-photon resonance, chi_probe = chi_coupling = 0 and both index changes vanish"
                .into(),
        );
    }

    if let Some(g) = &a.sweep_delta1 {
        let mut table = Table::new(&[
            ("delta1", "rad/s"),
            ("chi_probe", "1"),
            ("chi_coupling", "1"),
            ("dchi_domega1", "s/rad"),
            ("dn_probe", "1"),
        ]);
        for d in g.points() {
            let params = cal.params.with_detunings(d, p.delta2);
            let s = optical_response(&params, &cal.rabi)?;
            table
                .rows
                .push(vec![d, s.chi_probe, s.chi_coupling, s.dchi_domega1, s.dn_probe]);
        }
        r.table = Some(table);
    }
    Ok(r)
}

pub fn nonlinear(a: &NonlinearArgs, ctx: &Context) -> Result<ResultRecord, Failure> {
    let p = resolve_preset(&a.preset)?;
    let mut r = ResultRecord::new("nonlinear");
    echo_preset(&mut r, &p, ctx);
    r.input("audit_x_max", a.audit_x_max, "1");
    r.input("audit_points", a.audit_points as f64, "points");
    reference(
        &mut r,
        &p,
        &[
            ("n2", "m^2/V^2"),
            ("n4", "m^4/V^4"),
            ("n6", "m^6/V^6"),
            ("n2_intensity", "cm^2/W"),
            ("n4_intensity", "cm^4/W^2"),
            ("n6_intensity", "cm^6/W^3"),
            ("n2_over_n4_intensity_order", "W/cm^2"),
        ],
    );

    let cfg = AuditConfig {
        x_max: a.audit_x_max,
        points: a.audit_points,
    };
    let rep = nonlinear_report(&p, ctx.interpretation, cfg)?;
    let c = rep.closed;
    r.output("v0_probe_used", rep.v0_probe_used, "m/s");
    r.output("n2", c.n2, "m^2/V^2");
    r.output("n4", c.n4, "m^4/V^4");
    r.output("n6", c.n6, "m^6/V^6");
    r.output("n2_intensity", c.n2_intensity, "cm^2/W");
    r.output("n4_intensity", c.n4_intensity, "cm^4/W^2");
    r.output("n6_intensity", c.n6_intensity, "cm^6/W^3");
    r.output("n2_over_n4", rep.ratios.n2_over_n4, "V^2/m^2");
    r.output("n4_over_n6", rep.ratios.n4_over_n6, "V^2/m^2");
    r.output("n2_over_n4_intensity", rep.ratios.n2_over_n4_intensity, "W/cm^2");
    r.output("n4_over_n6_intensity", rep.ratios.n4_over_n6_intensity, "W/cm^2");

    let v = rep.via_chi;
    r.output("via_chi.n0", v.n0, "1");
    r.output("via_chi.n2", v.n2, "m^2/V^2");
    r.output("via_chi.n4", v.n4, "m^4/V^4");
    r.output("via_chi.n6", v.n6, "m^6/V^6");

    let chi_units = ["1", "m^2/V^2", "m^4/V^4", "m^6/V^6"];
    let orders = [1, 3, 5, 7];
    let au = rep.audit;
    for (name, series) in [
        ("chi_closed_form", rep.closed_form),
        ("audit.chi_fitted", au.fitted),
        ("audit.chi_expansion", au.expansion),
    ] {
        for ((k, unit), value) in orders.iter().zip(chi_units).zip(series.as_array()) {
            r.output(&format!("{name}{k}"), value, unit);
        }
    }
    r.output("audit.chi3_ratio", au.ratio_chi3, "1");
    r.output("audit.chi5_ratio", au.ratio_chi5, "1");
    r.output("audit.chi7_ratio", au.ratio_chi7, "1");
    for (k, d) in [3, 5, 7].iter().zip(au.halving_drift) {
        r.output(&format!("audit.halving_drift_chi{k}"), d, "1");
    }
    r.output("audit.condition_number", au.condition, "1");
    r.output("audit.n0_linear", au.n0_linear, "1");
    r.output("audit.n0_sqrt", au.n0_sqrt, "1");
    r.notes.push(
        "audit ratios are closed-form / fitted; a chi5 ratio near 1 means the closed-form chi5 \
         agrees with the exact expansion of the susceptibility"
            .into(),
    );
    Ok(r)
}

#[derive(Deserialize)]
struct AmplitudeFile {
    probe: Vec<[f64; 2]>,
    coupling: Vec<[f64; 2]>,
}

fn read_amplitudes(path: &Path) -> Result<FieldSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let file: AmplitudeFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Validation(format!("amplitudes: {e}")))?;
    if file.probe.is_empty() || file.coupling.is_empty() {
        return Err(invalid("amplitudes", path.display(), "probe and coupling must be non-empty"));
    }
    let conv = |v: Vec<[f64; 2]>| -> Vec<Complex64> {
        v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
    };
    let field = FieldSpec::product(conv(file.probe), conv(file.coupling));
    field.check_normalized(NORM_TOLERANCE).map_err(|e| {
        Failure::Validation(format!("amplitudes: {e}; deviation allowed is {NORM_TOLERANCE:e}"))
    })?;
    Ok(field)
}

pub fn state(a: &StateArgs, _ctx: &Context) -> Result<ResultRecord, Failure> {
    positive("g1", a.g1)?;
    positive("g2", a.g2)?;
    positive("omega1", a.omega1)?;
    positive("omega2", a.omega2)?;
    finite("delta1", a.delta1)?;
    finite("delta2", a.delta2)?;
    finite("time", a.time)?;
    let params = SystemParams {
        omega1: a.omega1,
        omega2: a.omega2,
        ..SystemParams::dimensionless(a.g1, a.g2, a.delta1, a.delta2)
    };

    let mut r = ResultRecord::new("state");
    r.input("g1", a.g1, "rad/s");
    r.input("g2", a.g2, "rad/s");
    r.input("delta1", a.delta1, "rad/s");
    r.input("delta2", a.delta2, "rad/s");
    r.input("omega1", a.omega1, "rad/s");
    r.input("omega2", a.omega2, "rad/s");
    r.input("time", a.time, "s");

    let mut coherent = None;
    let field = if let (Some(alpha), Some(beta)) = (a.alpha, a.beta) {
        for (n, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(n, v, "must be a finite number >= 0"));
            }
        }
        r.input("alpha", alpha, "sqrt(photons)");
        r.input("beta", beta, "sqrt(photons)");
        coherent = Some((alpha, beta));
        let d = FieldSpec::coherent(alpha, beta);
        FieldSpec::coherent_truncated(
            alpha,
            beta,
            a.trunc1.unwrap_or(d.trunc1),
            a.trunc2.unwrap_or(d.trunc2),
        )
    } else if let Some(n) = &a.fock {
        if n.len() != 2 {
            return Err(invalid("fock", format!("{n:?}"), "expected two photon numbers n1,n2"));
        }
        r.input("fock_n1", f64::from(n[0]), "photons");
        r.input("fock_n2", f64::from(n[1]), "photons");
        FieldSpec::fock(n[0], n[1])
    } else if let Some(path) = &a.amplitudes {
        r.provenance
            .flags
            .insert("amplitudes_file".into(), path.display().to_string());
        read_amplitudes(path)?
    } else {
        return Err(Failure::Validation(
            "missing field: pass --alpha/--beta, --fock or --amplitudes".into(),
        ));
    };
    r.input("trunc1", f64::from(field.trunc1), "photons");
    r.input("trunc2", f64::from(field.trunc2), "photons");

    let rho = reduced_density_matrix(&params, &field, a.time);
    for i in 1..=3 {
        for j in 1..=3 {
            let e = rho.element(i, j);
            r.output(&format!("rho{i}{j}.re"), e.re, "1");
            r.output(&format!("rho{i}{j}.im"), e.im, "1");
        }
    }
    r.output("trace", rho.trace(), "1");
    r.output("tail_mass", field.tail_mass(), "1");

    let nc = nonclassical_coherence(&params, &field)?;
    r.output("rho21_omega1.re", nc.re, "1");
    r.output("rho21_omega1.im", nc.im, "1");

    if let Some((alpha, beta)) = coherent {
        let (nbar_a, nbar_b) = (alpha * alpha, beta * beta);
        let (c21, c23) = large_n_coherences(&params, nbar_a, nbar_b);
        r.output("large_n.rho21", c21, "1");
        r.output("large_n.rho23", c23, "1");
        match coherences_timeseries(&params, alpha, beta, a.time) {
            Ok((f21, f23)) => {
                r.output("full_sum.rho21.re", f21.re, "1");
                r.output("full_sum.rho21.im", f21.im, "1");
                r.output("full_sum.rho23.re", f23.re, "1");
                r.output("full_sum.rho23.im", f23.im, "1");
                r.output("abs_deviation.rho21", (f21.re - c21).abs(), "1");
                r.output("abs_deviation.rho23", (f23.re - c23).abs(), "1");
                if c21 != 0.0 {
                    r.output("deviation.rho21", ((f21.re - c21) / c21).abs(), "1");
                }
                if c23 != 0.0 {
                    r.output("deviation.rho23", ((f23.re - c23) / c23).abs(), "1");
                }
            }
            Err(EitError::CouplingVacuum) => r
                .notes
                .push("beta = 0: full-sum coherences are undefined in the coupling vacuum".into()),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(r)
}

pub fn verify(a: &VerifyArgs, ctx: &Context) -> Result<ResultRecord, Failure> {
    if a.trials == 0 {
        return Err(invalid("trials", 0, "must be >= 1"));
    }
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite.clone()
    };
    let config = VerifyConfig {
        seed: ctx.seed,
        trials: a.trials,
        ordering: match a.ordering {
            Ordering::Normal => RampOrdering::CouplingFirst,
            Ordering::Reversed => RampOrdering::ProbeFirst,
        },
    };

    let mut r = ResultRecord::new("verify");
    r.input("trials", a.trials as f64, "draws");
    r.provenance.seed = Some(ctx.seed);
    r.provenance.flags.insert(
        "suites".into(),
        suites.iter().map(|s| s.label()).collect::<Vec<_>>().join(","),
    );
    r.provenance
        .flags
        .insert("ordering".into(), format!("{:?}", a.ordering).to_lowercase());

    let mut failures = Vec::new();
    for suite in suites {
        let checks = match run_suite(suite, &config) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{}: {e}", suite.label()));
                continue;
            }
        };
        for c in checks {
            let key = format!("{}.{}", c.suite.label(), c.name);
            if c.counts_as_failure() {
                failures.push(format!("{key} observed {:e} (threshold {:e})", c.observed, c.threshold));
            }
            r.outputs.insert(
                key,
                Quantity {
                    value: c.observed,
                    unit: "1".into(),
                    threshold: Some(c.threshold),
                    passed: Some(c.passed),
                    diagnostic: c.diagnostic.then_some(true),
                },
            );
        }
    }
    if failures.is_empty() {
        Ok(r)
    } else {
        Err(Failure::Verification(Box::new(r), failures.join("; ")))
    }
}

pub fn presets(_ctx: &Context) -> Result<ResultRecord, Failure> {
    let mut r = ResultRecord::new("presets");
    for p in builtin_presets() {
        let n = &p.name;
        for (k, v, unit) in [
            ("intensity_probe", p.intensity_probe, "W/m^2"),
            ("intensity_coupling", p.intensity_coupling, "W/m^2"),
            ("delta1", p.delta1, "rad/s"),
            ("delta2", p.delta2, "rad/s"),
            ("lambda1", p.lambda1, "m"),
            ("lambda2", p.lambda2, "m"),
            ("v_probe_group_observed", p.v_probe_group_observed, "m/s"),
            ("dipole_ratio", p.dipole_ratio, "1"),
            ("mu32", p.mu32_nominal, "C*m"),
            ("mode_volume", p.mode_volume_nominal, "m^3"),
        ] {
            r.output(&format!("{n}.{k}"), v, unit);
        }
        r.notes.push(format!("{n}: {}", p.description));
    }
    Ok(r)
}
