//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! Every tolerance is pinned in code.

// negated comparisons are deliberate: a NaN sample must count as a violation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use stark_toric::{
    action, brute_force_coefficients, ck_table, classify_energy, criterion3, critical_point_search,
    critical_values, dk_positivity, fd_derivative_audit, mc_area, moment_curve, poly_identity_check,
    separate, verdict, build_system, CurveOptions, DomainKind, EnergyClass, HalfSystem,
    MomentMapCurve, PotentialKind, SeparatedSystem, SystemParams, UnivariatePoly, VerdictOptions,
};

fn report(criterion: &str, label: &str, violations: &[String]) {
    let status = if violations.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {criterion} ({label}): {status}");
    assert!(violations.is_empty(), "criterion {criterion}: {violations:#?}");
}

fn sep(kind: PotentialKind, m: f64, g: Option<f64>, n: Option<u32>, f: f64) -> SeparatedSystem {
    let pot = build_system(kind, &SystemParams { m, g, n, f }).unwrap();
    separate(&pot, f).unwrap()
}

fn curve65(sys: &SeparatedSystem) -> MomentMapCurve {
    moment_curve(sys, &CurveOptions::default()).unwrap()
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[test]
fn criterion_01_coefficient_identities() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=20u32 {
        let t = ck_table(n).unwrap();
        if t.c[0] != BigInt::from(1) {
            bad.push(format!("n={n}: C_0 = {}", t.c[0]));
        }
        if t.c[n as usize] != BigInt::from(1) {
            bad.push(format!("n={n}: C_n = {}", t.c[n as usize]));
        }
        for (k, d) in t.d_small.iter().enumerate() {
            let expected = BigInt::from(if k % 2 == 0 { 2 } else { -2 });
            if d != &expected {
                bad.push(format!("n={n}: d_{} = {d}", k + 1));
            }
        }
    }
    for n in 1..=8u32 {
        let t = ck_table(n).unwrap();
        let brute = brute_force_coefficients(n).unwrap();
        if brute.len() != t.c.len() {
            bad.push(format!("n={n}: brute-force solve not unique"));
            continue;
        }
        for (k, (c, x)) in t.c.iter().zip(&brute).enumerate() {
            if &BigRational::from_integer(c.clone()) != x {
                bad.push(format!("n={n}: C_{k} {c} vs brute {x}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        bad.push(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    report("01", "coefficient identities", &bad);
}

#[test]
fn criterion_02_dk_positivity() {
    let mut bad = Vec::new();
    for n in 1..=5u32 {
        let t = ck_table(n).unwrap();
        let p = dk_positivity(&t);
        if !p.all_positive {
            bad.push(format!("n={n}: violation at k={:?}", p.first_violation));
        }
    }
    let d1 = ck_table(1).unwrap().big_d;
    if d1 != vec![BigInt::from(3)] {
        bad.push(format!("D(n=1) = {d1:?}, expected [3]"));
    }
    let d2 = ck_table(2).unwrap().big_d;
    if d2 != vec![BigInt::from(5), BigInt::from(10)] {
        bad.push(format!("D(n=2) = {d2:?}, expected [5, 10]"));
    }
    // reported without assertion
    for n in 6..=20u32 {
        let t = ck_table(n).unwrap();
        let p = dk_positivity(&t);
        println!(
            "  D_k positivity report n={n}: {}",
            if p.all_positive { "all positive".to_string() } else { format!("violation at k={:?}", p.first_violation) }
        );
    }
    report("02", "D_k positivity for n = 1..5", &bad);
}

#[test]
fn criterion_03_telescoping_identity() {
    let mut bad = Vec::new();
    for n in 1..=8u32 {
        let check = poly_identity_check(n).unwrap();
        if !check.holds {
            bad.push(format!("n={n}: {} mismatched monomials", check.mismatches.len()));
        }
    }
    report("03", "telescoping separability identity n = 1..8", &bad);
}

#[test]
fn criterion_04_stark_separation_exact() {
    let mut bad = Vec::new();
    for &(g, f) in &[(1.0f64, 1.0f64), (0.5, 2.0), (-2.0, 1.5)] {
        let sys = sep(PotentialKind::Stark, 1.0, Some(g), None, f);
        let f_rat = BigRational::from_float(f).unwrap();
        let g_rat = BigRational::from_float(g).unwrap();
        let v1 = UnivariatePoly::new(vec![int(0), f_rat.clone(), -g_rat.clone()]);
        let v2 = UnivariatePoly::new(vec![int(0), f_rat, g_rat]);
        if sys.v1 != v1 {
            bad.push(format!("g={g} f={f}: V1 = {}", sys.v1));
        }
        if sys.v2 != v2 {
            bad.push(format!("g={g} f={f}: V2 = {}", sys.v2));
        }
    }
    report("04", "Stark separation V1 = fu - gu^2, V2 = fu + gu^2", &bad);
}

#[test]
fn criterion_05_harmonic_exactness() {
    let mut bad = Vec::new();
    for &f in &[0.5f64, 2.0] {
        let h = HalfSystem::from_coeffs(0.5, vec![0.0, f], f64::INFINITY, None);
        for &a in &[0.01f64, 0.1, 1.0, 10.0] {
            let v = action(&h, a).unwrap();
            let exact = a / (2.0 * f).sqrt();
            let rel = ((v.i - exact) / exact).abs();
            if rel > 1e-10 {
                bad.push(format!("f={f} a={a}: rel err {rel:.3e}"));
            }
            if v.i2.abs() > 1e-12 {
                bad.push(format!("f={f} a={a}: |I''| = {:.3e}", v.i2.abs()));
            }
        }
    }
    report("05", "harmonic exactness I = a/sqrt(2f), I'' = 0", &bad);
}

#[test]
fn criterion_06_derivative_audits() {
    let mut bad = Vec::new();
    let h = HalfSystem::from_potential(0.5, &UnivariatePoly::from_integers(&[0, 2, 0, -1])).unwrap();
    let grid: Vec<f64> = (1..=9).map(|k| 0.1 * k as f64 * h.a_max).collect();
    let audit = fd_derivative_audit(&h, &grid, 1e-5);
    for failure in &audit.failures {
        bad.push(failure.clone());
    }
    for (name, err) in [
        ("A'", audit.max_rel_a1),
        ("A''", audit.max_rel_a2),
        ("I'", audit.max_rel_i1),
        ("I''", audit.max_rel_i2),
    ] {
        if err > 1e-6 {
            bad.push(format!("{name}: max rel err {err:.3e} > 1e-6"));
        }
    }
    report("06", "closed-form derivatives vs central differences", &bad);
}

#[test]
fn criterion_07_area_oracle() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let cases = [
        ("harmonic", HalfSystem::from_coeffs(0.5, vec![0.0, 0.5], f64::INFINITY, None), 1.0),
        (
            "frozen-hill",
            HalfSystem::from_potential(0.5, &UnivariatePoly::from_integers(&[0, 2, 0, -1])).unwrap(),
            0.5,
        ),
    ];
    for (name, h, a) in cases {
        let act = action(&h, a).unwrap();
        let est = mc_area(&h, a, 10_000_000, 20240811).unwrap();
        let expected = std::f64::consts::TAU * act.i;
        let dev = (est.value - expected).abs();
        if dev > 3.0 * est.stderr {
            bad.push(format!(
                "{name}: |{} - {expected}| = {dev:.3e} > 3 sigma ({:.3e})",
                est.value, est.stderr
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() > 30.0 {
        bad.push(format!("runtime {elapsed:?} exceeds 30 s"));
    }
    report("07", "Monte Carlo area vs 2*pi*I at 1e7 samples", &bad);
}

#[test]
fn criterion_08_frozen_hill_concave() {
    let mut bad = Vec::new();
    let cd = critical_values(1, 1.0, 1.0).unwrap();
    if !(2.0 > -cd.e1 && (-cd.e1 - 1.889882).abs() < 1e-6) {
        bad.push(format!("expected f = 2 above -E1 = {:.6}", -cd.e1));
    }
    let sys = sep(PotentialKind::FrozenHill, 1.0, Some(1.0), None, 2.0);
    let curve = curve65(&sys);
    if curve.samples.len() != 65 {
        bad.push(format!("{} samples, expected 65", curve.samples.len()));
    }
    for s in &curve.samples {
        if !(s.curvature < 0.0) {
            bad.push(format!("curvature {} at a = {}", s.curvature, s.a));
        }
    }
    let out = verdict(&sys, &VerdictOptions::default()).unwrap();
    if out.verdict.kind != DomainKind::Concave {
        bad.push(format!("verdict {:?}", out.verdict.kind));
    }
    report("08", "frozen-hill g>0 below critical: concave", &bad);
}

#[test]
fn criterion_09_frozen_hill_convex() {
    let mut bad = Vec::new();
    let sys = sep(PotentialKind::FrozenHill, 1.0, Some(-1.0), None, 1.0);
    let curve = curve65(&sys);
    for s in &curve.samples {
        if !(s.curvature > 0.0) {
            bad.push(format!("curvature {} at a = {}", s.curvature, s.a));
        }
    }
    let out = verdict(&sys, &VerdictOptions::default()).unwrap();
    if out.verdict.kind != DomainKind::Convex {
        bad.push(format!("verdict {:?}", out.verdict.kind));
    }
    report("09", "frozen-hill g<0: convex", &bad);
}

#[test]
fn criterion_10_generalized_family_verdicts() {
    let mut bad = Vec::new();
    for n in [2u32, 3] {
        let cd = critical_values(n, 1.0, 1.0).unwrap();
        let f = 1.1 * (-cd.e1);
        let concave = sep(PotentialKind::Generalized(n), 1.0, Some(1.0), Some(n), f);
        let out = verdict(&concave, &VerdictOptions::default()).unwrap();
        if out.verdict.kind != DomainKind::Concave {
            bad.push(format!("n={n} g=1 f={f}: verdict {:?}", out.verdict.kind));
        }
        let convex = sep(PotentialKind::Generalized(n), 1.0, Some(-1.0), Some(n), 1.0);
        let out = verdict(&convex, &VerdictOptions::default()).unwrap();
        if out.verdict.kind != DomainKind::Convex {
            bad.push(format!("n={n} g=-1: verdict {:?}", out.verdict.kind));
        }
    }
    report("10", "generalized family n = 2, 3: concave/convex", &bad);
}

#[test]
fn criterion_11_kepler_flatness() {
    let mut bad = Vec::new();
    let sys = sep(PotentialKind::Kepler, 1.0, None, None, 1.0);
    let curve = curve65(&sys);
    for s in &curve.samples {
        if s.curvature.abs() > 1e-8 {
            bad.push(format!("|curvature| = {:.3e} at a = {}", s.curvature.abs(), s.a));
        }
        if (s.slope + 1.0).abs() > 1e-8 {
            bad.push(format!("slope = {} at a = {}", s.slope, s.a));
        }
    }
    report("11", "Kepler: flat curve with slope -1", &bad);
}

#[test]
fn criterion_12_stark_indeterminacy() {
    let mut bad = Vec::new();
    for &g in &[0.1f64, 1.0] {
        let sys = sep(PotentialKind::Stark, 1.0, Some(g), None, 1.0);
        let report_ = criterion3(&sys).unwrap();
        if report_.partial != DomainKind::Indeterminate {
            bad.push(format!("g={g}: criterion 3 gave {:?}", report_.partial));
        }
    }
    report("12", "Stark: criterion 3 indeterminate", &bad);
}

#[test]
fn criterion_13_critical_values() {
    let mut bad = Vec::new();
    for n in [1u32, 2, 3] {
        for &m in &[0.5f64, 1.0, 2.0] {
            for &g in &[0.5f64, 1.0, 2.0] {
                let cd = critical_values(n, m, g).unwrap();
                if !(cd.e1 < cd.e2 && cd.e2 < 0.0) {
                    bad.push(format!("n={n} m={m} g={g}: ordering E1={} E2={}", cd.e1, cd.e2));
                }
                let found = critical_point_search(n, m, g).unwrap();
                if found.len() != 4 {
                    bad.push(format!("n={n} m={m} g={g}: {} critical points", found.len()));
                    continue;
                }
                for p in &found[..2] {
                    let rel = ((p.value - cd.e1) / cd.e1).abs();
                    if rel > 1e-8 {
                        bad.push(format!("n={n} m={m} g={g}: E1 rel err {rel:.3e}"));
                    }
                }
                for p in &found[2..] {
                    let rel = ((p.value - cd.e2) / cd.e2).abs();
                    if rel > 1e-8 {
                        bad.push(format!("n={n} m={m} g={g}: E2 rel err {rel:.3e}"));
                    }
                }
            }
        }
    }
    report("13", "closed-form critical values vs numeric search", &bad);
}

#[test]
fn criterion_14_slope_negativity() {
    let mut bad = Vec::new();
    let systems = vec![
        ("kepler", sep(PotentialKind::Kepler, 1.0, None, None, 1.0)),
        ("frozen-hill g=1 f=2", sep(PotentialKind::FrozenHill, 1.0, Some(1.0), None, 2.0)),
        ("frozen-hill g=-1 f=1", sep(PotentialKind::FrozenHill, 1.0, Some(-1.0), None, 1.0)),
        ("stark g=0.1 f=1", sep(PotentialKind::Stark, 1.0, Some(0.1), None, 1.0)),
        ("generalized n=2 g=1", sep(PotentialKind::Generalized(2), 1.0, Some(1.0), Some(2), 1.9)),
        ("generalized n=3 g=-1", sep(PotentialKind::Generalized(3), 1.0, Some(-1.0), Some(3), 1.0)),
    ];
    for (name, sys) in systems {
        let curve = curve65(&sys);
        for s in &curve.samples {
            if !(s.slope < 0.0) {
                bad.push(format!("{name}: slope {} at a = {}", s.slope, s.a));
            }
        }
    }
    report("14", "dI2/dI1 < 0 at every sample of every system", &bad);
}

#[test]
fn criterion_15_cli_determinism_across_threads() {
    let mut bad = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("system.json");
    std::fs::write(
        &spec_path,
        "{\"kind\": \"frozen-hill\", \"m\": 1.0, \"g\": 1.0, \"f\": 2.0}\n",
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_stark-toric");
    let out_path = dir.path().join("curve.csv");
    let mut outputs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
    // identical inputs throughout; only the thread count varies, plus one
    // repeat of the first configuration
    for threads in ["1", "4", "8", "1"] {
        let output = Command::new(bin)
            .args([
                "analyze",
                spec_path.to_str().unwrap(),
                "--out",
                out_path.to_str().unwrap(),
                "--threads",
                threads,
            ])
            .output()
            .unwrap();
        if !output.status.success() {
            bad.push(format!("--threads {threads}: exit {:?}", output.status.code()));
            continue;
        }
        outputs.push((output.stdout, std::fs::read(&out_path).unwrap()));
    }
    for (i, o) in outputs.iter().enumerate().skip(1) {
        if o.0 != outputs[0].0 {
            bad.push(format!("stdout differs between runs (run {i})"));
        }
        if o.1 != outputs[0].1 {
            bad.push(format!("curve file differs between runs (run {i})"));
        }
    }
    report("15", "byte-identical analyze output for threads 1/4/8", &bad);
}

#[test]
fn energy_classification_gate_matches_cli_exit() {
    // supporting check for the analyze exit-code contract used above
    let pot = build_system(
        PotentialKind::FrozenHill,
        &SystemParams { m: 1.0, g: Some(1.0), n: None, f: 1.0 },
    )
    .unwrap();
    let sys = separate(&pot, 1.0).unwrap();
    assert_eq!(classify_energy(&sys, &pot), EnergyClass::AboveFirstCritical);
}
