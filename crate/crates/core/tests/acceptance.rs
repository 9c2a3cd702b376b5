//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use pseudoharmonic::cli::config::Series;
use pseudoharmonic::cli::parse_args;
use pseudoharmonic::nu::{nu_derive, solve_pseudoharmonic_nu, NuTemplate};
use pseudoharmonic::radial::{compare_levels, verify_spectrum};
use pseudoharmonic::superstat::{
    ln_partition, ln_z_finite_differences, partition_closed, partition_quadrature, thermo_point,
};
use pseudoharmonic::units::lookup_molecule;
use pseudoharmonic::{
    FieldConfig, PhysicalConstants, PotentialCoefficients, SpectrumParams, System, ThermoQuery,
};

const Q_VALUES: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 1.0];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn series(args: &[&str], fields_on: bool) -> Vec<Series> {
    let argv = std::iter::once("pseudoharmonic").chain(args.iter().copied());
    let (_, cfg) = parse_args(argv).expect("valid configuration");
    cfg.systems(fields_on)
}

/// Natural configuration plus the four molecules under the molecule field settings.
fn five_configurations() -> Vec<Series> {
    let mut all = series(&[], true);
    all.extend(series(&["--molecule", "N2,Cl2,I2,CH"], true));
    all
}

fn grid(params: &SpectrumParams) -> Vec<f64> {
    let unit = 1.0 / params.e_zero.abs();
    (0..50)
        .map(|i| (0.1f64.ln() + (100.0f64).ln() * i as f64 / 49.0).exp() * unit)
        .collect()
}

fn natural_system(a: f64, b: f64, c: f64, mu: f64, field: FieldConfig) -> System {
    System {
        consts: PhysicalConstants::natural(),
        coeffs: PotentialCoefficients::new(a, b, c).unwrap(),
        mu,
        field,
        b2_sign: Default::default(),
    }
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for s in five_configurations() {
        let p = s.system.params().unwrap();
        for beta in grid(&p) {
            for q in Q_VALUES {
                let query = ThermoQuery::new(beta, q).unwrap();
                let closed = partition_closed(&p, &query).unwrap();
                let numeric = partition_quadrature(&p, &query, 1e-9).unwrap();
                worst = worst.max(rel(numeric, closed));
                count += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8 && count == 1250,
        format!("{count} points, max rel err {worst:.2e} (tol 1e-8)"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for s in five_configurations() {
        let p = s.system.params().unwrap();
        for beta in grid(&p) {
            for q in Q_VALUES {
                let query = ThermoQuery::new(beta, q).unwrap();
                let t = thermo_point(&p, &query).unwrap();
                let (d1, d2) = ln_z_finite_differences(&p, &query).unwrap();
                let ln_z = ln_partition(&p, &query).unwrap();
                let z_quad = partition_quadrature(&p, &query, 1e-12).unwrap();

                let f_ref = -z_quad.ln() / beta;
                let u_ref = -d1;
                let s_ref = ln_z - beta * d1;
                let c_ref = beta * beta * d2;
                worst = worst
                    .max(rel(t.f_helmholtz, f_ref))
                    .max(rel(t.u_internal, u_ref))
                    // S/k and C/k can pass through zero; scale by max(|v|, 1).
                    .max((t.s_over_k - s_ref).abs() / t.s_over_k.abs().max(1.0))
                    .max((t.c_over_k - c_ref).abs() / t.c_over_k.abs().max(1.0));
            }
        }
    }
    outcome(worst <= 1e-6, format!("max rel err {worst:.2e} (tol 1e-6)"))
}

fn criterion_3() -> Outcome {
    let mut z_err = 0.0f64;
    let mut c_err = 0.0f64;
    for s in five_configurations() {
        let p = s.system.params().unwrap();
        for beta in grid(&p) {
            let t = thermo_point(&p, &ThermoQuery::new(beta, 0.0).unwrap()).unwrap();
            let z = (-beta * p.e_zero).exp() / (2.0 * p.p_scale * beta);
            z_err = z_err.max(rel(t.z_partition, z));
            c_err = c_err.max((t.c_over_k - 1.0).abs());
        }
    }
    outcome(
        z_err <= 1e-12 && c_err <= 1e-12,
        format!("Z max rel err {z_err:.2e}, |C/k - 1| max {c_err:.2e} (tol 1e-12)"),
    )
}

fn criterion_4() -> Outcome {
    let mut systems = series(&[], true);
    systems.extend(series(&["--molecule", "N2,Cl2,I2,CH"], false));
    let mut worst = 0.0f64;
    for s in &systems {
        let report = verify_spectrum(&s.system, 4, 1e-4).unwrap();
        worst = worst.max(report.max_rel_error());
    }

    // Negative control: Q = sqrt(1/16 + γ/4), real only for γ ≥ −1/4.
    let controls = [
        natural_system(1.0, 0.0, 0.0, 1.0, FieldConfig::new(0.0, 0.0, 0).unwrap()),
        natural_system(1.0, 0.0, 0.0, 1.0, FieldConfig::new(3.0, 1.0, 0).unwrap()),
    ];
    let mut control_min = f64::INFINITY;
    for sys in &controls {
        let p = sys.params().unwrap();
        assert!(p.gamma >= -0.25);
        let q_wrong = (1.0 / 16.0 + p.gamma / 4.0).sqrt();
        let wrong: Vec<f64> = (0..4)
            .map(|n| p.p_scale * (2.0 * f64::from(n) + 1.0 + 2.0 * q_wrong) + p.c_shift)
            .collect();
        let report = compare_levels(sys, &wrong, 1e-4).unwrap();
        control_min = control_min.min(report.max_rel_error());
    }
    outcome(
        worst <= 1e-4 && control_min > 1e-2,
        format!(
            "{} systems, max rel err {worst:.2e} (tol 1e-4); uncorrected Q control err {control_min:.2e} (> 1e-2)",
            systems.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = (
        0.1f64..5.0,
        0.0f64..5.0,
        0.0f64..5.0,
        0.2f64..5.0,
        0.0f64..5.0,
        0.0f64..3.0,
        -3i32..=3,
        0u32..10,
    );
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (a, b, c, mu, bf, flux, m, n) = strategy.new_tree(&mut runner).unwrap().current();
        let sys = natural_system(a, b, c, mu, FieldConfig::new(bf, flux, m).unwrap());
        let exact = sys.params().unwrap().energy_level(n);
        let nu = solve_pseudoharmonic_nu(&sys, n).unwrap();
        worst = worst.max(rel(nu, exact));
    }

    // NU coefficient identities on dyadic inputs chosen so that α₈ and α₉
    // are perfect squares.
    type Q = Ratio<i64>;
    let dy = (-64i64..=64, -64i64..=64, -64i64..=64, -64i64..=64, 0i64..=64, 0i64..=64);
    let mut exact_ok = true;
    for _ in 0..200 {
        let (k1, k2, k3, kx, k8, k9) = dy.new_tree(&mut runner).unwrap().current();
        let r = |k: i64| Q::new(k, 16);
        let (a1, a2, a3, xi2, r8, r9) = (r(k1), r(k2), r(k3), r(kx), r(k8), r(k9));
        let a4 = (Q::from_integer(1) - a1) / 2;
        let a5 = (a2 - a3 * 2) / 2;
        let a7 = a4 * a5 * 2 - xi2;
        let xi3 = r8 * r8 - a4 * a4;
        let xi1 = r9 * r9 - a3 * a7 - a3 * a3 * r8 * r8 - a5 * a5;
        let f = |v: Q| *v.numer() as f64 / *v.denom() as f64;
        let t = NuTemplate {
            alpha1: f(a1),
            alpha2: f(a2),
            alpha3: f(a3),
            xi1: f(xi1),
            xi2: f(xi2),
            xi3: f(xi3),
        };
        let d = nu_derive(&t).unwrap();
        let expected = [
            (d.alpha4, a4),
            (d.alpha5, a5),
            (d.alpha6, a5 * a5 + xi1),
            (d.alpha7, a7),
            (d.alpha8, r8 * r8),
            (d.alpha9, r9 * r9),
            (d.alpha10, a1 + a4 * 2 + r8 * 2),
            (d.alpha11, a2 - a5 * 2 + (r9 + a3 * r8) * 2),
            (d.alpha12, a4 + r8),
            (d.alpha13, a5 - (r9 + a3 * r8)),
        ];
        exact_ok &= expected.iter().all(|&(got, want)| got == f(want));
    }
    outcome(
        worst <= 1e-12 && exact_ok,
        format!(
            "200 configs, max rel err {worst:.2e} (tol 1e-12); rational identities {}",
            if exact_ok { "exact" } else { "NOT exact" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut closed = 0.0f64;
    let mut fd = 0.0f64;

    let (mu, omega) = (1.5, 0.8);
    for m in [0, 1, 2, -3] {
        let sys = natural_system(
            0.5 * mu * omega * omega,
            0.0,
            0.0,
            mu,
            FieldConfig::new(0.0, 0.0, m).unwrap(),
        );
        let p = sys.params().unwrap();
        let exact: Vec<f64> = (0..6)
            .map(|n| omega * (2.0 * f64::from(n) + f64::from(m.abs()) + 1.0))
            .collect();
        for (n, e) in (0u32..).zip(&exact) {
            closed = closed.max(rel(p.energy_level(n), *e));
        }
        fd = fd.max(compare_levels(&sys, &exact[..4], 1e-4).unwrap().max_rel_error());
    }

    for (b_field, mu) in [(2.0, 1.0), (0.5, 3.0)] {
        let sys = natural_system(0.0, 0.0, 0.0, mu, FieldConfig::new(b_field, 0.0, 0).unwrap());
        let p = sys.params().unwrap();
        let exact: Vec<f64> = (0..6)
            .map(|n| b_field / (2.0 * mu) * (2.0 * f64::from(n) + 1.0))
            .collect();
        for (n, e) in (0u32..).zip(&exact) {
            closed = closed.max(rel(p.energy_level(n), *e));
        }
        fd = fd.max(compare_levels(&sys, &exact[..4], 1e-4).unwrap().max_rel_error());
    }
    outcome(
        closed <= 1e-12 && fd <= 1e-4,
        format!("closed form max rel err {closed:.2e} (tol 1e-12), FD {fd:.2e} (tol 1e-4)"),
    )
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let nat = dir.path().join("natural");
    let mol = dir.path().join("molecule");
    let runs = [
        (vec!["--q", "0,0.3,0.7,1"], &nat),
        (vec!["--molecule", "N2,Cl2,I2,CH", "--q", "0.5"], &mol),
    ];
    for (args, out) in runs {
        let mut argv = vec!["pseudoharmonic", "figures", "--output-dir", out.to_str().unwrap()];
        argv.extend(args);
        let (_, cfg) = parse_args(argv).unwrap();
        let result = pseudoharmonic::cli::cmd_figures(&cfg).unwrap();
        assert_eq!(result.failed_rows, 0);
    }

    // (quantity, +1 increasing / −1 decreasing)
    let trends = [("Z", -1.0), ("F", 1.0), ("U", -1.0), ("S", -1.0)];
    let mut checked = 0;
    let mut violations = Vec::new();
    let files = [
        (nat.clone(), "deformation"),
        (mol.clone(), "fields_on"),
        (mol.clone(), "fields_off"),
    ];
    for (path, tag) in &files {
        for (quantity, sign) in trends {
            let file = path.join(format!("fig_{quantity}_{tag}.csv"));
            let (header, columns) = read_columns(&file);
            for (name, col) in header.iter().zip(&columns).skip(1) {
                checked += 1;
                let bad = col.windows(2).filter(|w| sign * (w[1] - w[0]) <= 0.0 || w[1].is_nan()).count();
                if bad > 0 {
                    violations.push(format!("{tag}/{name}: {bad} pairs"));
                }
            }
        }
    }
    outcome(
        violations.is_empty() && checked == 4 * (4 + 4 + 4),
        format!("{checked} series checked; violations: {violations:?}"),
    )
}

fn read_columns(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for line in lines {
        for (col, cell) in columns.iter_mut().zip(line.split(',')) {
            col.push(cell.parse::<f64>().unwrap());
        }
    }
    (header, columns)
}

fn criterion_8() -> Outcome {
    let rows = [
        ("N2", "1.0940", "7.00335", "98288.03528"),
        ("Cl2", "1.9872", "17.4844", "20276.440"),
        ("I2", "2.6664", "63.452235", "12547.300"),
        ("CH", "1.1198", "0.929931", "31838.08149"),
    ];
    let mut matched = 0;
    for (name, r_e, mu, d_e) in rows {
        let rec = lookup_molecule(name).unwrap();
        let parse = |s: &str| s.parse::<f64>().unwrap().to_bits();
        matched += usize::from(rec.name == name);
        matched += usize::from(rec.r_e.to_bits() == parse(r_e));
        matched += usize::from(rec.mu.to_bits() == parse(mu));
        matched += usize::from(rec.d_e.to_bits() == parse(d_e));
    }
    outcome(matched == 16, format!("{matched}/16 table cells bit-exact"))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut compared = 0;
    let mut differing = Vec::new();
    for (tag, extra) in [("natural", vec![]), ("molecule", vec!["--molecule", "N2,Cl2,I2,CH"])] {
        let outs: Vec<_> = (0..2).map(|i| dir.path().join(format!("{tag}{i}"))).collect();
        for out in &outs {
            let status = Command::new(env!("CARGO_BIN_EXE_pseudoharmonic"))
                .arg("figures")
                .arg("--output-dir")
                .arg(out)
                .args(&extra)
                .output()
                .unwrap()
                .status;
            assert!(status.success());
        }
        let mut names: Vec<_> = std::fs::read_dir(&outs[0])
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names {
            let a = std::fs::read(outs[0].join(&name)).unwrap();
            let b = std::fs::read(outs[1].join(&name));
            compared += 1;
            if b.ok().as_deref() != Some(a.as_slice()) {
                differing.push(name.to_string_lossy().into_owned());
            }
        }
    }
    outcome(
        differing.is_empty() && compared == 18,
        format!("{compared} files compared, differing: {differing:?}"),
    )
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "closed-form Z vs quadrature", 5, criterion_1),
        (2, "thermodynamic functions vs finite differences", 5, criterion_2),
        (3, "q = 0 reduction", 1, criterion_3),
        (4, "spectrum vs finite-difference eigensolver", 60, criterion_4),
        (5, "NU equivalence", 2, criterion_5),
        (6, "oscillator and Landau limits", 30, criterion_6),
        (7, "figure trends", 10, criterion_7),
        (8, "molecule table fidelity", 1, criterion_8),
        (9, "figure determinism", 10, criterion_9),
    ];
    // Panics are reported on the criterion line instead.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let passed = result.passed && in_time;
        failures += usize::from(!passed);
        println!(
            "criterion {id} [{}] {title}: {} ({:.2} s, budget {budget} s)",
            if passed { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
