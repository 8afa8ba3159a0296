use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use reeb_core::contact_models::{neck_profile, RadialProfile};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reeb-kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn orbit_analyze_reports_period_and_index() {
    let out = kit(&["orbit", "analyze", "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let f0 = neck_profile(0.5).unwrap().f(0.0);
    assert!((v["period"].as_f64().unwrap() - f0 * PI).abs() < 1e-12);
    assert_eq!(v["cz"], 0);
    assert_eq!(v["endpoint"], "hyperbolic_even");
    assert!(!out.stderr.is_empty());
}

#[test]
fn cz_path_of_hyperbolic_fixture_is_zero() {
    let out = kit(&["cz", "path", &fx("hyperbolic.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["cz"], 0);
}

#[test]
fn cz_path_from_samples_and_generators() {
    let dir = tempfile::tempdir().unwrap();
    // rotation by 3 pi: elliptic, index 3
    let samples: Vec<[f64; 4]> = (0..=400)
        .map(|k| {
            let a = 3.0 * PI * k as f64 / 400.0;
            [a.cos(), -a.sin(), a.sin(), a.cos()]
        })
        .collect();
    let p = dir.path().join("rot.json");
    std::fs::write(&p, serde_json::json!({ "samples": samples }).to_string()).unwrap();
    let out = kit(&["cz", "path", p.to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["cz"], 3);

    let p = dir.path().join("neck.json");
    std::fs::write(
        &p,
        r#"{"generator": {"equatorial": {"neck": {"epsilon": 0.25}}}, "steps": 4000}"#,
    )
    .unwrap();
    let out = kit(&["cz", "path", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["cz"], 0);

    let p = dir.path().join("both.json");
    std::fs::write(
        &p,
        r#"{"samples": [[1,0,0,1]], "generator": {"constant": [[0,1],[-1,0]]}}"#,
    )
    .unwrap();
    let out = kit(&["cz", "path", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "path");
}

#[test]
fn spectral_index_and_window() {
    let out = kit(&["cz", "spectral", &fx("operator.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(
        (v["alpha"].as_i64(), v["parity"].as_i64(), v["mu"].as_i64()),
        (Some(0), Some(0), Some(0))
    );

    let out = kit(&[
        "spectrum",
        "--file",
        &fx("operator.json"),
        "--window",
        "-7",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let slices = v["slices"].as_array().unwrap();
    // S = diag(-pi, 2 pi): on the mode e^{2 pi i k t} the symbol has eigenvalues
    // pi (-1 +- sqrt(9 + 16 k^2)) / 2
    let mut expected: Vec<f64> = Vec::new();
    for k in -3i32..=3 {
        let r = (9.0 + 16.0 * f64::from(k * k)).sqrt();
        expected.extend(
            [PI * (-1.0 + r) / 2.0, PI * (-1.0 - r) / 2.0]
                .into_iter()
                .filter(|v| v.abs() <= 7.0),
        );
    }
    let values: Vec<f64> = slices
        .iter()
        .map(|s| s["eigenvalue"].as_f64().unwrap())
        .collect();
    let total: u64 = slices
        .iter()
        .map(|s| s["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total as usize, expected.len());
    for e in &expected {
        assert!(
            values.iter().any(|v| (v - e).abs() < 1e-9),
            "{e} missing from {values:?}"
        );
    }
    assert!(values.iter().all(|v| v.abs() <= 7.0));

    let out = kit(&[
        "spectrum",
        "--file",
        &fx("operator.json"),
        "--window",
        "3",
        "-3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flow_trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let out = kit(&[
        "flow",
        "trace",
        "--rho",
        "-0.2",
        "--theta",
        "1.2",
        "--phi",
        "0",
        "--duration",
        "1",
        "--step",
        "0.001",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["z_monotone"], true);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["t", "chart_id", "c1", "c2", "c3", "Z"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), v["points"].as_u64().unwrap() as usize);
    let z: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(z.windows(2).all(|w| w[1] >= w[0] - 1e-10));

    let out = kit(&[
        "flow",
        "trace",
        "--rho",
        "0.1",
        "--theta",
        "1",
        "--phi",
        "0",
        "--duration",
        "1",
        "--step",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "arguments");
}

#[test]
fn ledger_check_exit_codes() {
    let out = kit(&["ledger", "check", &fx("surgered.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["pass"], true);

    let out = kit(&["ledger", "check", &fx("surgered_failing.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let fol = v["foliations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["name"] == "F'")
        .unwrap();
    assert_eq!(fol["stable"], false);
    let cited: Vec<&str> = fol["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|p| p["conditions"]["failures"].as_array().unwrap())
        .map(|f| f["clause"].as_str().unwrap())
        .collect();
    assert!(
        cited.contains(&"mixed-pair winding") && cited.contains(&"positive-pair winding"),
        "{cited:?}"
    );

    let out = kit(&["ledger", "check", &fx("does_not_exist.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "io");
}

#[test]
fn malformed_inputs_exit_two_with_error_object() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.json", "{not json", "parse"),
        (
            "unknown_orbit.json",
            r#"{"orbits": [], "curves": [{"name": "A", "c1": 0, "punctures": [{"sign": "+", "orbit": "x", "m": 1, "winding": 0}]}]}"#,
            "ledger",
        ),
        (
            "degenerate.json",
            r#"{"orbits": [{"name": "e", "period": 1, "kind": "elliptic", "theta": {"num": 1, "den": 2}}], "curves": [{"name": "A", "c1": 0, "punctures": [{"sign": "+", "orbit": "e", "m": 2, "winding": 0}]}]}"#,
            "ledger",
        ),
    ];
    for (name, body, kind) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        let out = kit(&["ledger", "check", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert_eq!(stdout_json(&out)["error"]["kind"], kind, "{name}");
    }
    let p = dir.path().join("config.json");
    std::fs::write(&p, r#"{"spectral_resolution": 32}"#).unwrap();
    let out = kit(&["report", "connect-sum", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "config");

    let out = kit(&["orbit", "analyze"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn connect_sum_report_is_deterministic() {
    let a = kit(&["report", "connect-sum", "--config", &fx("connect_sum.json")]);
    let b = kit(&["report", "connect-sum", "--config", &fx("connect_sum.json")]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["schema"], "reeb-kit-report/1");
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["ledger_path"], "surgered.json");
}

#[test]
fn coarse_step_fails_floquet_but_report_is_well_formed() {
    let out = kit(&["report", "connect-sum", "--config", &fx("coarse_step.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], false);
    let records = v["records"].as_array().unwrap();
    let floquet = records
        .iter()
        .find(|r| r["name"] == "floquet_closed_form")
        .unwrap();
    assert_eq!(floquet["status"], "fail");
    assert!(floquet["detail"]["error"].is_string());
    // everything not derived from the linearized flow is unaffected
    for r in records {
        let name = r["name"].as_str().unwrap();
        if !name.starts_with("floquet") && name != "path_cz" {
            assert_ne!(r["status"], "fail", "{name}");
        }
    }
}

#[test]
fn failing_ledger_is_reported_with_clauses() {
    let out = kit(&[
        "report",
        "connect-sum",
        "--config",
        &fx("failing_ledger.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let failed: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        failed,
        ["ledger.pairwise_intersections[F']", "ledger.stability[F']"]
    );
    let pairs = &v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == failed[0])
        .unwrap()["detail"]["failing_pairs"];
    assert!(pairs
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["a"] == "P-" || p["b"] == "P-"));
    assert!(pairs
        .as_array()
        .unwrap()
        .iter()
        .all(|p| !p["conditions"]["failures"].as_array().unwrap().is_empty()));
}
