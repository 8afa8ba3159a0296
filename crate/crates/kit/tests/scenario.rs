use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;
use reeb_core::curve_ledger::{CurveClass, Ledger, OrbitKind, OrbitSymbol, Puncture, Sign, Q};
use reeb_kit::config::{ScenarioConfig, DEFAULT_TOLERANCES};
use reeb_kit::ledger_file::{check_ledger, parse_ledger};
use reeb_kit::{run_connect_sum_verification, KitError, Status};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn small() -> ScenarioConfig {
    ScenarioConfig {
        samples: 200,
        ..ScenarioConfig::default()
    }
}

const REQUIRED: &[&str] = &[
    "pullback_identity",
    "jacobian_determinant",
    "reeb_residuals",
    "pole_flow",
    "z_monotonicity",
    "orbit_period",
    "rk4_convergence",
    "floquet_closed_form",
    "path_cz",
    "spectral_cz",
    "extremal_eigenspace_dims",
    "ledger.index[P+]",
    "ledger.index[P-]",
    "ledger.index_by_additivity[Z_p]",
    "ledger.index_by_additivity[Z_q]",
    "ledger.even_punctures[Z_p]",
    "ledger.pairwise_intersections[F']",
    "ledger.energy",
    "assumed.nondegenerate_perturbation",
    "assumed.holomorphic_planes_exist",
];

#[test]
fn default_config_passes_with_every_record_once() {
    let report = run_connect_sum_verification(&ScenarioConfig::default()).unwrap();
    assert!(report.pass, "{}", report.summary());
    for name in REQUIRED {
        assert_eq!(
            report.records.iter().filter(|r| r.name == *name).count(),
            1,
            "{name}"
        );
    }
    let mut names: Vec<&str> = report.records.iter().map(|r| r.name.as_str()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), report.records.len());
    for r in &report.records {
        assert_eq!(
            r.status == Status::Assumed,
            r.name.starts_with("assumed."),
            "{}",
            r.name
        );
    }
    assert_eq!(report.record("ledger.energy").unwrap().computed, "1");
}

#[test]
fn bundled_and_file_ledgers_agree() {
    let bundled = run_connect_sum_verification(&small()).unwrap();
    let from_file = ScenarioConfig {
        ledger_path: Some(fixture("surgered.json")),
        ..small()
    };
    let report = run_connect_sum_verification(&from_file).unwrap();
    let a: Vec<_> = bundled
        .records
        .iter()
        .filter(|r| r.name.starts_with("ledger"))
        .collect();
    let b: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.name.starts_with("ledger"))
        .collect();
    assert_eq!(a, b);
}

#[test]
fn missing_ledger_becomes_a_failed_record() {
    let config = ScenarioConfig {
        ledger_path: Some(fixture("nope.json")),
        ..small()
    };
    let report = run_connect_sum_verification(&config).unwrap();
    assert!(!report.pass);
    let failed: Vec<_> = report.failed().map(|r| r.name.as_str()).collect();
    assert_eq!(failed, ["ledger.load"]);
}

/// Each pointwise tolerance guards exactly one record.
#[test]
fn tightening_a_tolerance_fails_only_its_record() {
    let guarded = [
        ("pullback", "pullback_identity"),
        ("jacobian_det_rel", "jacobian_determinant"),
        ("reeb_residual", "reeb_residuals"),
        ("floquet", "floquet_closed_form"),
        ("period", "orbit_period"),
    ];
    for (tol, record) in guarded {
        let config = ScenarioConfig {
            tolerances: BTreeMap::from([(tol.to_string(), 1e-300)]),
            ..small()
        };
        let report = run_connect_sum_verification(&config).unwrap();
        let mut failed: Vec<_> = report.failed().map(|r| r.name.as_str()).collect();
        failed.retain(|n| *n != "floquet_reference_quadratic");
        assert_eq!(failed, [record], "tolerance {tol}");
        assert!(!report.pass);
    }
    let config = ScenarioConfig {
        tolerances: BTreeMap::from([("rk4_ratio_min".to_string(), 17.9)]),
        ..small()
    };
    let report = run_connect_sum_verification(&config).unwrap();
    assert_eq!(
        report.record("rk4_convergence").unwrap().status,
        Status::Fail
    );
}

#[test]
fn config_validation() {
    let bad = [
        ScenarioConfig {
            epsilon: 0.0,
            ..small()
        },
        ScenarioConfig {
            rk4_step: -1.0,
            ..small()
        },
        ScenarioConfig {
            spectral_resolution: 63,
            ..small()
        },
        ScenarioConfig {
            spectral_resolution: 32,
            ..small()
        },
        ScenarioConfig {
            samples: 0,
            ..small()
        },
        ScenarioConfig {
            tolerances: BTreeMap::from([("nope".to_string(), 1.0)]),
            ..small()
        },
        ScenarioConfig {
            tolerances: BTreeMap::from([("floquet".to_string(), 0.0)]),
            ..small()
        },
        ScenarioConfig {
            tolerances: BTreeMap::from([("rk4_ratio_min".to_string(), 20.0)]),
            ..small()
        },
    ];
    for c in bad {
        assert!(
            matches!(
                run_connect_sum_verification(&c),
                Err(KitError::Input { kind: "config", .. })
            ),
            "{c:?}"
        );
    }
    assert_eq!(
        ScenarioConfig::default().effective_tolerances().len(),
        DEFAULT_TOLERANCES.len()
    );

    let c = ScenarioConfig::load(&fixture("connect_sum.json")).unwrap();
    assert_eq!(c.resolved_ledger_path().unwrap(), fixture("surgered.json"));
    assert_eq!(
        (c.epsilon, c.rk4_step, c.spectral_resolution),
        (0.5, 1e-4, 512)
    );
}

#[test]
fn ledger_file_matches_direct_construction() {
    let text = r#"{
        "orbits": [
            {"name": "e", "period": {"num": 3, "den": 2}, "kind": "elliptic", "theta": {"num": 3, "den": 10}},
            {"name": "h", "period": 2, "kind": "hyperbolic", "base_cz": 1}
        ],
        "curves": [
            {"name": "A", "c1": 0, "punctures": [{"sign": "+", "orbit": "e", "m": 2, "winding": 0}, {"sign": "-", "orbit": "h", "m": 2, "winding": 1}]},
            {"name": "B", "genus": 1, "c1": 1, "punctures": [{"sign": "+", "orbit": "h", "m": 1, "winding": 0}]}
        ],
        "rel_intersections": {"A": {"A": 0, "B": 2}, "B": {"B": -1}}
    }"#;
    let loaded = parse_ledger(text).unwrap();
    let mut l = Ledger::new();
    l.add_orbit(
        OrbitSymbol::new(
            "e",
            Q::new(3, 2),
            OrbitKind::Elliptic {
                theta: Q::new(3, 10),
            },
        )
        .unwrap(),
    )
    .unwrap();
    l.add_orbit(
        OrbitSymbol::new(
            "h",
            Q::from_integer(2),
            OrbitKind::Hyperbolic { base_cz: 1 },
        )
        .unwrap(),
    )
    .unwrap();
    let a = CurveClass::new(
        "A",
        0,
        vec![
            Puncture::new(Sign::Positive, "e", 2, 0),
            Puncture::new(Sign::Negative, "h", 2, 1),
        ],
        0,
    );
    let b = CurveClass::new("B", 1, vec![Puncture::new(Sign::Positive, "h", 1, 0)], 1);
    l.add_curve(a.clone()).unwrap();
    l.add_curve(b.clone()).unwrap();
    l.set_rel_intersection("A", "A", 0).unwrap();
    l.set_rel_intersection("A", "B", 2).unwrap();
    l.set_rel_intersection("B", "B", -1).unwrap();
    let p = &loaded.ledger;
    for (x, y) in [(&a, &a), (&a, &b), (&b, &b)] {
        assert_eq!(p.gen_intersection(x, y), l.gen_intersection(x, y));
        assert_eq!(p.gin_zero_conditions(x, y), l.gin_zero_conditions(x, y));
    }
    for c in [&a, &b] {
        assert_eq!(p.fredholm_index(c), l.fredholm_index(c));
        assert_eq!(p.energies(c), l.energies(c));
    }
    let (pass, value) = check_ledger(&loaded);
    // A has more action at its negative end than at its positive one
    assert!(!pass);
    assert!(value["curves"][0]["error"]
        .as_str()
        .unwrap()
        .contains("energy"));
    assert_eq!(value["curves"][1]["energy"]["e_dlambda"], "2");
}

#[test]
fn ledger_file_errors() {
    let cases = [
        (
            r#"{"orbits": [{"name": "e", "period": {"num": 1, "den": 0}, "kind": "elliptic", "theta": 1}], "curves": []}"#,
            "ledger",
        ),
        (
            r#"{"orbits": [{"name": "e", "period": 1, "kind": "elliptic", "theta": 1}], "curves": []}"#,
            "ledger",
        ),
        (
            r#"{"orbits": [{"name": "h", "period": 1, "kind": "parabolic"}], "curves": []}"#,
            "parse",
        ),
        (
            r#"{"orbits": [], "curves": [], "rel_intersections": {"A": {"B": 0}}}"#,
            "ledger",
        ),
        (
            r#"{"orbits": [], "curves": [{"name": "A", "c1": 0, "punctures": [], "extra": 1}]}"#,
            "parse",
        ),
    ];
    for (text, kind) in cases {
        match parse_ledger(text) {
            Err(KitError::Input { kind: k, .. }) => assert_eq!(k, kind, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Identical configs give byte-identical reports, and the overall flag is
    /// the conjunction of the records whatever the seed.
    #[test]
    fn reports_are_deterministic(seed in 0u64..1000, samples in 10usize..100) {
        let config = ScenarioConfig { seed, samples, ..ScenarioConfig::default() };
        let a = run_connect_sum_verification(&config).unwrap();
        let b = run_connect_sum_verification(&config).unwrap();
        prop_assert_eq!(a.to_json_string(), b.to_json_string());
        prop_assert_eq!(a.pass, a.records.iter().all(|r| r.status != Status::Fail));
        prop_assert!(a.pass);
    }
}
