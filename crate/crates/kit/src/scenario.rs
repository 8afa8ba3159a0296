//! The connected-sum verification scenario.
//!
//! Every numerically checkable statement about the neck and the surgered
//! foliation becomes one [`Record`]. Steps that rest on analysis which cannot
//! be reproduced here are listed as assumed.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_core::asym_op::{equatorial_operator, extremal_eigenspace_dims, spectral_cz};
use reeb_core::contact_models::{
    neck_profile, phi_map, pullback_residual, reeb_field_closed_form, reeb_residuals,
    z_derivative_along_reeb, ChartId, ChartOneForm, ChartPoint, NeckProfile, QuadraticProfile,
    RadialProfile, Sign,
};
use reeb_core::curve_ledger::{bidirectional_admissible, LevelEntry, ASSUMED_CLAUSES};
use reeb_core::reeb_flow::{
    convergence_ratio, equatorial_floquet_closed_form, equatorial_orbit_with_steps, first_decrease,
    first_return, integrate, monotone_functional, uniqueness_probe, FlowError, PeriodicOrbitRecord,
    REGION_FACTOR,
};
use reeb_core::sp_paths::{EndpointKind, Mat2};
use serde_json::{json, Value};

use crate::config::ScenarioConfig;
use crate::error::KitError;
use crate::ledger_file::{
    check_building, gin_zero_json, parse_ledger, q_json, stability_json, LoadedLedger,
};
use crate::report::{Record, VerificationReport};

/// Point in the polar or a pole chart with `0 < |rho| < rho_max`.
fn random_point(r: &mut ChaCha8Rng, rho_max: f64, polar: bool) -> ChartPoint {
    loop {
        let rho = r.random_range(-rho_max..rho_max);
        if rho.abs() < 1e-3 * rho_max {
            continue;
        }
        let p = if polar {
            ChartPoint::polar(
                rho,
                r.random_range(0.05..PI - 0.05),
                r.random_range(0.0..TAU),
            )
        } else {
            let (x, y) = (r.random_range(-0.6..0.6), r.random_range(-0.6..0.6));
            if r.random_bool(0.5) {
                ChartPoint::north(rho, x, y)
            } else {
                ChartPoint::south(rho, x, y)
            }
        };
        if let Ok(p) = p {
            return p;
        }
    }
}

fn points(config: &ScenarioConfig, salt: u64, rho_max: f64) -> Vec<ChartPoint> {
    let mut r = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(1000).wrapping_add(salt));
    (0..config.samples)
        .map(|i| random_point(&mut r, rho_max, i % 2 == 0))
        .collect()
}

fn sign_of(p: &ChartPoint) -> Sign {
    if p.rho() > 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn pullback(config: &ScenarioConfig, rho_max: f64) -> Record {
    let (name, claim) = (
        "pullback_identity",
        "Phi_+-^* lambda_+- = rho^2 lambda_1 on the neck",
    );
    let tol = config.tolerance("pullback");
    let mut worst: f64 = 0.0;
    for p in points(config, 1, rho_max) {
        match pullback_residual(sign_of(&p), &p) {
            Ok(v) => worst = worst.max(v),
            Err(e) => return Record::error(name, claim, json!(0.0), e),
        }
    }
    Record::new(
        name,
        claim,
        json!(0.0),
        json!(worst),
        Some(tol),
        worst <= tol,
    )
    .with_detail(json!({ "samples": config.samples, "statistic": "max coefficient residual" }))
}

/// `det D Phi` in the polar chart, `(d_rho, d_phi, d_theta)` frame, and in the pole charts.
fn det_formula(sign: Sign, p: &ChartPoint) -> Result<f64, KitError> {
    let k = sign.value();
    match p.chart() {
        ChartId::NeckPolar => {
            let [rho, theta, _] = p.coords();
            let (s, c) = theta.sin_cos();
            Ok(-k * rho.powi(4) * s * (1.0 + 2.0 * c * c))
        }
        _ => {
            let [rho, x, y] = p.coords();
            let (_, c, _) = p.neck_trig().map_err(KitError::computation)?;
            Ok(k * rho.powi(4) * (3.0 - 2.0 * x * x - 2.0 * y * y) / c)
        }
    }
}

fn jacobian(config: &ScenarioConfig, rho_max: f64) -> Record {
    let (name, claim) = (
        "jacobian_determinant",
        "det D Phi_+ = -rho^4 sin(theta) (1 + 2 cos^2 theta), det D Phi_- = rho^4 sin(theta) (1 + 2 cos^2 theta)",
    );
    let tol = config.tolerance("jacobian_det_rel");
    let mut worst: f64 = 0.0;
    let mut min_abs = f64::INFINITY;
    for p in points(config, 2, rho_max) {
        let sign = sign_of(&p);
        let det = match phi_map(sign, &p) {
            Ok((_, d)) => d,
            Err(e) => return Record::error(name, claim, json!(0.0), e),
        };
        let formula = match det_formula(sign, &p) {
            Ok(f) => f,
            Err(e) => return Record::error(name, claim, json!(0.0), e),
        };
        worst = worst.max((det - formula).abs() / formula.abs());
        min_abs = min_abs.min(det.abs());
    }
    Record::new(
        name,
        claim,
        json!(0.0),
        json!(worst),
        Some(tol),
        worst <= tol && min_abs > 0.0,
    )
    .with_detail(json!({
        "samples": config.samples,
        "statistic": "max relative deviation from the closed form",
        "min_abs_determinant": min_abs,
    }))
}

fn reeb_defining(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "reeb_residuals",
        "X_f satisfies lambda_f(X) = 1 and i_X d lambda_f = 0",
    );
    let tol = config.tolerance("reeb_residual");
    let form = ChartOneForm::Neck(*profile);
    let mut worst: f64 = 0.0;
    for p in points(config, 3, 2.0 * profile.epsilon()) {
        let r = reeb_field_closed_form(profile, &p).and_then(|x| reeb_residuals(&form, &x));
        match r {
            Ok((e1, e2)) => worst = worst.max(e1).max(e2),
            Err(e) => return Record::error(name, claim, json!(0.0), e),
        }
    }
    Record::new(
        name,
        claim,
        json!(0.0),
        json!(worst),
        Some(tol),
        worst <= tol,
    )
    .with_detail(json!({ "samples": config.samples }))
}

fn pole_flow(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "pole_flow",
        "X_f = +-1/(3 f(rho)) d_rho at the north and south poles",
    );
    let tol = config.tolerance("pole_flow");
    let eps = profile.epsilon();
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let rho = eps * (-3.0 + 0.3 * k as f64);
        let f = profile.f(rho);
        for (north, sign) in [(true, 1.0), (false, -1.0)] {
            let p = if north {
                ChartPoint::north(rho, 0.0, 0.0)
            } else {
                ChartPoint::south(rho, 0.0, 0.0)
            };
            let x = match p.and_then(|p| reeb_field_closed_form(profile, &p)) {
                Ok(x) => x.components,
                Err(e) => return Record::error(name, claim, json!(0.0), e),
            };
            let err = (x[0] - sign / (3.0 * f))
                .abs()
                .max(x[1].abs())
                .max(x[2].abs());
            worst = worst.max(err);
        }
    }
    Record::new(
        name,
        claim,
        json!(0.0),
        json!(worst),
        Some(tol),
        worst <= tol,
    )
    .with_detail(json!({ "rho_values": 21, "statistic": "max deviation from the closed form" }))
}

fn z_monotone(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "z_monotonicity",
        "Z = rho cos(theta) is nondecreasing along the Reeb flow",
    );
    let slack = config.tolerance("z_slack");
    let eps = profile.epsilon();
    let mut min_dz = f64::INFINITY;
    for p in points(config, 4, 2.0 * eps) {
        match z_derivative_along_reeb(profile, &p) {
            Ok(dz) => min_dz = min_dz.min(dz),
            Err(e) => return Record::error(name, claim, json!(">= 0"), e),
        }
    }
    let period = profile.f(0.0) * PI;
    let mut r = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(1000).wrapping_add(5));
    let mut traced = 0;
    let mut decreases = Vec::new();
    for i in 0..10 {
        let start = random_point(&mut r, eps, true);
        match integrate(profile, &start, 3.0 * period, period / 300.0) {
            Ok(t) => {
                traced += 1;
                if let Some(k) = first_decrease(&monotone_functional(&t), slack) {
                    decreases.push(json!({ "trajectory": i, "step": k }));
                }
            }
            Err(FlowError::LeftRegion { .. }) => {}
            Err(e) => return Record::error(name, claim, json!(">= 0"), e),
        }
    }
    let ok = min_dz >= -slack && decreases.is_empty();
    Record::new(name, claim, json!(">= 0"), json!(min_dz), Some(slack), ok).with_detail(json!({
        "samples": config.samples,
        "statistic": "min dZ(X_f) over the samples",
        "trajectories": traced,
        "decreases": decreases,
    }))
}

fn orbit_period(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "orbit_period",
        "the equatorial orbit through (0, pi/2, 0) has period f(0) pi",
    );
    let tol = config.tolerance("period");
    let period = profile.f(0.0) * PI;
    let start = match ChartPoint::polar(0.0, FRAC_PI_2, 0.0) {
        Ok(p) => p,
        Err(e) => return Record::error(name, claim, json!(period), e),
    };
    let rho_max = REGION_FACTOR * profile.epsilon();
    match first_return(profile, &start, config.rk4_step, 2.0 * period, rho_max) {
        Ok(ret) => {
            let err = (ret.time - period).abs();
            Record::new(name, claim, json!(period), json!(ret.time), Some(tol), err <= tol)
                .with_detail(json!({ "abs_error": err, "return_distance": ret.distance, "step": config.rk4_step }))
        }
        Err(e) => Record::error(name, claim, json!(period), e),
    }
}

fn rk4_order(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "rk4_convergence",
        "endpoint error of the flow shrinks by 2^4 under step halving",
    );
    let (lo, hi) = (
        config.tolerance("rk4_ratio_min"),
        config.tolerance("rk4_ratio_max"),
    );
    let period = profile.f(0.0) * PI;
    // off the orbit, where the error is smooth in the step; on the orbit RK4 is exact
    let start = match ChartPoint::polar(0.0, FRAC_PI_2 - 0.05, 0.0) {
        Ok(p) => p,
        Err(e) => return Record::error(name, claim, json!(16.0), e),
    };
    let h = period / 100.0;
    match convergence_ratio(
        profile,
        &start,
        period,
        h,
        REGION_FACTOR * profile.epsilon(),
    ) {
        Ok(c) => Record::new(
            name,
            claim,
            json!(16.0),
            json!(c.ratio),
            None,
            (lo..=hi).contains(&c.ratio),
        )
        .with_detail(json!({
            "accepted": [lo, hi],
            "step": h,
            "error_h": c.error_h,
            "error_half": c.error_half,
        })),
        Err(e) => Record::error(name, claim, json!(16.0), e),
    }
}

/// Number of uniform steps on the unit interval for a given step size.
fn orbit_steps(h: f64) -> usize {
    (1.0 / h).round().max(1.0) as usize
}

fn floquet_error<P: RadialProfile>(
    profile: &P,
    steps: usize,
) -> Result<(PeriodicOrbitRecord, f64, f64), FlowError> {
    let rec = equatorial_orbit_with_steps(profile, steps)?;
    let oracle = equatorial_floquet_closed_form(profile);
    let abs = (rec.floquet.matrix() - oracle).norm();
    Ok((rec, abs, oracle.norm()))
}

fn mat_json(m: &Mat2) -> Value {
    json!([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
}

fn floquet_records(
    config: &ScenarioConfig,
    profile: &NeckProfile,
) -> (Vec<Record>, Option<PeriodicOrbitRecord>) {
    let tol = config.tolerance("floquet");
    let steps = orbit_steps(config.rk4_step);
    let mut out = Vec::new();
    let claim = "numerical Floquet matrix of gamma_0 equals C diag(e^{AB}, e^{-AB}) C^{-1}";
    let orbit = match floquet_error(profile, steps) {
        Ok((rec, abs, norm)) => {
            let rel = abs / norm;
            out.push(
                Record::new(
                    "floquet_closed_form",
                    claim,
                    json!(0.0),
                    json!(rel),
                    Some(tol),
                    rel <= tol,
                )
                .with_detail(json!({
                    "statistic": "relative Frobenius error",
                    "abs_error": abs,
                    "steps": steps,
                    "floquet": mat_json(rec.floquet.matrix()),
                })),
            );
            Some(rec)
        }
        Err(e) => {
            let detail = json!({ "error": e.to_string(), "steps": steps });
            out.push(
                Record::error("floquet_closed_form", claim, json!(0.0), e).with_detail(detail),
            );
            None
        }
    };
    let quad = QuadraticProfile { f0: 1.0, f2: 4.0 };
    let name = "floquet_reference_quadratic";
    let claim = "same identity for f(0) = 1, f''(0) = 4, absolute Frobenius error";
    out.push(match floquet_error(&quad, steps) {
        Ok((_, abs, _)) => Record::new(name, claim, json!(0.0), json!(abs), Some(tol), abs <= tol)
            .with_detail(json!({ "steps": steps })),
        Err(e) => Record::error(name, claim, json!(0.0), e),
    });
    (out, orbit)
}

fn cz_records(
    config: &ScenarioConfig,
    profile: &NeckProfile,
    orbit: Option<&PeriodicOrbitRecord>,
) -> Vec<Record> {
    let mut out = Vec::new();
    let claim = "Conley-Zehnder index of gamma_0 from the linearized flow is 0";
    out.push(match orbit {
        Some(rec) => {
            let even = rec.classification.kind == EndpointKind::HyperbolicEven;
            Record::new(
                "path_cz",
                claim,
                json!(0),
                json!(rec.cz_index),
                None,
                rec.cz_index == 0 && even,
            )
            .with_detail(json!({
                "endpoint": rec.classification.kind.as_str(),
                "period": rec.period,
                "action": rec.action,
                "orbit_residual": rec.residual,
            }))
        }
        None => Record::error(
            "path_cz",
            claim,
            json!(0),
            "no linearized flow (see floquet_closed_form)",
        ),
    });
    let op = equatorial_operator(profile, config.spectral_resolution);
    let claim =
        "spectral index of the asymptotic operator of gamma_0 is (alpha, p, mu) = (0, 0, 0)";
    let expected = json!({ "alpha": 0, "parity": 0, "mu": 0 });
    out.push(
        match op.as_ref().map_err(Clone::clone).and_then(spectral_cz) {
            Ok(cz) => {
                let ok = (cz.alpha, cz.parity, cz.mu) == (0, 0, 0);
                Record::new("spectral_cz", claim, expected, json!(cz), None, ok)
                    .with_detail(json!({ "resolution": op.as_ref().map(|o| o.resolution()).ok() }))
            }
            Err(e) => Record::error("spectral_cz", claim, expected, e),
        },
    );
    let claim = "eigenspaces adjacent to 0 are one dimensional";
    out.push(
        match op
            .as_ref()
            .map_err(Clone::clone)
            .and_then(extremal_eigenspace_dims)
        {
            Ok(d) => Record::new(
                "extremal_eigenspace_dims",
                claim,
                json!([1, 1]),
                json!([d.0, d.1]),
                None,
                d == (1, 1),
            ),
            Err(e) => Record::error("extremal_eigenspace_dims", claim, json!([1, 1]), e),
        },
    );
    out
}

fn uniqueness(config: &ScenarioConfig, profile: &NeckProfile) -> Record {
    let (name, claim) = (
        "orbit_uniqueness_probe",
        "no sampled start off gamma_0 returns to itself",
    );
    let tol = config.tolerance("orbit_return");
    let eps = profile.epsilon();
    let period = profile.f(0.0) * PI;
    let mut r = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(1000).wrapping_add(6));
    let starts: Vec<ChartPoint> = std::iter::repeat_with(|| random_point(&mut r, eps, true))
        .filter(|p| p.rho().abs() + (p.coords()[1] - FRAC_PI_2).abs() > 1e-2)
        .take(20)
        .collect();
    match uniqueness_probe(
        profile,
        &starts,
        10.0 * period,
        0.5 * period,
        period / 200.0,
        tol,
        REGION_FACTOR * eps,
    ) {
        Ok(p) => Record::new(
            name,
            claim,
            json!(0),
            json!(p.returned.len()),
            Some(tol),
            p.returned.is_empty(),
        )
        .with_detail(json!({
            "tested": p.tested,
            "left_region": p.left_region,
            "min_distance": p.min_distance,
            "duration_periods": 10,
        })),
        Err(e) => Record::error(name, claim, json!(0), e),
    }
}

fn index_record(l: &LoadedLedger, curve: &str, expected: i64) -> Record {
    let name = format!("ledger.index[{curve}]");
    let claim = format!("Fredholm index of {curve} is {expected}");
    match l
        .ledger
        .curve(curve)
        .and_then(|c| l.ledger.fredholm_index(c))
    {
        Ok(i) => Record::new(
            &name,
            &claim,
            json!(expected),
            json!(i),
            None,
            i == expected,
        ),
        Err(e) => Record::error(&name, &claim, json!(expected), e),
    }
}

fn ledger_records(config: &ScenarioConfig) -> Vec<Record> {
    let loaded = config.ledger_source().and_then(|s| parse_ledger(&s));
    let l = match loaded {
        Ok(l) => l,
        Err(e) => {
            return vec![Record::error(
                "ledger.load",
                "the ledger file parses",
                Value::Null,
                e,
            )]
        }
    };
    let mut out = vec![index_record(&l, "P+", 1), index_record(&l, "P-", 1)];

    for spec in &l.buildings {
        let name = format!("ledger.building[{}]", spec.descriptor.name);
        let claim = "building index equals the index of the curve it bounds (2 = 1 + 1)";
        let (ok, detail) = check_building(&l.ledger, spec);
        let computed = detail.get("index").cloned().unwrap_or(Value::Null);
        let expected = detail
            .get("limit_of")
            .and_then(|v| v.get("index"))
            .cloned()
            .unwrap_or(json!(2));
        out.push(Record::new(&name, claim, expected, computed, None, ok).with_detail(detail));
    }

    for z in ["Z_p", "Z_q"] {
        let name = format!("ledger.index_by_additivity[{z}]");
        let claim = format!("ind({z}) = ind(building) - ind(P+-) = 1");
        let Some(spec) = l
            .buildings
            .iter()
            .find(|b| b.descriptor.levels.first() == Some(&vec![LevelEntry::Curve(z.into())]))
        else {
            out.push(Record::error(
                &name,
                &claim,
                json!(1),
                format!("no building with {z} on top"),
            ));
            continue;
        };
        let derived = l
            .ledger
            .building_index_additivity(&spec.descriptor)
            .and_then(|r| {
                let rest: i64 = r.component_indices[1..].iter().sum();
                Ok((r.index - rest, l.ledger.fredholm_index(l.ledger.curve(z)?)?))
            });
        out.push(match derived {
            Ok((by_sum, direct)) => Record::new(
                &name,
                &claim,
                json!(1),
                json!(by_sum),
                None,
                by_sum == 1 && direct == 1,
            )
            .with_detail(json!({ "building": spec.descriptor.name, "direct_index": direct })),
            Err(e) => Record::error(&name, &claim, json!(1), e),
        });

        let name = format!("ledger.even_punctures[{z}]");
        let claim = format!("{z} has precisely one puncture at an even orbit");
        out.push(
            match l.ledger.curve(z).and_then(|c| l.ledger.even_punctures(c)) {
                Ok(n) => Record::new(&name, &claim, json!(1), json!(n), None, n == 1),
                Err(e) => Record::error(&name, &claim, json!(1), e),
            },
        );
    }

    let name = "ledger.bidirectional[gamma0]";
    let claim = "gamma_0 is an admissible bidirectional orbit with multiplicity 1 on both sides";
    out.push(
        match l
            .ledger
            .orbit("gamma0")
            .and_then(|o| bidirectional_admissible(o, 1, 1))
        {
            Ok(b) => Record::new(
                name,
                claim,
                json!(true),
                json!(b.admissible),
                None,
                b.admissible,
            )
            .with_detail(json!({ "ratios_agree": b.ratios_agree })),
            Err(e) => Record::error(name, claim, json!(true), e),
        },
    );

    let find = |n: &str| l.foliations.iter().find(|f| f.name == n);
    let (Some(before), Some(after)) = (find("F"), find("F'")) else {
        out.push(Record::error(
            "ledger.foliations",
            "the ledger names foliations F and F'",
            Value::Null,
            "missing",
        ));
        return out;
    };
    match (
        l.ledger.foliation_stability_check(before),
        l.ledger.foliation_stability_check(after),
    ) {
        (Ok(rb), Ok(ra)) => {
            let nonzero: Vec<Value> = ra
                .pairs
                .iter()
                .filter(|p| p.gin != 0 || !p.conditions.vanishes)
                .map(|p| json!({ "a": p.a, "b": p.b, "gin": p.gin, "conditions": gin_zero_json(&p.conditions) }))
                .collect();
            let max_gin = ra.pairs.iter().map(|p| p.gin.abs()).max().unwrap_or(0);
            out.push(
                Record::new(
                    "ledger.pairwise_intersections[F']",
                    "all generalized intersection numbers of F' vanish, with the winding and ratio clauses satisfied",
                    json!(0),
                    json!(max_gin),
                    None,
                    nonzero.is_empty(),
                )
                .with_detail(json!({ "pairs": ra.pairs.len(), "failing_pairs": nonzero })),
            );
            out.push(
                Record::new(
                    "ledger.stability[F']",
                    "F' is a stable finite energy foliation",
                    json!(true),
                    json!(ra.stable),
                    None,
                    ra.stable,
                )
                .with_detail(stability_json(&ra)),
            );
            let (eb, ea) = (
                rb.energy.as_ref().map(q_json),
                ra.energy.as_ref().map(q_json),
            );
            let ok = rb.energy.is_some() && rb.energy == ra.energy;
            out.push(Record::new(
                "ledger.energy",
                "E(F') = E(F) exactly",
                json!(eb),
                json!(ea),
                None,
                ok,
            ));
        }
        (Err(e), _) | (_, Err(e)) => {
            out.push(Record::error(
                "ledger.stability[F']",
                "F' is a stable finite energy foliation",
                json!(true),
                e,
            ));
        }
    }
    out
}

fn assumed_records() -> Vec<Record> {
    vec![
        Record::assumed(
            "assumed.nondegenerate_perturbation",
            "the glued form can be perturbed away from the neck to be nondegenerate",
            "no constructive recipe; the perturbation is taken as given",
        ),
        Record::assumed(
            "assumed.holomorphic_planes_exist",
            "the planes P+- and the leaves of F' exist as pseudoholomorphic curves",
            "existence rests on PDE analysis; only their ledger data are checked",
        ),
        Record::assumed(
            "assumed.compactness",
            "the limits of the leaves through the surgery region are the listed buildings",
            "compactness is not reproducible numerically; additivity of the listed buildings is checked",
        ),
        Record::assumed(
            "assumed.geometric_vanishing_clauses",
            "clauses of the vanishing criterion that depend on the maps themselves",
            &ASSUMED_CLAUSES.join("; "),
        ),
    ]
}

fn config_echo(config: &ScenarioConfig) -> Value {
    json!({
        "epsilon": config.epsilon,
        "rk4_step": config.rk4_step,
        "spectral_resolution": config.spectral_resolution,
        "tolerances": config.effective_tolerances(),
        "ledger_path": config.ledger_path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<bundled>".into()),
        "samples": config.samples,
        "seed": config.seed,
    })
}

/// Runs every sub-check. Sub-check errors become failed records; only an
/// invalid config is an error.
pub fn run_connect_sum_verification(
    config: &ScenarioConfig,
) -> Result<VerificationReport, KitError> {
    config.validate()?;
    let profile = neck_profile(config.epsilon).map_err(|e| KitError::input("config", e))?;
    let rho_max = 4.0 * config.epsilon;
    let mut records = vec![
        pullback(config, rho_max),
        jacobian(config, rho_max),
        reeb_defining(config, &profile),
        pole_flow(config, &profile),
        z_monotone(config, &profile),
        orbit_period(config, &profile),
        rk4_order(config, &profile),
    ];
    let (floquet, orbit) = floquet_records(config, &profile);
    records.extend(floquet);
    records.extend(cz_records(config, &profile, orbit.as_ref()));
    records.push(uniqueness(config, &profile));
    records.extend(ledger_records(config));
    records.extend(assumed_records());
    let provenance = json!({
        "tool": "reeb-kit",
        "version": env!("CARGO_PKG_VERSION"),
        "profile": profile.params(),
    });
    Ok(VerificationReport::new(
        config_echo(config),
        provenance,
        records,
    ))
}
