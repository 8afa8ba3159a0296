//! JSON form of a curve ledger and the generic `ledger check` report.

use std::collections::BTreeMap;

use reeb_core::curve_ledger::{
    orbit_cz_at_multiplicity, BuildingDescriptor, BuildingReport, ClauseFailure, CurveClass,
    FoliationDescriptor, GinZeroReport, Ledger, LedgerError, LevelEntry, OrbitKind, OrbitSymbol,
    Puncture, PunctureLink, Sign, StabilityReport, Q,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::KitError;

/// An integer or `{"num": n, "den": d}`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Frac { num: i64, den: i64 },
}

impl Rational {
    fn to_q(self) -> Result<Q, KitError> {
        match self {
            Rational::Int(n) => Ok(Q::from_integer(n)),
            Rational::Frac { den: 0, .. } => Err(KitError::input("ledger", "zero denominator")),
            Rational::Frac { num, den } => Ok(Q::new(num, den)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KindEntry {
    Elliptic { theta: Rational },
    Hyperbolic { base_cz: i64 },
}

#[derive(Debug, Deserialize)]
struct OrbitEntry {
    name: String,
    period: Rational,
    #[serde(flatten)]
    kind: KindEntry,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum SignEntry {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PunctureEntry {
    sign: SignEntry,
    orbit: String,
    m: u32,
    winding: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveEntry {
    name: String,
    #[serde(default)]
    genus: u32,
    c1: i64,
    punctures: Vec<PunctureEntry>,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LevelItem {
    Curve { curve: String },
    Trivial { trivial: String, m: u32 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkEntry {
    upper: (usize, usize),
    lower: (usize, usize),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildingEntry {
    name: String,
    #[serde(default)]
    sphere_limit: bool,
    #[serde(default)]
    limit_of: Option<String>,
    levels: Vec<Vec<LevelItem>>,
    #[serde(default)]
    pairings: Vec<Vec<LinkEntry>>,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FoliationEntry {
    name: String,
    curves: Vec<String>,
    #[serde(default)]
    trivial_orbits: Vec<String>,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerFile {
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
    orbits: Vec<OrbitEntry>,
    curves: Vec<CurveEntry>,
    #[serde(default)]
    rel_intersections: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default)]
    buildings: Vec<BuildingEntry>,
    #[serde(default)]
    foliations: Vec<FoliationEntry>,
}

/// A building together with the curve it is claimed to be a limit of.
#[derive(Debug, Clone)]
pub struct BuildingSpec {
    pub descriptor: BuildingDescriptor,
    pub limit_of: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedLedger {
    pub ledger: Ledger,
    pub buildings: Vec<BuildingSpec>,
    pub foliations: Vec<FoliationDescriptor>,
}

fn ledger_input(e: LedgerError) -> KitError {
    KitError::input("ledger", e)
}

/// Parses and validates a ledger file. Unknown names, degenerate iterates and
/// conflicting intersection entries are input errors.
pub fn parse_ledger(text: &str) -> Result<LoadedLedger, KitError> {
    let file: LedgerFile = serde_json::from_str(text).map_err(|e| KitError::input("parse", e))?;
    let mut ledger = Ledger::new();
    for o in file.orbits {
        let kind = match o.kind {
            KindEntry::Elliptic { theta } => OrbitKind::Elliptic {
                theta: theta.to_q()?,
            },
            KindEntry::Hyperbolic { base_cz } => OrbitKind::Hyperbolic { base_cz },
        };
        let symbol = OrbitSymbol::new(o.name, o.period.to_q()?, kind).map_err(ledger_input)?;
        ledger.add_orbit(symbol).map_err(ledger_input)?;
    }
    for c in file.curves {
        let punctures = c
            .punctures
            .into_iter()
            .map(|p| {
                let sign = match p.sign {
                    SignEntry::Plus => Sign::Positive,
                    SignEntry::Minus => Sign::Negative,
                };
                Puncture::new(sign, p.orbit, p.m, p.winding)
            })
            .collect();
        ledger
            .add_curve(CurveClass::new(c.name, c.genus, punctures, c.c1))
            .map_err(ledger_input)?;
    }
    for (a, row) in &file.rel_intersections {
        for (b, value) in row {
            ledger.curve(a).map_err(ledger_input)?;
            ledger.curve(b).map_err(ledger_input)?;
            ledger
                .set_rel_intersection(a, b, *value)
                .map_err(ledger_input)?;
        }
    }
    let buildings = file
        .buildings
        .into_iter()
        .map(|b| BuildingSpec {
            descriptor: BuildingDescriptor {
                name: b.name,
                levels: b
                    .levels
                    .into_iter()
                    .map(|level| {
                        level
                            .into_iter()
                            .map(|item| match item {
                                LevelItem::Curve { curve } => LevelEntry::Curve(curve),
                                LevelItem::Trivial { trivial, m } => LevelEntry::Trivial {
                                    orbit: trivial,
                                    multiplicity: m,
                                },
                            })
                            .collect()
                    })
                    .collect(),
                pairings: b
                    .pairings
                    .into_iter()
                    .map(|links| {
                        links
                            .into_iter()
                            .map(|l| PunctureLink {
                                upper: l.upper,
                                lower: l.lower,
                            })
                            .collect()
                    })
                    .collect(),
                sphere_limit: b.sphere_limit,
            },
            limit_of: b.limit_of,
        })
        .collect();
    let foliations = file
        .foliations
        .into_iter()
        .map(|f| FoliationDescriptor {
            name: f.name,
            curves: f.curves,
            trivial_orbits: f.trivial_orbits,
        })
        .collect();
    Ok(LoadedLedger {
        ledger,
        buildings,
        foliations,
    })
}

pub fn q_json(q: &Q) -> Value {
    Value::String(q.to_string())
}

fn failure_json(f: &ClauseFailure) -> Value {
    json!({
        "clause": f.clause.as_str(),
        "first": { "curve": f.first.0, "puncture": f.first.1 },
        "second": { "curve": f.second.0, "puncture": f.second.1 },
    })
}

pub fn gin_zero_json(r: &GinZeroReport) -> Value {
    json!({
        "vanishes": r.vanishes,
        "cross_check": r.set3,
        "discrepancy": r.discrepancy,
        "failures": r.failures.iter().map(failure_json).collect::<Vec<_>>(),
        "cross_check_failures": r.set3_failures.iter().map(failure_json).collect::<Vec<_>>(),
        "assumed": r.assumed,
        "trivial_cylinder_involved": r.trivial_cylinder_involved,
    })
}

pub fn stability_json(r: &StabilityReport) -> Value {
    json!({
        "stable": r.stable,
        "energy": r.energy.as_ref().map(q_json),
        "curves": r.curves.iter().map(|c| json!({
            "curve": c.curve,
            "index": c.index,
            "foliating": c.foliating.as_ref().map(|f| json!({
                "pass": f.pass,
                "genus_zero": f.genus_zero,
                "even_punctures": f.even_punctures,
                "even_count_ok": f.even_count_ok,
                "all_extremal": f.all_extremal,
                "zero_count_bound": q_json(&f.zero_count_bound),
                "zero_count_ok": f.zero_count_ok,
            })),
        })).collect::<Vec<_>>(),
        "pairs": r.pairs.iter().map(|p| json!({
            "a": p.a,
            "b": p.b,
            "gin": p.gin,
            "conditions": gin_zero_json(&p.conditions),
        })).collect::<Vec<_>>(),
    })
}

fn building_json(r: &BuildingReport) -> Value {
    json!({
        "index": r.index,
        "component_indices": r.component_indices,
        "connected": r.connected,
        "arithmetic_genus": r.arithmetic_genus,
        "stable": r.stable,
    })
}

fn orbit_json(o: &OrbitSymbol) -> Value {
    let kind = match o.kind() {
        OrbitKind::Elliptic { theta } => json!({ "kind": "elliptic", "theta": q_json(&theta) }),
        OrbitKind::Hyperbolic { base_cz } => json!({ "kind": "hyperbolic", "base_cz": base_cz }),
    };
    json!({
        "name": o.name(),
        "period": q_json(&o.period()),
        "type": kind,
        "cz": orbit_cz_at_multiplicity(o, 1).ok(),
        "even": o.is_even(),
    })
}

fn curve_json(l: &Ledger, c: &CurveClass) -> Result<Value, LedgerError> {
    let energies = l.energies(c)?;
    Ok(json!({
        "name": c.name,
        "genus": c.genus,
        "c1": c.c1,
        "total_cz": l.total_cz(c)?,
        "index": l.fredholm_index(c)?,
        "even_punctures": l.even_punctures(c)?,
        "energy": { "e": q_json(&energies.e), "e_dlambda": q_json(&energies.e_dlambda) },
        "windings": l.winding_bound_check(c)?.iter().map(|w| json!({
            "puncture": w.index,
            "signed_winding": w.signed_winding,
            "bound": w.bound,
            "satisfied": w.satisfied,
            "extremal": w.extremal,
        })).collect::<Vec<_>>(),
        "automatic_transversality": l.automatic_transversality_check(c)?,
    }))
}

/// Additivity check of one building; `Err` carries the reason it fails.
pub fn check_building(l: &Ledger, spec: &BuildingSpec) -> (bool, Value) {
    let report = match l.building_index_additivity(&spec.descriptor) {
        Ok(r) => r,
        Err(e) => {
            return (
                false,
                json!({ "name": spec.descriptor.name, "pass": false, "error": e.to_string() }),
            )
        }
    };
    let mut value = building_json(&report);
    let mut pass = report.stable;
    if let Some(target) = &spec.limit_of {
        match l.curve(target).and_then(|c| l.fredholm_index(c)) {
            Ok(idx) => {
                pass &= idx == report.index;
                value["limit_of"] = json!({ "curve": target, "index": idx });
            }
            Err(e) => {
                pass = false;
                value["limit_of"] = json!({ "curve": target, "error": e.to_string() });
            }
        }
    }
    value["name"] = json!(spec.descriptor.name);
    value["pass"] = json!(pass);
    (pass, value)
}

/// Report of `ledger check`: orbit and curve data, buildings and foliations.
/// Passes when every curve is well formed, every building is additive and
/// stable and every foliation is stable.
pub fn check_ledger(loaded: &LoadedLedger) -> (bool, Value) {
    let l = &loaded.ledger;
    let mut pass = true;
    let orbits: Vec<Value> = l.orbits().map(orbit_json).collect();
    let curves: Vec<Value> = l
        .curves()
        .map(|c| {
            curve_json(l, c).unwrap_or_else(|e| {
                pass = false;
                json!({ "name": c.name, "error": e.to_string() })
            })
        })
        .collect();
    let buildings: Vec<Value> = loaded
        .buildings
        .iter()
        .map(|b| {
            let (ok, v) = check_building(l, b);
            pass &= ok;
            v
        })
        .collect();
    let foliations: Vec<Value> = loaded
        .foliations
        .iter()
        .map(|f| match l.foliation_stability_check(f) {
            Ok(r) => {
                pass &= r.stable;
                let mut v = stability_json(&r);
                v["name"] = json!(f.name);
                v
            }
            Err(e) => {
                pass = false;
                json!({ "name": f.name, "stable": false, "error": e.to_string() })
            }
        })
        .collect();
    let value = json!({
        "pass": pass,
        "orbits": orbits,
        "curves": curves,
        "buildings": buildings,
        "foliations": foliations,
    });
    (pass, value)
}
