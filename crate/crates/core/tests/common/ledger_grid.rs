//! Exhaustive small-instance comparison for the vanishing criterion.
//!
//! Everything on the oracle side is plain integer arithmetic written without
//! the library: iterated indices, the relative intersection model, the
//! intersection number itself and both clause sets. The library is then fed
//! the same data and must agree on every instance.

use reeb_core::curve_ledger::{CurveClass, Ledger, OrbitKind, OrbitSymbol, Puncture, Sign, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Rotation number `k / 10`.
    Elliptic(i64),
    Hyperbolic(i64),
}

#[derive(Debug, Clone, Copy)]
pub struct End {
    pub orbit: usize,
    pub positive: bool,
    pub m: i64,
    pub wind: i64,
}

pub struct GridSummary {
    pub instances: usize,
    pub disagreements: Vec<String>,
    pub vanishing: usize,
}

pub fn orbits() -> Vec<Kind> {
    let mut out: Vec<Kind> = (-5..=5).map(Kind::Hyperbolic).collect();
    out.extend((1..=9).map(Kind::Elliptic));
    out
}

/// `None` for a degenerate iterate.
pub fn cz(kind: Kind, m: i64) -> Option<i64> {
    match kind {
        Kind::Hyperbolic(b) => Some(b * m),
        Kind::Elliptic(k) => {
            if (k * m) % 10 == 0 {
                None
            } else {
                Some(2 * (k * m).div_euclid(10) + 1)
            }
        }
    }
}

fn sgn(e: &End) -> i64 {
    if e.positive {
        1
    } else {
        -1
    }
}

/// `floor(+-mu / 2)`.
fn bound(kinds: &[Kind], e: &End) -> i64 {
    (sgn(e) * cz(kinds[e.orbit], e.m).unwrap()).div_euclid(2)
}

/// Relative intersection number of two curves whose projections meet only
/// near common limit orbits: same-sign ends link according to the smaller
/// winding rate, opposite-sign ends according to the difference of rates.
pub fn model_rel(a: &[End], b: &[End]) -> i64 {
    let mut total = 0;
    for z in a {
        for w in b {
            if z.orbit != w.orbit {
                continue;
            }
            total += match (z.positive, w.positive) {
                (true, true) => -(z.wind * w.m).min(w.wind * z.m),
                (false, false) => -(-z.wind * w.m).min(-w.wind * z.m),
                (false, true) => z.wind * w.m - w.wind * z.m,
                (true, false) => w.wind * z.m - z.wind * w.m,
            };
        }
    }
    total
}

pub fn oracle_gin(kinds: &[Kind], a: &[End], b: &[End], rel: i64) -> i64 {
    let mut total = rel;
    for z in a {
        for w in b {
            if z.orbit == w.orbit && z.positive == w.positive {
                total += (bound(kinds, z) * w.m).max(bound(kinds, w) * z.m);
            }
        }
    }
    total
}

fn extremal(kinds: &[Kind], e: &End) -> bool {
    sgn(e) * e.wind == bound(kinds, e)
}

fn ordered_set2(kinds: &[Kind], a: &[End], b: &[End]) -> bool {
    a.iter().all(|z| {
        b.iter()
            .filter(|w| w.orbit == z.orbit)
            .all(|w| match (z.positive, w.positive) {
                // ratio comparisons cross-multiplied by the positive m's
                (true, true) => {
                    extremal(kinds, z) && bound(kinds, z) * w.m >= bound(kinds, w) * z.m
                }
                (false, false) => {
                    extremal(kinds, w) && bound(kinds, w) * z.m >= bound(kinds, z) * w.m
                }
                (false, true) => {
                    extremal(kinds, z)
                        && extremal(kinds, w)
                        && cz(kinds[z.orbit], z.m).unwrap() % 2 == 0
                        && cz(kinds[w.orbit], w.m).unwrap() % 2 == 0
                }
                (true, false) => true,
            })
    })
}

pub fn oracle_set2(kinds: &[Kind], a: &[End], b: &[End]) -> bool {
    ordered_set2(kinds, a, b) && ordered_set2(kinds, b, a)
}

pub fn oracle_set3(kinds: &[Kind], a: &[End], b: &[End]) -> bool {
    a.iter().all(|z| {
        b.iter().filter(|w| w.orbit == z.orbit).all(|w| {
            if !(extremal(kinds, z) && extremal(kinds, w)) {
                return false;
            }
            match kinds[z.orbit] {
                Kind::Elliptic(_) => {
                    z.positive == w.positive && bound(kinds, z) * w.m == bound(kinds, w) * z.m
                }
                Kind::Hyperbolic(base) if base % 2 != 0 => {
                    (z.m % 2 == 0 && w.m % 2 == 0) || (z.positive == w.positive && z.m == w.m)
                }
                Kind::Hyperbolic(_) => true,
            }
        })
    })
}

fn orbit_name(i: usize) -> String {
    format!("o{i}")
}

fn to_curve(name: &str, ends: &[End]) -> CurveClass {
    let punctures = ends
        .iter()
        .map(|e| {
            let sign = if e.positive {
                Sign::Positive
            } else {
                Sign::Negative
            };
            Puncture::new(sign, orbit_name(e.orbit), e.m as u32, e.wind)
        })
        .collect();
    CurveClass::new(name, 0, punctures, 0)
}

pub fn base_ledger(kinds: &[Kind]) -> Ledger {
    let mut ledger = Ledger::new();
    for (i, k) in kinds.iter().enumerate() {
        let kind = match *k {
            Kind::Elliptic(n) => OrbitKind::Elliptic {
                theta: Q::new(n, 10),
            },
            Kind::Hyperbolic(b) => OrbitKind::Hyperbolic { base_cz: b },
        };
        ledger
            .add_orbit(OrbitSymbol::new(orbit_name(i), Q::from_integer(1), kind).unwrap())
            .unwrap();
    }
    ledger
}

/// Compares oracle and library on one pair; `b = None` means `C * C`.
fn check(base: &Ledger, kinds: &[Kind], a: &[End], b: Option<&[End]>, summary: &mut GridSummary) {
    let b_ends = b.unwrap_or(a);
    let rel = model_rel(a, b_ends);
    let gin = oracle_gin(kinds, a, b_ends, rel);
    let s2 = oracle_set2(kinds, a, b_ends);
    let s3 = oracle_set3(kinds, a, b_ends);

    let mut ledger = base.clone();
    let ca = to_curve("A", a);
    ledger.add_curve(ca.clone()).unwrap();
    let cb = match b {
        Some(ends) => {
            let cb = to_curve("B", ends);
            ledger.add_curve(cb.clone()).unwrap();
            cb
        }
        None => ca.clone(),
    };
    ledger
        .set_rel_intersection(&ca.name, &cb.name, rel)
        .unwrap();
    let lib_gin = ledger.gen_intersection(&ca, &cb).unwrap();
    let lib_gin_rev = ledger.gen_intersection(&cb, &ca).unwrap();
    let report = ledger.gin_zero_conditions(&ca, &cb).unwrap();

    summary.instances += 1;
    if gin == 0 {
        summary.vanishing += 1;
    }
    let agree = gin >= 0
        && lib_gin == gin
        && lib_gin_rev == gin
        && s2 == (gin == 0)
        && s3 == s2
        && report.vanishes == s2
        && report.set3 == s3
        && !report.discrepancy;
    if !agree && summary.disagreements.len() < 10 {
        summary.disagreements.push(format!(
            "{a:?} vs {b_ends:?}: oracle gin {gin} set2 {s2} set3 {s3}; library gin {lib_gin} set2 {} set3 {}",
            report.vanishes, report.set3
        ));
    }
}

/// All ends at `orbits[i]` for `i` in `allowed`, windings in `[bound - 2, bound]`.
fn ends_for(kinds: &[Kind], allowed: &[usize]) -> Vec<End> {
    let mut out = Vec::new();
    for &orbit in allowed {
        for positive in [true, false] {
            for m in 1..=3 {
                let Some(mu) = cz(kinds[orbit], m) else {
                    continue;
                };
                let s = if positive { 1 } else { -1 };
                let top = (s * mu).div_euclid(2);
                for signed in top - 2..=top {
                    out.push(End {
                        orbit,
                        positive,
                        m,
                        wind: s * signed,
                    });
                }
            }
        }
    }
    out
}

/// Splits of at most three ends between two curves (each nonempty), plus
/// self-intersections of curves with up to three ends.
fn sweep(base: &Ledger, kinds: &[Kind], ends: &[End], summary: &mut GridSummary) {
    for x in ends {
        check(base, kinds, &[*x], None, summary);
        for y in ends {
            check(base, kinds, &[*x], Some(&[*y]), summary);
            check(base, kinds, &[*x, *y], None, summary);
            for z in ends {
                check(base, kinds, &[*x, *y], Some(&[*z]), summary);
                check(base, kinds, &[*x], Some(&[*y, *z]), summary);
                check(base, kinds, &[*x, *y, *z], None, summary);
            }
        }
    }
}

pub fn run_grid() -> GridSummary {
    let kinds = orbits();
    let base = base_ledger(&kinds);
    let mut summary = GridSummary {
        instances: 0,
        disagreements: Vec::new(),
        vanishing: 0,
    };
    for i in 0..kinds.len() {
        sweep(&base, &kinds, &ends_for(&kinds, &[i]), &mut summary);
    }
    // ends spread over an even, an odd hyperbolic and an elliptic orbit
    let mixed = [5, 6, 13];
    assert_eq!(
        [kinds[5], kinds[6], kinds[13]],
        [Kind::Hyperbolic(0), Kind::Hyperbolic(1), Kind::Elliptic(3)]
    );
    let ends: Vec<End> = ends_for(&kinds, &mixed)
        .into_iter()
        .filter(|e| e.m <= 2)
        .collect();
    sweep(&base, &kinds, &ends, &mut summary);
    summary
}
