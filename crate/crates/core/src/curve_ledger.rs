//! Exact bookkeeping for punctured curve classes.
//!
//! Orbits are simple orbits named in a [`Ledger`]; punctures point at them by
//! name together with a covering multiplicity. Everything here is integer or
//! `Ratio<i64>` arithmetic.
//!
//! Conventions: indices and windings at negative punctures are computed along
//! the Reeb direction, `chi(Sigma) = 2 - 2g` is the Euler characteristic of the
//! closed domain, and the relative intersection numbers `i^Phi` are input data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::CheckedMul;
use thiserror::Error;

pub type Q = Ratio<i64>;

/// Largest denominator accepted for an elliptic rotation number.
pub const MAX_THETA_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("orbit {orbit}: iterate {m} is degenerate")]
    DegenerateIterate { orbit: String, m: u32 },
    #[error("invalid orbit {0}: {1}")]
    InvalidOrbit(String, &'static str),
    #[error("unknown orbit {0}")]
    UnknownOrbit(String),
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("duplicate name {0}")]
    Duplicate(String),
    #[error("curve {0}: puncture multiplicity must be positive")]
    ZeroMultiplicity(String),
    #[error("no relative intersection number for ({0}, {1})")]
    MissingIntersection(String, String),
    #[error("relative intersection table is not symmetric at ({a}, {b}): {ab} vs {ba}")]
    AsymmetricIntersection {
        a: String,
        b: String,
        ab: i64,
        ba: i64,
    },
    #[error("curve {curve} has negative d lambda energy {e_dlambda}")]
    NegativeEnergy { curve: String, e_dlambda: Q },
    #[error("curve {curve} has index {index}, expected 1 or 2")]
    IndexOutOfRange { curve: String, index: i64 },
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("building is disconnected")]
    Disconnected,
    #[error("arithmetic genus {0} is not zero")]
    NonzeroGenus(i64),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Elliptic { theta: Q },
    Hyperbolic { base_cz: i64 },
}

/// A simple periodic orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSymbol {
    name: String,
    period: Q,
    kind: OrbitKind,
}

impl OrbitSymbol {
    pub fn new(name: impl Into<String>, period: Q, kind: OrbitKind) -> Result<Self, LedgerError> {
        let name = name.into();
        if period <= Q::from_integer(0) {
            return Err(LedgerError::InvalidOrbit(name, "period must be positive"));
        }
        if let OrbitKind::Elliptic { theta } = kind {
            if *theta.denom() > MAX_THETA_DENOMINATOR {
                return Err(LedgerError::InvalidOrbit(
                    name,
                    "rotation number denominator too large",
                ));
            }
            if theta.is_integer() {
                return Err(LedgerError::InvalidOrbit(name, "integral rotation number"));
            }
        }
        Ok(Self { name, period, kind })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn period(&self) -> Q {
        self.period
    }

    pub fn kind(&self) -> OrbitKind {
        self.kind
    }

    /// Even orbits are the hyperbolic ones with even base index.
    pub fn is_even(&self) -> bool {
        matches!(self.kind, OrbitKind::Hyperbolic { base_cz } if base_cz % 2 == 0)
    }

    pub fn is_odd_hyperbolic(&self) -> bool {
        matches!(self.kind, OrbitKind::Hyperbolic { base_cz } if base_cz % 2 != 0)
    }
}

/// `mu(gamma^m)`: linear for hyperbolic orbits, `2 floor(m theta) + 1` for elliptic ones.
pub fn orbit_cz_at_multiplicity(orbit: &OrbitSymbol, m: u32) -> Result<i64, LedgerError> {
    let degenerate = || LedgerError::DegenerateIterate {
        orbit: orbit.name.clone(),
        m,
    };
    if m == 0 {
        return Err(degenerate());
    }
    match orbit.kind {
        OrbitKind::Hyperbolic { base_cz } => {
            base_cz.checked_mul(m as i64).ok_or(LedgerError::Overflow)
        }
        OrbitKind::Elliptic { theta } => {
            let mt = theta
                .checked_mul(&Q::from_integer(m as i64))
                .ok_or(LedgerError::Overflow)?;
            if mt.is_integer() {
                return Err(degenerate());
            }
            Ok(2 * mt.floor().to_integer() + 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puncture {
    pub sign: Sign,
    pub orbit: String,
    pub multiplicity: u32,
    /// `wind_infty^Phi` along the Reeb direction.
    pub winding: i64,
}

impl Puncture {
    pub fn new(sign: Sign, orbit: impl Into<String>, multiplicity: u32, winding: i64) -> Self {
        Self {
            sign,
            orbit: orbit.into(),
            multiplicity,
            winding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    pub name: String,
    pub genus: u32,
    pub punctures: Vec<Puncture>,
    /// Relative first Chern number `c_1^Phi(u* xi)`.
    pub c1: i64,
}

impl CurveClass {
    pub fn new(name: impl Into<String>, genus: u32, punctures: Vec<Puncture>, c1: i64) -> Self {
        Self {
            name: name.into(),
            genus,
            punctures,
            c1,
        }
    }

    /// `chi(Sigma) = 2 - 2g` of the closed domain.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Cylinder `R x gamma^m`: genus zero, one puncture of each sign at the
    /// same iterate, equal windings and no relative Chern number.
    pub fn is_trivial_cylinder(&self) -> bool {
        match self.punctures.as_slice() {
            [a, b] => {
                self.genus == 0
                    && self.c1 == 0
                    && a.sign != b.sign
                    && a.orbit == b.orbit
                    && a.multiplicity == b.multiplicity
                    && a.winding == b.winding
            }
            _ => false,
        }
    }

    /// Trivial cylinder over `gamma^m` with winding `w` at both ends.
    pub fn trivial_cylinder(orbit: &str, m: u32, w: i64) -> Self {
        let name = alloc::format!("R x {orbit}^{m}");
        Self::new(
            name,
            0,
            vec![
                Puncture::new(Sign::Positive, orbit, m, w),
                Puncture::new(Sign::Negative, orbit, m, w),
            ],
            0,
        )
    }
}

/// Orbits, curves and the symmetric table of relative intersection numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    orbits: BTreeMap<String, OrbitSymbol>,
    curves: BTreeMap<String, CurveClass>,
    rel: BTreeMap<(String, String), i64>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_orbit(&mut self, orbit: OrbitSymbol) -> Result<(), LedgerError> {
        if self.orbits.contains_key(&orbit.name) {
            return Err(LedgerError::Duplicate(orbit.name));
        }
        self.orbits.insert(orbit.name.clone(), orbit);
        Ok(())
    }

    /// Adds a curve after checking that its orbits exist and its iterates are nondegenerate.
    pub fn add_curve(&mut self, curve: CurveClass) -> Result<(), LedgerError> {
        if self.curves.contains_key(&curve.name) {
            return Err(LedgerError::Duplicate(curve.name));
        }
        for p in &curve.punctures {
            if p.multiplicity == 0 {
                return Err(LedgerError::ZeroMultiplicity(curve.name));
            }
            orbit_cz_at_multiplicity(self.orbit(&p.orbit)?, p.multiplicity)?;
        }
        self.curves.insert(curve.name.clone(), curve);
        Ok(())
    }

    /// Records `i^Phi(a, b) = i^Phi(b, a) = value`. A conflicting earlier entry is an error.
    pub fn set_rel_intersection(
        &mut self,
        a: &str,
        b: &str,
        value: i64,
    ) -> Result<(), LedgerError> {
        for (x, y) in [(a, b), (b, a)] {
            if let Some(&old) = self.rel.get(&(x.to_string(), y.to_string())) {
                if old != value {
                    return Err(LedgerError::AsymmetricIntersection {
                        a: x.to_string(),
                        b: y.to_string(),
                        ab: old,
                        ba: value,
                    });
                }
            }
        }
        self.rel.insert((a.to_string(), b.to_string()), value);
        self.rel.insert((b.to_string(), a.to_string()), value);
        Ok(())
    }

    pub fn orbit(&self, name: &str) -> Result<&OrbitSymbol, LedgerError> {
        self.orbits
            .get(name)
            .ok_or_else(|| LedgerError::UnknownOrbit(name.to_string()))
    }

    pub fn curve(&self, name: &str) -> Result<&CurveClass, LedgerError> {
        self.curves
            .get(name)
            .ok_or_else(|| LedgerError::UnknownCurve(name.to_string()))
    }

    pub fn orbits(&self) -> impl Iterator<Item = &OrbitSymbol> {
        self.orbits.values()
    }

    pub fn curves(&self) -> impl Iterator<Item = &CurveClass> {
        self.curves.values()
    }

    pub fn rel_intersection(&self, a: &str, b: &str) -> Result<i64, LedgerError> {
        self.rel
            .get(&(a.to_string(), b.to_string()))
            .copied()
            .ok_or_else(|| LedgerError::MissingIntersection(a.to_string(), b.to_string()))
    }

    /// `mu^Phi(gamma_z^{m_z})` of a puncture.
    pub fn puncture_cz(&self, p: &Puncture) -> Result<i64, LedgerError> {
        orbit_cz_at_multiplicity(self.orbit(&p.orbit)?, p.multiplicity)
    }

    /// `mu(C) = 2 c_1 + sum_+ mu - sum_- mu`.
    pub fn total_cz(&self, curve: &CurveClass) -> Result<i64, LedgerError> {
        let mut total = 2 * curve.c1;
        for p in &curve.punctures {
            total += p.sign.factor() * self.puncture_cz(p)?;
        }
        Ok(total)
    }

    /// `ind(C) = mu(C) - chi(Sigma) + #Gamma`.
    pub fn fredholm_index(&self, curve: &CurveClass) -> Result<i64, LedgerError> {
        Ok(self.total_cz(curve)? - curve.euler_characteristic() + curve.punctures.len() as i64)
    }

    /// Number of punctures at even iterates.
    pub fn even_punctures(&self, curve: &CurveClass) -> Result<usize, LedgerError> {
        let mut n = 0;
        for p in &curve.punctures {
            if self.puncture_cz(p)? % 2 == 0 {
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn energies(&self, curve: &CurveClass) -> Result<Energies, LedgerError> {
        let mut e = Q::from_integer(0);
        let mut neg = Q::from_integer(0);
        for p in &curve.punctures {
            let action = self.orbit(&p.orbit)?.period * Q::from_integer(p.multiplicity as i64);
            match p.sign {
                Sign::Positive => e += action,
                Sign::Negative => neg += action,
            }
        }
        let e_dlambda = e - neg;
        if e_dlambda < Q::from_integer(0) {
            return Err(LedgerError::NegativeEnergy {
                curve: curve.name.clone(),
                e_dlambda,
            });
        }
        Ok(Energies { e, e_dlambda })
    }

    /// `C * D` from the relative intersection number and the same-sign puncture pairs.
    pub fn gen_intersection(&self, a: &CurveClass, b: &CurveClass) -> Result<i64, LedgerError> {
        let mut total = Q::from_integer(self.rel_intersection(&a.name, &b.name)?);
        for z in &a.punctures {
            for w in &b.punctures {
                if z.sign != w.sign || z.orbit != w.orbit {
                    continue;
                }
                let rz = self.extremal_ratio(z)?;
                let rw = self.extremal_ratio(w)?;
                let mm = Q::from_integer(z.multiplicity as i64 * w.multiplicity as i64);
                total += mm * rz.max(rw);
            }
        }
        debug_assert!(total.is_integer());
        Ok(total.to_integer())
    }

    /// `floor(+-mu / 2)`, the extremal value of `+- wind`.
    pub fn winding_bound(&self, p: &Puncture) -> Result<i64, LedgerError> {
        Ok((p.sign.factor() * self.puncture_cz(p)?).div_euclid(2))
    }

    fn extremal_ratio(&self, p: &Puncture) -> Result<Q, LedgerError> {
        Ok(Q::new(self.winding_bound(p)?, p.multiplicity as i64))
    }

    /// `+- wind <= floor(+- mu / 2)` at every puncture.
    pub fn winding_bound_check(
        &self,
        curve: &CurveClass,
    ) -> Result<Vec<WindingBound>, LedgerError> {
        curve
            .punctures
            .iter()
            .enumerate()
            .map(|(index, p)| {
                let bound = self.winding_bound(p)?;
                let lhs = p.sign.factor() * p.winding;
                Ok(WindingBound {
                    index,
                    signed_winding: lhs,
                    bound,
                    satisfied: lhs <= bound,
                    extremal: lhs == bound,
                })
            })
            .collect()
    }

    /// Vanishing criterion for `C * D`. The local clauses are evaluated for
    /// the ordered pair and for its reverse; the geometric clauses about the
    /// curves avoiding each other's limit orbits are reported as assumed.
    pub fn gin_zero_conditions(
        &self,
        a: &CurveClass,
        b: &CurveClass,
    ) -> Result<GinZeroReport, LedgerError> {
        let mut failures = Vec::new();
        self.ordered_clauses(a, b, &mut failures)?;
        self.ordered_clauses(b, a, &mut failures)?;
        let set3_failures = self.symmetric_clauses(a, b)?;
        let vanishes = failures.is_empty();
        let set3 = set3_failures.is_empty();
        Ok(GinZeroReport {
            vanishes,
            set3,
            discrepancy: vanishes != set3,
            failures,
            set3_failures,
            assumed: ASSUMED_CLAUSES,
            trivial_cylinder_involved: a.is_trivial_cylinder() || b.is_trivial_cylinder(),
        })
    }

    fn ordered_clauses(
        &self,
        c: &CurveClass,
        d: &CurveClass,
        out: &mut Vec<ClauseFailure>,
    ) -> Result<(), LedgerError> {
        for (i, z) in c.punctures.iter().enumerate() {
            for (j, w) in d.punctures.iter().enumerate() {
                if z.orbit != w.orbit {
                    continue;
                }
                let fail = |clause| ClauseFailure {
                    clause,
                    first: (c.name.clone(), i),
                    second: (d.name.clone(), j),
                };
                let (bz, bw) = (self.winding_bound(z)?, self.winding_bound(w)?);
                let (rz, rw) = (self.extremal_ratio(z)?, self.extremal_ratio(w)?);
                match (z.sign, w.sign) {
                    (Sign::Positive, Sign::Positive) => {
                        if z.winding != bz {
                            out.push(fail(Clause::PositiveWinding));
                        }
                        if rz < rw {
                            out.push(fail(Clause::PositiveRatio));
                        }
                    }
                    (Sign::Negative, Sign::Negative) => {
                        if -w.winding != bw {
                            out.push(fail(Clause::NegativeWinding));
                        }
                        if rw < rz {
                            out.push(fail(Clause::NegativeRatio));
                        }
                    }
                    (Sign::Negative, Sign::Positive) => {
                        if -z.winding != bz || w.winding != bw {
                            out.push(fail(Clause::MixedWinding));
                        }
                        if self.puncture_cz(z)? % 2 != 0 || self.puncture_cz(w)? % 2 != 0 {
                            out.push(fail(Clause::MixedParity));
                        }
                    }
                    // covered when the roles are swapped
                    (Sign::Positive, Sign::Negative) => {}
                }
            }
        }
        Ok(())
    }

    fn symmetric_clauses(
        &self,
        c: &CurveClass,
        d: &CurveClass,
    ) -> Result<Vec<ClauseFailure>, LedgerError> {
        let mut out = Vec::new();
        for (i, z) in c.punctures.iter().enumerate() {
            for (j, w) in d.punctures.iter().enumerate() {
                if z.orbit != w.orbit {
                    continue;
                }
                let fail = |clause| ClauseFailure {
                    clause,
                    first: (c.name.clone(), i),
                    second: (d.name.clone(), j),
                };
                let ez = z.sign.factor() * z.winding == self.winding_bound(z)?;
                let ew = w.sign.factor() * w.winding == self.winding_bound(w)?;
                if !(ez && ew) {
                    out.push(fail(Clause::Extremal));
                }
                let orbit = self.orbit(&z.orbit)?;
                match orbit.kind {
                    OrbitKind::Elliptic { .. } => {
                        if z.sign != w.sign || self.extremal_ratio(z)? != self.extremal_ratio(w)? {
                            out.push(fail(Clause::Elliptic));
                        }
                    }
                    OrbitKind::Hyperbolic { .. } if orbit.is_odd_hyperbolic() => {
                        let both_even = z.multiplicity % 2 == 0 && w.multiplicity % 2 == 0;
                        let same = z.sign == w.sign && z.multiplicity == w.multiplicity;
                        if !(both_even || same) {
                            out.push(fail(Clause::OddHyperbolic));
                        }
                    }
                    OrbitKind::Hyperbolic { .. } => {}
                }
            }
        }
        Ok(out)
    }

    /// `ind(C) >= 2g + #Gamma_even`.
    pub fn automatic_transversality_check(&self, curve: &CurveClass) -> Result<bool, LedgerError> {
        let rhs = 2 * curve.genus as i64 + self.even_punctures(curve)? as i64;
        Ok(self.fredholm_index(curve)? >= rhs)
    }

    /// Constraints on a curve of index 1 or 2 with vanishing self-intersection.
    pub fn foliating_constraints(
        &self,
        curve: &CurveClass,
    ) -> Result<FoliatingReport, LedgerError> {
        let index = self.fredholm_index(curve)?;
        if !(1..=2).contains(&index) {
            return Err(LedgerError::IndexOutOfRange {
                curve: curve.name.clone(),
                index,
            });
        }
        let even = self.even_punctures(curve)? as i64;
        let all_extremal = self.winding_bound_check(curve)?.iter().all(|w| w.extremal);
        let zero_count_bound = Q::new(index - curve.euler_characteristic() + even, 2);
        let genus_zero = curve.genus == 0;
        let even_count_ok = even == 2 - index;
        let zero_count_ok = zero_count_bound == Q::from_integer(0);
        Ok(FoliatingReport {
            index,
            genus_zero,
            even_punctures: even,
            even_count_ok,
            all_extremal,
            zero_count_bound,
            zero_count_ok,
            pass: genus_zero && even_count_ok && all_extremal && zero_count_ok,
        })
    }

    /// Sum of component indices after validating the level pairings.
    pub fn building_index_additivity(
        &self,
        building: &BuildingDescriptor,
    ) -> Result<BuildingReport, LedgerError> {
        let levels: Vec<Vec<CurveClass>> = building
            .levels
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|e| self.resolve(e))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        if building.pairings.len() + 1 != levels.len().max(1) {
            return Err(LedgerError::PairingMismatch(
                "need one pairing list per pair of adjacent levels".into(),
            ));
        }
        // vertices numbered level by level
        let mut offsets = Vec::with_capacity(levels.len());
        let mut n_vertices = 0;
        for level in &levels {
            offsets.push(n_vertices);
            n_vertices += level.len();
        }
        let mut edges = Vec::new();
        for (i, pairs) in building.pairings.iter().enumerate() {
            let (upper, lower) = (&levels[i], &levels[i + 1]);
            let mut seen_upper = BTreeSet::new();
            let mut seen_lower = BTreeSet::new();
            for pair in pairs {
                let top = puncture_at(upper, pair.upper)?;
                let bottom = puncture_at(lower, pair.lower)?;
                if top.sign != Sign::Negative || bottom.sign != Sign::Positive {
                    return Err(LedgerError::PairingMismatch(alloc::format!(
                        "level {i}: pairs must join a negative puncture to a positive one below"
                    )));
                }
                if top.orbit != bottom.orbit || top.multiplicity != bottom.multiplicity {
                    return Err(LedgerError::PairingMismatch(alloc::format!(
                        "level {i}: {}^{} paired with {}^{}",
                        top.orbit,
                        top.multiplicity,
                        bottom.orbit,
                        bottom.multiplicity
                    )));
                }
                if !seen_upper.insert(pair.upper) || !seen_lower.insert(pair.lower) {
                    return Err(LedgerError::PairingMismatch(alloc::format!(
                        "level {i}: puncture used twice"
                    )));
                }
                edges.push((offsets[i] + pair.upper.0, offsets[i + 1] + pair.lower.0));
            }
            let negatives = count_sign(upper, Sign::Negative);
            let positives = count_sign(lower, Sign::Positive);
            if seen_upper.len() != negatives || seen_lower.len() != positives {
                return Err(LedgerError::PairingMismatch(alloc::format!(
                    "level {i}: pairing is not a bijection"
                )));
            }
        }
        let mut component_indices = Vec::new();
        let mut index = 0;
        for level in &levels {
            for c in level {
                let k = if c.is_trivial_cylinder() {
                    0
                } else {
                    self.fredholm_index(c)?
                };
                component_indices.push(k);
                index += k;
            }
        }
        let connected = is_connected(n_vertices, &edges);
        let genus_sum: i64 = levels.iter().flatten().map(|c| c.genus as i64).sum();
        let arithmetic_genus = edges.len() as i64 - n_vertices as i64 + genus_sum + 1;
        if building.sphere_limit {
            if !connected {
                return Err(LedgerError::Disconnected);
            }
            if arithmetic_genus != 0 {
                return Err(LedgerError::NonzeroGenus(arithmetic_genus));
            }
        }
        let stable = !levels.is_empty()
            && levels
                .iter()
                .all(|l| !l.iter().all(CurveClass::is_trivial_cylinder));
        Ok(BuildingReport {
            index,
            component_indices,
            connected,
            arithmetic_genus,
            stable,
        })
    }

    fn resolve(&self, entry: &LevelEntry) -> Result<CurveClass, LedgerError> {
        match entry {
            LevelEntry::Curve(name) => self.curve(name).cloned(),
            LevelEntry::Trivial {
                orbit,
                multiplicity,
            } => {
                let o = self.orbit(orbit)?;
                orbit_cz_at_multiplicity(o, *multiplicity)?;
                Ok(CurveClass::trivial_cylinder(orbit, *multiplicity, 0))
            }
        }
    }

    /// Index clause, pairwise vanishing of `C * D` (including `C = D`) and the
    /// energy of the foliation.
    pub fn foliation_stability_check(
        &self,
        fol: &FoliationDescriptor,
    ) -> Result<StabilityReport, LedgerError> {
        for o in &fol.trivial_orbits {
            self.orbit(o)?;
        }
        let curves: Vec<&CurveClass> = fol
            .curves
            .iter()
            .map(|n| self.curve(n))
            .collect::<Result<_, _>>()?;
        let mut records = Vec::new();
        let mut energy: Option<Q> = None;
        let mut nontrivial = Vec::new();
        for c in &curves {
            let e = self.energies(c)?.e;
            energy = Some(energy.map_or(e, |x: Q| x.max(e)));
            if c.is_trivial_cylinder() {
                continue;
            }
            let record = match self.foliating_constraints(c) {
                Ok(r) => CurveRecord {
                    curve: c.name.clone(),
                    index: r.index,
                    foliating: Some(r),
                },
                Err(LedgerError::IndexOutOfRange { index, .. }) => CurveRecord {
                    curve: c.name.clone(),
                    index,
                    foliating: None,
                },
                Err(e) => return Err(e),
            };
            records.push(record);
            nontrivial.push(*c);
        }
        let mut pairs = Vec::new();
        for (i, a) in nontrivial.iter().enumerate() {
            for b in &nontrivial[i..] {
                let gin = self.gen_intersection(a, b)?;
                let conditions = self.gin_zero_conditions(a, b)?;
                pairs.push(PairRecord {
                    a: a.name.clone(),
                    b: b.name.clone(),
                    gin,
                    conditions,
                });
            }
        }
        let stable = records
            .iter()
            .all(|r| r.foliating.as_ref().is_some_and(|f| f.pass))
            && pairs.iter().all(|p| p.gin == 0 && p.conditions.vanishes);
        Ok(StabilityReport {
            stable,
            energy,
            curves: records,
            pairs,
        })
    }
}

/// Whether `(gamma, m_plus, m_minus)` can be a bidirectional limit of a nicely
/// embedded building: an even orbit with `m = 1` on both sides, or an odd
/// hyperbolic orbit with `m = 2` on both sides.
pub fn bidirectional_admissible(
    orbit: &OrbitSymbol,
    m_plus: u32,
    m_minus: u32,
) -> Result<Bidirectional, LedgerError> {
    let mu_plus = orbit_cz_at_multiplicity(orbit, m_plus)?;
    let mu_minus = orbit_cz_at_multiplicity(orbit, m_minus)?;
    let w_plus = mu_plus.div_euclid(2);
    let w_minus = -((-mu_minus).div_euclid(2));
    let admissible = (orbit.is_even() && m_plus == 1 && m_minus == 1)
        || (orbit.is_odd_hyperbolic() && m_plus == 2 && m_minus == 2);
    Ok(Bidirectional {
        admissible,
        ratios_agree: Q::new(w_plus, m_plus as i64) == Q::new(w_minus, m_minus as i64),
        gcd_plus: (m_plus as i64).gcd(&w_plus),
        gcd_minus: (m_minus as i64).gcd(&w_minus),
    })
}

fn puncture_at(
    level: &[CurveClass],
    (entry, idx): (usize, usize),
) -> Result<&Puncture, LedgerError> {
    level
        .get(entry)
        .and_then(|c| c.punctures.get(idx))
        .ok_or_else(|| {
            LedgerError::PairingMismatch(alloc::format!("no puncture {idx} on entry {entry}"))
        })
}

fn count_sign(level: &[CurveClass], sign: Sign) -> usize {
    level
        .iter()
        .flat_map(|c| &c.punctures)
        .filter(|p| p.sign == sign)
        .count()
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|x| find(&mut parent, x) == root)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Energies {
    pub e: Q,
    pub e_dlambda: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindingBound {
    pub index: usize,
    /// `+- wind` at the puncture.
    pub signed_winding: i64,
    pub bound: i64,
    pub satisfied: bool,
    pub extremal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    /// Positive pair: the first curve's winding is not extremal.
    PositiveWinding,
    /// Positive pair: the first curve's ratio `floor(mu/2)/m` is smaller.
    PositiveRatio,
    /// Negative pair: the second curve's winding is not extremal.
    NegativeWinding,
    /// Negative pair: the second curve's ratio `floor(-mu/2)/m` is smaller.
    NegativeRatio,
    /// Negative end of the first curve against a positive end of the second: windings not extremal.
    MixedWinding,
    /// Same pair: one of the iterates is odd.
    MixedParity,
    /// Cross-check: some winding is not extremal.
    Extremal,
    /// Cross-check: elliptic orbit with opposite signs or unequal ratios.
    Elliptic,
    /// Cross-check: odd hyperbolic orbit with an odd multiplicity and unequal data.
    OddHyperbolic,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::PositiveWinding => "positive-pair winding",
            Clause::PositiveRatio => "positive-pair ratio",
            Clause::NegativeWinding => "negative-pair winding",
            Clause::NegativeRatio => "negative-pair ratio",
            Clause::MixedWinding => "mixed-pair winding",
            Clause::MixedParity => "mixed-pair parity",
            Clause::Extremal => "extremal winding",
            Clause::Elliptic => "elliptic orbit",
            Clause::OddHyperbolic => "odd hyperbolic orbit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseFailure {
    pub clause: Clause,
    /// Curve name and puncture index.
    pub first: (String, usize),
    pub second: (String, usize),
}

/// Clauses that depend on the maps themselves and cannot be read off ledger data.
pub const ASSUMED_CLAUSES: &[&str] = &[
    "first curve avoids the positive limit orbits of the second",
    "second curve avoids the negative limit orbits of the first",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GinZeroReport {
    /// Verdict of the primary clause set.
    pub vanishes: bool,
    /// Verdict of the symmetric cross-check.
    pub set3: bool,
    pub discrepancy: bool,
    pub failures: Vec<ClauseFailure>,
    pub set3_failures: Vec<ClauseFailure>,
    pub assumed: &'static [&'static str],
    pub trivial_cylinder_involved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bidirectional {
    pub admissible: bool,
    /// `floor(mu+/2)/m+ == -floor(-mu-/2)/m-`, which holds iff both iterates are even.
    pub ratios_agree: bool,
    pub gcd_plus: i64,
    pub gcd_minus: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoliatingReport {
    pub index: i64,
    pub genus_zero: bool,
    pub even_punctures: i64,
    pub even_count_ok: bool,
    pub all_extremal: bool,
    /// `(ind - chi + #Gamma_even) / 2`, the bound on zeros of normal sections.
    pub zero_count_bound: Q,
    pub zero_count_ok: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelEntry {
    Curve(String),
    Trivial { orbit: String, multiplicity: u32 },
}

/// Pairs `(entry, puncture)` on level `i` with `(entry, puncture)` on level `i + 1`.
/// A trivial cylinder has its positive end at index 0 and its negative end at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PunctureLink {
    pub upper: (usize, usize),
    pub lower: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingDescriptor {
    pub name: String,
    /// Top level first.
    pub levels: Vec<Vec<LevelEntry>>,
    pub pairings: Vec<Vec<PunctureLink>>,
    /// Require a connected building of arithmetic genus zero.
    pub sphere_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingReport {
    pub index: i64,
    pub component_indices: Vec<i64>,
    pub connected: bool,
    pub arithmetic_genus: i64,
    /// No level consists entirely of trivial cylinders.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoliationDescriptor {
    pub name: String,
    pub curves: Vec<String>,
    pub trivial_orbits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub curve: String,
    pub index: i64,
    /// `None` when the index is outside `{1, 2}`.
    pub foliating: Option<FoliatingReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub gin: i64,
    pub conditions: GinZeroReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Supremum of `E(C)` over the curves, `None` for an empty foliation.
    pub energy: Option<Q>,
    pub curves: Vec<CurveRecord>,
    pub pairs: Vec<PairRecord>,
}
