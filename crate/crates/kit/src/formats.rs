//! Input files for `cz path`, `cz spectral` and `spectrum`.

use reeb_core::asym_op::TrivializedAsymptoticOperator;
use reeb_core::contact_models::{neck_profile, QuadraticProfile};
use reeb_core::reeb_flow::equatorial_orbit_with_steps;
use reeb_core::sp_paths::{evolve_linear_system, Mat2, SymplecticPath};
use serde::Deserialize;

use crate::error::KitError;

pub const DEFAULT_PATH_STEPS: usize = 10_000;
pub const DEFAULT_OPERATOR_RESOLUTION: usize = 512;

/// Radial profile of the neck: the model quadratic or the glued neck itself.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Quadratic { f0: f64, f2: f64 },
    Neck { epsilon: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// `Psi' = M Psi` for a constant `M = [[a, b], [c, d]]`.
    Constant([[f64; 2]; 2]),
    /// Linearized flow along the equatorial orbit of a profile.
    Equatorial(ProfileSpec),
}

/// Either explicit samples `[a, b, c, d]` (row major, uniform in `t`) or a
/// generator integrated with RK4.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    #[serde(default)]
    pub samples: Option<Vec<[f64; 4]>>,
    #[serde(default)]
    pub generator: Option<GeneratorSpec>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub note: Option<String>,
}

fn mat(rows: &[[f64; 2]; 2]) -> Mat2 {
    Mat2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
}

fn path_err(e: impl ToString) -> KitError {
    KitError::input("path", e)
}

impl PathFile {
    pub fn build(&self) -> Result<SymplecticPath, KitError> {
        match (&self.samples, &self.generator) {
            (Some(samples), None) => {
                if self.steps.is_some() {
                    return Err(path_err("steps only applies to a generator"));
                }
                let m = samples
                    .iter()
                    .map(|s| Mat2::new(s[0], s[1], s[2], s[3]))
                    .collect();
                SymplecticPath::new(m).map_err(path_err)
            }
            (None, Some(generator)) => {
                let steps = self.steps.unwrap_or(DEFAULT_PATH_STEPS);
                match generator {
                    GeneratorSpec::Constant(rows) => {
                        let m = mat(rows);
                        evolve_linear_system(|_| m, steps).map_err(path_err)
                    }
                    GeneratorSpec::Equatorial(profile) => {
                        let record = match profile {
                            ProfileSpec::Quadratic { f0, f2 } => equatorial_orbit_with_steps(
                                &QuadraticProfile { f0: *f0, f2: *f2 },
                                steps,
                            ),
                            ProfileSpec::Neck { epsilon } => {
                                let p = neck_profile(*epsilon).map_err(path_err)?;
                                equatorial_orbit_with_steps(&p, steps)
                            }
                        };
                        Ok(record.map_err(path_err)?.path)
                    }
                }
            }
            _ => Err(path_err("exactly one of samples and generator is required")),
        }
    }
}

/// Symmetric loop `S0 + S1 cos(2 pi t) + S2 sin(2 pi t)`, each given as `[a, b, c]`
/// for `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigSpec {
    pub s0: [f64; 3],
    #[serde(default)]
    pub s1: [f64; 3],
    #[serde(default)]
    pub s2: [f64; 3],
}

impl TrigSpec {
    pub fn at(&self, t: f64) -> Mat2 {
        let sym = |v: [f64; 3]| Mat2::new(v[0], v[1], v[1], v[2]);
        let (s, c) = (std::f64::consts::TAU * t).sin_cos();
        sym(self.s0) + sym(self.s1) * c + sym(self.s2) * s
    }
}

/// Exactly one of the sources; samples are taken at `t_j = j / N` and fix the resolution.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    #[serde(default)]
    pub constant: Option<[[f64; 2]; 2]>,
    #[serde(default)]
    pub samples: Option<Vec<[[f64; 2]; 2]>>,
    #[serde(default)]
    pub trig: Option<TrigSpec>,
    #[serde(default)]
    pub equatorial: Option<ProfileSpec>,
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub note: Option<String>,
}

fn op_err(e: impl ToString) -> KitError {
    KitError::input("operator", e)
}

impl OperatorFile {
    pub fn build(&self) -> Result<TrivializedAsymptoticOperator, KitError> {
        let sources = [
            self.constant.is_some(),
            self.samples.is_some(),
            self.trig.is_some(),
            self.equatorial.is_some(),
        ];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(op_err(
                "exactly one of constant, samples, trig and equatorial is required",
            ));
        }
        let n = self.resolution.unwrap_or(DEFAULT_OPERATOR_RESOLUTION);
        if let Some(rows) = &self.constant {
            return TrivializedAsymptoticOperator::constant(mat(rows), n).map_err(op_err);
        }
        if let Some(samples) = &self.samples {
            if self.resolution.is_some_and(|r| r != samples.len()) {
                return Err(op_err("resolution must match the number of samples"));
            }
            return TrivializedAsymptoticOperator::from_samples(samples.iter().map(mat).collect())
                .map_err(op_err);
        }
        if let Some(trig) = &self.trig {
            return TrivializedAsymptoticOperator::from_fn(|t| trig.at(t), n).map_err(op_err);
        }
        match self.equatorial.expect("one source is set") {
            ProfileSpec::Quadratic { f0, f2 } => {
                reeb_core::asym_op::equatorial_operator(&QuadraticProfile { f0, f2 }, n)
                    .map_err(op_err)
            }
            ProfileSpec::Neck { epsilon } => {
                let p = neck_profile(epsilon).map_err(op_err)?;
                reeb_core::asym_op::equatorial_operator(&p, n).map_err(op_err)
            }
        }
    }
}
