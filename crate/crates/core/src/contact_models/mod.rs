//! Contact forms on coordinate charts of the connected-sum neck.
//!
//! Charts:
//! - `r3_plus`, `r3_minus`: the two Darboux balls, coordinates `(x, y, z)`.
//! - `neck_polar`: `(rho, theta, phi)` on `R x S^2` with `theta in (0, pi)`.
//! - `neck_pole_north`, `neck_pole_south`: `(rho, X, Y)` with
//!   `X = sin(theta) cos(phi)`, `Y = sin(theta) sin(phi)` and `cos(theta)`
//!   positive in the north chart and negative in the south chart.
//!
//! Neck forms are `lambda_f = f(rho) lambda_1` with
//! `lambda_1 = 3 cos(theta) d rho - rho sin(theta) d theta + 1/2 sin^2(theta) d phi`.

mod forms;
mod frame;
mod phi;
mod profile;
mod reeb;

use core::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forms::{
    lambda_one, lambda_one_jet, radial_form_jet, reeb_field_numeric, reeb_residuals, ChartOneForm,
    FormJet,
};
pub use frame::{frame_derivatives, symplectic_frame, FrameDerivatives};
pub use phi::{phi_components, phi_jacobian, phi_map, pullback_residual, Sign};
pub use profile::{neck_profile, NeckProfile, NeckProfileParams, QuadraticProfile, RadialProfile};
pub use reeb::{reeb_field_closed_form, reeb_field_jacobian_polar, z_derivative_along_reeb};

/// `sin(theta)` threshold below which polar-chart evaluations are rejected.
pub const POLE_GUARD: f64 = 1e-6;
/// Tolerance on the scalar `lambda ^ d lambda` for the contact condition.
pub const CONTACT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error("coordinates {coords:?} are outside the domain of chart {chart}")]
    OutOfDomain {
        chart: &'static str,
        coords: [f64; 3],
    },
    #[error("operation expects a {expected} chart, got {got}")]
    WrongChart {
        expected: &'static str,
        got: &'static str,
    },
    #[error("|sin theta| = {0} is too close to a pole for the polar chart")]
    NearPole(f64),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("plateau constant {0} is not admissible for this epsilon")]
    BadPlateau(f64),
    #[error("rho must be nonzero")]
    ZeroRho,
    #[error("sign of rho does not match the requested map")]
    SignMismatch,
    #[error("contact condition fails: lambda ^ d lambda = {0}")]
    NotContact(f64),
    #[error("non-finite value encountered")]
    NonFinite,
}

/// Coordinate charts used by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartId {
    R3Plus,
    R3Minus,
    NeckPolar,
    NeckPoleNorth,
    NeckPoleSouth,
}

impl ChartId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChartId::R3Plus => "r3_plus",
            ChartId::R3Minus => "r3_minus",
            ChartId::NeckPolar => "neck_polar",
            ChartId::NeckPoleNorth => "neck_pole_north",
            ChartId::NeckPoleSouth => "neck_pole_south",
        }
    }

    pub fn is_neck(&self) -> bool {
        matches!(
            self,
            ChartId::NeckPolar | ChartId::NeckPoleNorth | ChartId::NeckPoleSouth
        )
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, ChartId::NeckPoleNorth | ChartId::NeckPoleSouth)
    }

    /// `+1` for the north pole chart, `-1` for the south one.
    fn pole_sign(&self) -> f64 {
        if *self == ChartId::NeckPoleSouth {
            -1.0
        } else {
            1.0
        }
    }
}

/// A point in one of the charts, validated against the chart domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartPoint {
    chart: ChartId,
    coords: [f64; 3],
}

impl ChartPoint {
    pub fn new(chart: ChartId, coords: [f64; 3]) -> Result<Self, ContactError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ContactError::NonFinite);
        }
        let out = || ContactError::OutOfDomain {
            chart: chart.as_str(),
            coords,
        };
        let mut coords = coords;
        match chart {
            ChartId::R3Plus | ChartId::R3Minus => {}
            ChartId::NeckPolar => {
                if !(coords[1] > 0.0 && coords[1] < PI) {
                    return Err(out());
                }
                coords[2] = num_traits::Euclid::rem_euclid(&coords[2], &TAU);
            }
            ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
                if coords[1] * coords[1] + coords[2] * coords[2] >= 1.0 {
                    return Err(out());
                }
            }
        }
        Ok(Self { chart, coords })
    }

    pub fn polar(rho: f64, theta: f64, phi: f64) -> Result<Self, ContactError> {
        Self::new(ChartId::NeckPolar, [rho, theta, phi])
    }

    pub fn north(rho: f64, x: f64, y: f64) -> Result<Self, ContactError> {
        Self::new(ChartId::NeckPoleNorth, [rho, x, y])
    }

    pub fn south(rho: f64, x: f64, y: f64) -> Result<Self, ContactError> {
        Self::new(ChartId::NeckPoleSouth, [rho, x, y])
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    pub fn rho(&self) -> f64 {
        self.coords[0]
    }

    /// `(rho, cos theta, sin theta)` for a neck point in any neck chart.
    pub fn neck_trig(&self) -> Result<(f64, f64, f64), ContactError> {
        let [rho, a, b] = self.coords;
        match self.chart {
            ChartId::NeckPolar => Ok((rho, a.cos(), a.sin())),
            ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
                let s2 = a * a + b * b;
                Ok((rho, self.chart.pole_sign() * (1.0 - s2).sqrt(), s2.sqrt()))
            }
            _ => Err(ContactError::WrongChart {
                expected: "neck",
                got: self.chart.as_str(),
            }),
        }
    }

    /// `Z = rho cos(theta)`.
    pub fn z_value(&self) -> Result<f64, ContactError> {
        let (rho, c, _) = self.neck_trig()?;
        Ok(rho * c)
    }

    /// Polar coordinates of a neck point; fails at the poles themselves.
    pub fn to_polar(&self) -> Result<ChartPoint, ContactError> {
        match self.chart {
            ChartId::NeckPolar => Ok(*self),
            ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
                let [rho, x, y] = self.coords;
                let s = (x * x + y * y).sqrt();
                if s <= POLE_GUARD {
                    return Err(ContactError::NearPole(s));
                }
                let c = self.chart.pole_sign() * (1.0 - s * s).sqrt();
                ChartPoint::polar(rho, s.atan2(c), y.atan2(x))
            }
            _ => Err(ContactError::WrongChart {
                expected: "neck",
                got: self.chart.as_str(),
            }),
        }
    }

    /// Pole-chart coordinates of a neck point off the equator.
    pub fn to_pole(&self) -> Result<ChartPoint, ContactError> {
        match self.chart {
            ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => Ok(*self),
            ChartId::NeckPolar => {
                let [rho, theta, phi] = self.coords;
                let (s, c) = theta.sin_cos();
                let chart = if c >= 0.0 {
                    ChartId::NeckPoleNorth
                } else {
                    ChartId::NeckPoleSouth
                };
                ChartPoint::new(chart, [rho, s * phi.cos(), s * phi.sin()])
            }
            _ => Err(ContactError::WrongChart {
                expected: "neck",
                got: self.chart.as_str(),
            }),
        }
    }

    /// Polar point with the pole guard applied.
    pub(crate) fn guarded_polar(&self) -> Result<[f64; 3], ContactError> {
        if self.chart != ChartId::NeckPolar {
            return Err(ContactError::WrongChart {
                expected: "neck_polar",
                got: self.chart.as_str(),
            });
        }
        let s = self.coords[1].sin();
        if s.abs() <= POLE_GUARD {
            return Err(ContactError::NearPole(s));
        }
        Ok(self.coords)
    }
}

/// A tangent vector in the coordinate frame of its base point's chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentVector {
    pub base: ChartPoint,
    pub components: [f64; 3],
}

impl TangentVector {
    pub fn chart(&self) -> ChartId {
        self.base.chart
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// `g(theta) = 2 cos^2(theta) + 1`.
pub fn g_theta(theta: f64) -> f64 {
    let c = theta.cos();
    2.0 * c * c + 1.0
}

/// Jacobian of `(rho, theta, phi) -> (rho, X, Y)` at a polar point.
pub fn polar_to_pole_jacobian(p: &ChartPoint) -> Result<Matrix3<f64>, ContactError> {
    let [_, theta, phi] = p.guarded_polar()?;
    let (s, c) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok(Matrix3::new(
        1.0,
        0.0,
        0.0, //
        0.0,
        c * cp,
        -s * sp, //
        0.0,
        c * sp,
        s * cp,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_roundtrip() {
        let p = ChartPoint::polar(0.3, 0.4, 5.0).unwrap();
        let q = p.to_pole().unwrap().to_polar().unwrap();
        for i in 0..3 {
            assert!((p.coords()[i] - q.coords()[i]).abs() < 1e-12);
        }
        let p = ChartPoint::polar(-0.3, 2.9, 1.0).unwrap();
        assert_eq!(p.to_pole().unwrap().chart(), ChartId::NeckPoleSouth);
        let q = p.to_pole().unwrap().to_polar().unwrap();
        assert!((p.coords()[1] - q.coords()[1]).abs() < 1e-12);
    }

    #[test]
    fn phi_is_reduced() {
        let p = ChartPoint::polar(0.0, 1.0, -1.0).unwrap();
        assert!((p.coords()[2] - (TAU - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn domain_checks() {
        assert!(ChartPoint::polar(0.0, 0.0, 0.0).is_err());
        assert!(ChartPoint::polar(0.0, PI, 0.0).is_err());
        assert!(ChartPoint::north(0.0, 0.8, 0.6).is_err());
        assert!(ChartPoint::new(ChartId::R3Plus, [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn g_identity() {
        for i in 0..50 {
            let t = 0.06 * i as f64;
            let (s, c) = t.sin_cos();
            assert!((g_theta(t) - (3.0 * c * c + s * s)).abs() < 1e-15);
        }
    }
}
