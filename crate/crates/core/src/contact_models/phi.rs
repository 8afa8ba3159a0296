use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::forms::{lambda_one, ChartOneForm};
use super::{ChartId, ChartPoint, ContactError};

/// Which Darboux ball a neck end is glued to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `(rho sin(theta) cos(phi), rho sin(theta) sin(phi), rho^3 cos(theta))`, the
/// unsigned gluing map, in either neck chart.
pub fn phi_components(p: &ChartPoint) -> Result<[f64; 3], ContactError> {
    match p.chart() {
        ChartId::NeckPolar => {
            let [rho, theta, phi] = p.coords();
            let (s, c) = theta.sin_cos();
            Ok([
                rho * s * phi.cos(),
                rho * s * phi.sin(),
                rho * rho * rho * c,
            ])
        }
        ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
            let [rho, x, y] = p.coords();
            let (_, c, _) = p.neck_trig()?;
            Ok([rho * x, rho * y, rho * rho * rho * c])
        }
        other => Err(ContactError::WrongChart {
            expected: "neck",
            got: other.as_str(),
        }),
    }
}

/// Jacobian of [`phi_components`] (rows: image coordinates, columns: chart coordinates).
pub fn phi_jacobian(p: &ChartPoint) -> Result<Matrix3<f64>, ContactError> {
    match p.chart() {
        ChartId::NeckPolar => {
            let [rho, theta, phi] = p.coords();
            let (s, c) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            Ok(Matrix3::new(
                s * cp,
                rho * c * cp,
                -rho * s * sp, //
                s * sp,
                rho * c * sp,
                rho * s * cp, //
                3.0 * rho * rho * c,
                -rho * rho * rho * s,
                0.0,
            ))
        }
        ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
            let [rho, x, y] = p.coords();
            let (_, c, _) = p.neck_trig()?;
            let r3 = rho * rho * rho;
            Ok(Matrix3::new(
                x,
                rho,
                0.0, //
                y,
                0.0,
                rho, //
                3.0 * rho * rho * c,
                -r3 * x / c,
                -r3 * y / c,
            ))
        }
        other => Err(ContactError::WrongChart {
            expected: "neck",
            got: other.as_str(),
        }),
    }
}

fn check_sign(sign: Sign, rho: f64) -> Result<(), ContactError> {
    if rho == 0.0 {
        return Err(ContactError::ZeroRho);
    }
    if sign.value() * rho < 0.0 {
        return Err(ContactError::SignMismatch);
    }
    Ok(())
}

/// `Phi_+-` applied to a neck point with `+-rho > 0`: image point and `det D Phi`.
///
/// In the polar chart the determinant is taken in the ordered frame
/// `(d_rho, d_phi, d_theta)`, which is the opposite orientation to the storage
/// order `(rho, theta, phi)`. Pole charts use `(rho, X, Y)`.
pub fn phi_map(sign: Sign, p: &ChartPoint) -> Result<(ChartPoint, f64), ContactError> {
    check_sign(sign, p.rho())?;
    let k = sign.value();
    let [x, y, z] = phi_components(p)?;
    let chart = match sign {
        Sign::Plus => ChartId::R3Plus,
        Sign::Minus => ChartId::R3Minus,
    };
    let image = ChartPoint::new(chart, [k * x, k * y, k * z])?;
    let mut det = (phi_jacobian(p)? * k).determinant();
    if p.chart() == ChartId::NeckPolar {
        det = -det;
    }
    Ok((image, det))
}

/// Largest coefficient of `Phi_+-^* lambda_+- - rho^2 lambda_1` at `p`.
pub fn pullback_residual(sign: Sign, p: &ChartPoint) -> Result<f64, ContactError> {
    let (image, _) = phi_map(sign, p)?;
    let form = match sign {
        Sign::Plus => ChartOneForm::StandardPlus,
        Sign::Minus => ChartOneForm::StandardMinus,
    };
    let a = Vector3::from(form.jet(&image)?.coeffs);
    let pulled = (phi_jacobian(p)? * sign.value()).transpose() * a;
    let l1 = lambda_one(p)?;
    let r2 = p.rho() * p.rho();
    Ok((0..3)
        .map(|j| (pulled[j] - r2 * l1[j]).abs())
        .fold(0.0, f64::max))
}
