use nalgebra::Matrix3;
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;

use super::profile::RadialProfile;
use super::{ChartId, ChartPoint, ContactError, TangentVector};

/// Reeb field of `f(rho) lambda_1`:
/// `X_f = [g f^2]^{-1} [(2f - rho f') d_phi - 1/2 sin(theta) f' d_theta + f cos(theta) d_rho]`,
/// expressed in the chart of `p`.
pub fn reeb_field_closed_form<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<TangentVector, ContactError> {
    let rho = p.rho();
    let [f, df, _] = profile.jet(rho);
    let components = match p.chart() {
        ChartId::NeckPolar => {
            let [_, theta, _] = p.guarded_polar()?;
            let (s, c) = theta.sin_cos();
            let g = 2.0 * c * c + 1.0;
            let d = g * f * f;
            [f * c / d, -0.5 * s * df / d, (2.0 * f - rho * df) / d]
        }
        ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
            let [_, x, y] = p.coords();
            let (_, c, _) = p.neck_trig()?;
            let g = 3.0 - 2.0 * (x * x + y * y);
            let d = g * f * f;
            let spin = 2.0 * f - rho * df;
            [
                c / (g * f),
                (-0.5 * c * x * df - y * spin) / d,
                (-0.5 * c * y * df + x * spin) / d,
            ]
        }
        other => {
            return Err(ContactError::WrongChart {
                expected: "neck",
                got: other.as_str(),
            })
        }
    };
    if components.iter().any(|c| !c.is_finite()) {
        return Err(ContactError::NonFinite);
    }
    Ok(TangentVector {
        base: *p,
        components,
    })
}

/// Analytic Jacobian `J[i][k] = d X^i / d x^k` of the closed-form Reeb field
/// in the polar chart.
pub fn reeb_field_jacobian_polar<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<Matrix3<f64>, ContactError> {
    let [rho, theta, _] = p.guarded_polar()?;
    let [f, df, ddf] = profile.jet(rho);
    let (s, c) = theta.sin_cos();
    let g = 2.0 * c * c + 1.0;
    let dg = -4.0 * c * s;
    let d = g * f * f;
    let dd = [2.0 * g * f * df, dg * f * f];
    let n = [f * c, -0.5 * s * df, 2.0 * f - rho * df];
    let dn = [
        [df * c, -f * s],
        [-0.5 * s * ddf, -0.5 * c * df],
        [df - rho * ddf, 0.0],
    ];
    let mut jac = Matrix3::zeros();
    for i in 0..3 {
        let xi = n[i] / d;
        for k in 0..2 {
            jac[(i, k)] = (dn[i][k] - xi * dd[k]) / d;
        }
    }
    Ok(jac)
}

/// `dZ(X_f)` for `Z = rho cos(theta)`:
/// `(g f^2)^{-1} (f cos^2(theta) + 1/2 f' rho sin^2(theta))`.
pub fn z_derivative_along_reeb<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<f64, ContactError> {
    let (rho, c, s) = p.neck_trig()?;
    let [f, df, _] = profile.jet(rho);
    let g = 2.0 * c * c + 1.0;
    Ok((f * c * c + 0.5 * df * rho * s * s) / (g * f * f))
}
