use nalgebra::Matrix3;
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;

use super::profile::RadialProfile;
use super::{ChartPoint, ContactError, TangentVector};

/// The frame of `xi_1` used to trivialize the neck:
/// `v_1 = (f g)^{-1} (-3 cot(theta) d_phi + 1/2 sin(theta) d_rho)`,
/// `v_2 = 2 rho csc(theta) d_phi + d_theta`.
pub fn symplectic_frame<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<(TangentVector, TangentVector), ContactError> {
    let [rho, theta, _] = p.guarded_polar()?;
    let (s, c) = theta.sin_cos();
    let f = profile.f(rho);
    let g = 2.0 * c * c + 1.0;
    let v1 = TangentVector {
        base: *p,
        components: [0.5 * s / (f * g), 0.0, -3.0 * c / (s * f * g)],
    };
    let v2 = TangentVector {
        base: *p,
        components: [0.0, 1.0, 2.0 * rho / s],
    };
    Ok((v1, v2))
}

/// Partial derivatives of the frame fields, `dv[(i, k)] = d v^i / d x^k` in the polar chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDerivatives {
    pub dv1: Matrix3<f64>,
    pub dv2: Matrix3<f64>,
}

pub fn frame_derivatives<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<FrameDerivatives, ContactError> {
    let [rho, theta, _] = p.guarded_polar()?;
    let (s, c) = theta.sin_cos();
    let [f, df, _] = profile.jet(rho);
    let g = 2.0 * c * c + 1.0;
    let dg = -4.0 * c * s;
    let mut dv1 = Matrix3::zeros();
    dv1[(0, 0)] = -s * df / (2.0 * f * f * g);
    dv1[(0, 1)] = (c * g - s * dg) / (2.0 * f * g * g);
    dv1[(2, 0)] = 3.0 * c * df / (s * f * f * g);
    dv1[(2, 1)] = 3.0 * (g + c * s * dg) / (f * s * s * g * g);
    let mut dv2 = Matrix3::zeros();
    dv2[(2, 0)] = 2.0 / s;
    dv2[(2, 1)] = -2.0 * rho * c / (s * s);
    Ok(FrameDerivatives { dv1, dv2 })
}
