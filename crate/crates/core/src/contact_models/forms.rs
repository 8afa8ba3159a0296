use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;

use super::profile::{NeckProfile, RadialProfile};
use super::{ChartId, ChartPoint, ContactError, TangentVector, CONTACT_TOL};

/// Coefficients `a_j` of `a_0 dx^0 + a_1 dx^1 + a_2 dx^2` and their partials,
/// `partials[j][i] = d a_j / d x^i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormJet {
    pub coeffs: [f64; 3],
    pub partials: [[f64; 3]; 3],
}

impl FormJet {
    /// `d lambda` as the antisymmetric matrix `W_ij = d_i a_j - d_j a_i`.
    pub fn d_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.partials[j][i] - self.partials[i][j])
    }

    /// Curl vector `(W_12, W_20, W_01)`, the kernel direction of `d lambda`.
    pub fn curl(&self) -> Vector3<f64> {
        let w = self.d_matrix();
        Vector3::new(w[(1, 2)], w[(2, 0)], w[(0, 1)])
    }

    /// Coefficient of `lambda ^ d lambda` against `dx^0 ^ dx^1 ^ dx^2`.
    pub fn contact_volume(&self) -> f64 {
        Vector3::from(self.coeffs).dot(&self.curl())
    }

    pub fn eval(&self, v: &[f64; 3]) -> f64 {
        (0..3).map(|i| self.coeffs[i] * v[i]).sum()
    }

    /// `d lambda (u, v)`.
    pub fn d_eval(&self, u: &[f64; 3], v: &[f64; 3]) -> f64 {
        (Vector3::from(*u).transpose() * self.d_matrix() * Vector3::from(*v))[(0, 0)]
    }

    fn scaled(&self, k: f64) -> Self {
        let mut out = *self;
        for j in 0..3 {
            out.coeffs[j] *= k;
            for i in 0..3 {
                out.partials[j][i] *= k;
            }
        }
        out
    }
}

/// Contact forms built in code.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartOneForm {
    /// `dz + 1/2 (x dy - y dx)` on `r3_plus`.
    StandardPlus,
    /// `-dz + 1/2 (x dy - y dx)` on `r3_minus`.
    StandardMinus,
    /// `lambda_1` on the neck charts.
    LambdaOne,
    /// `f(rho) lambda_1` on the neck charts.
    Neck(NeckProfile),
    /// A constant multiple of another form.
    Scaled(f64, alloc::boxed::Box<ChartOneForm>),
}

impl ChartOneForm {
    /// Coefficients and analytic partials at `p`.
    pub fn jet(&self, p: &ChartPoint) -> Result<FormJet, ContactError> {
        match self {
            ChartOneForm::StandardPlus => standard_jet(p, ChartId::R3Plus, 1.0),
            ChartOneForm::StandardMinus => standard_jet(p, ChartId::R3Minus, -1.0),
            ChartOneForm::LambdaOne => lambda_one_jet(p),
            ChartOneForm::Neck(profile) => radial_form_jet(profile, p),
            ChartOneForm::Scaled(k, inner) => Ok(inner.jet(p)?.scaled(*k)),
        }
    }

    /// Value `lambda(v)` at the base point of `v`.
    pub fn eval(&self, v: &TangentVector) -> Result<f64, ContactError> {
        Ok(self.jet(&v.base)?.eval(&v.components))
    }

    /// Checks `lambda ^ d lambda != 0` at `p`, returning the volume coefficient.
    pub fn contact_check(&self, p: &ChartPoint) -> Result<f64, ContactError> {
        let vol = self.jet(p)?.contact_volume();
        if vol.abs() <= CONTACT_TOL {
            return Err(ContactError::NotContact(vol));
        }
        Ok(vol)
    }
}

/// Jet of `f(rho) lambda_1` for any radial profile.
pub fn radial_form_jet<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
) -> Result<FormJet, ContactError> {
    let base = lambda_one_jet(p)?;
    let [f, df, _] = profile.jet(p.rho());
    let mut out = base.scaled(f);
    for j in 0..3 {
        out.partials[j][0] += df * base.coeffs[j];
    }
    Ok(out)
}

fn standard_jet(p: &ChartPoint, chart: ChartId, sign: f64) -> Result<FormJet, ContactError> {
    if p.chart() != chart {
        return Err(ContactError::WrongChart {
            expected: chart.as_str(),
            got: p.chart().as_str(),
        });
    }
    let [x, y, _] = p.coords();
    Ok(FormJet {
        coeffs: [-0.5 * y, 0.5 * x, sign],
        partials: [[0.0, -0.5, 0.0], [0.5, 0.0, 0.0], [0.0, 0.0, 0.0]],
    })
}

/// Coefficients of `lambda_1` at a neck point.
pub fn lambda_one(p: &ChartPoint) -> Result<[f64; 3], ContactError> {
    Ok(lambda_one_jet(p)?.coeffs)
}

/// Coefficients and partials of `lambda_1` in the chart of `p`.
///
/// In a pole chart with `c = cos(theta) = +-sqrt(1 - X^2 - Y^2)`:
/// `lambda_1 = 3c d rho - (rho / c)(X dX + Y dY) + 1/2 (X dY - Y dX)`.
pub fn lambda_one_jet(p: &ChartPoint) -> Result<FormJet, ContactError> {
    match p.chart() {
        ChartId::NeckPolar => {
            let [rho, theta, _] = p.coords();
            let (s, c) = theta.sin_cos();
            Ok(FormJet {
                coeffs: [3.0 * c, -rho * s, 0.5 * s * s],
                partials: [[0.0, -3.0 * s, 0.0], [-s, -rho * c, 0.0], [0.0, s * c, 0.0]],
            })
        }
        ChartId::NeckPoleNorth | ChartId::NeckPoleSouth => {
            let [rho, x, y] = p.coords();
            let (_, c, _) = p.neck_trig()?;
            let c3 = c * c * c;
            let c2 = c * c;
            Ok(FormJet {
                coeffs: [3.0 * c, -rho * x / c - 0.5 * y, -rho * y / c + 0.5 * x],
                partials: [
                    [0.0, -3.0 * x / c, -3.0 * y / c],
                    [-x / c, -rho * (c2 + x * x) / c3, -rho * x * y / c3 - 0.5],
                    [-y / c, -rho * x * y / c3 + 0.5, -rho * (c2 + y * y) / c3],
                ],
            })
        }
        other => Err(ContactError::WrongChart {
            expected: "neck",
            got: other.as_str(),
        }),
    }
}

/// Reeb field from `lambda(X) = 1`, `d lambda(X, e_1) = d lambda(X, e_2) = 0`
/// with `e_1, e_2` spanning the kernel of `lambda` at the point.
pub fn reeb_field_numeric(
    form: &ChartOneForm,
    p: &ChartPoint,
) -> Result<TangentVector, ContactError> {
    let jet = form.jet(p)?;
    let vol = jet.contact_volume();
    if vol.abs() <= CONTACT_TOL {
        return Err(ContactError::NotContact(vol));
    }
    let a = Vector3::from(jet.coeffs);
    let (e1, e2) = kernel_basis(&a);
    let w = jet.d_matrix();
    let r1 = w * e1;
    let r2 = w * e2;
    let m = Matrix3::from_rows(&[a.transpose(), r1.transpose(), r2.transpose()]);
    let rhs = Vector3::new(1.0, 0.0, 0.0);
    let x = m.lu().solve(&rhs).ok_or(ContactError::NotContact(vol))?;
    if x.iter().any(|c| !c.is_finite()) {
        return Err(ContactError::NonFinite);
    }
    Ok(TangentVector {
        base: *p,
        components: [x[0], x[1], x[2]],
    })
}

/// Orthonormal basis of the plane orthogonal to `a`.
fn kernel_basis(a: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let n = a.normalize();
    let pick = if n[0].abs() < 0.6 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = (pick - n * n.dot(&pick)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// `(|lambda(X) - 1|, |i_X d lambda|)` for a candidate Reeb vector.
pub fn reeb_residuals(form: &ChartOneForm, x: &TangentVector) -> Result<(f64, f64), ContactError> {
    let jet = form.jet(&x.base)?;
    let v = Vector3::from(x.components);
    let contraction = jet.d_matrix().transpose() * v;
    Ok(((jet.eval(&x.components) - 1.0).abs(), contraction.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_partials_match_differences() {
        let p = ChartPoint::south(0.4, 0.3, -0.2).unwrap();
        let jet = lambda_one_jet(&p).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut up = p.coords();
            let mut dn = p.coords();
            up[i] += h;
            dn[i] -= h;
            let a = lambda_one(&ChartPoint::south(up[0], up[1], up[2]).unwrap()).unwrap();
            let b = lambda_one(&ChartPoint::south(dn[0], dn[1], dn[2]).unwrap()).unwrap();
            for j in 0..3 {
                assert!(((a[j] - b[j]) / (2.0 * h) - jet.partials[j][i]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn kernel_basis_is_orthonormal() {
        let a = Vector3::new(0.3, -2.0, 0.7);
        let (e1, e2) = kernel_basis(&a);
        assert!(e1.dot(&a).abs() < 1e-14 && e2.dot(&a).abs() < 1e-14);
        assert!((e1.norm() - 1.0).abs() < 1e-14 && e1.dot(&e2).abs() < 1e-14);
    }
}
