//! Paths and loops in Sp(2,R).
//!
//! A [`SymplecticPath`] is sampled on a uniform grid of `[0, 1]` and starts at
//! the identity. The Conley-Zehnder index is computed from the rotation angle
//! of the polar part: the angle is lifted along the path, the endpoint is joined
//! to a normal form (`-I` or `diag(2, 1/2)`) without leaving the nondegenerate
//! set, and the final angle is counted in half turns.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Complex, Matrix2};
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;
use thiserror::Error;

pub type Mat2 = Matrix2<f64>;

/// Tolerance on `|det - 1|` for a single symplectic matrix.
pub const DET_TOL: f64 = 1e-9;
/// Tolerance on `|det(Psi(1) - I)|` below which an endpoint is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Tolerance on `|lambda - 1|` used by [`classify_endpoint`].
pub const EIGEN_ONE_TOL: f64 = 1e-8;
/// Tolerance on `||Psi(1) - I||` for a loop.
pub const LOOP_TOL: f64 = 1e-6;
/// Largest allowed rounding residual when an angle is converted to an integer.
pub const ROUNDING_TOL: f64 = 0.1;

const MIN_STEPS: usize = 16;
const ARC_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("determinant {det} differs from 1 by more than the allowed tolerance")]
    NotSymplectic { det: f64 },
    #[error("matrix has non-finite entries")]
    NonFiniteMatrix,
    #[error("at least {MIN_STEPS} steps are required, got {0}")]
    TooFewSteps(usize),
    #[error("generator is not finite at t = {0}")]
    NonFiniteGenerator(f64),
    #[error("determinant became non-positive at t = {0}")]
    DeterminantCollapse(f64),
    #[error("a path needs at least two samples")]
    TooShort,
    #[error("path does not start at the identity")]
    NotAtIdentity,
    #[error("paths are sampled on different grids")]
    GridMismatch,
    #[error("loop does not close: |Psi(1) - I| = {0}")]
    NotALoop(f64),
    #[error("rotation angle jumps by {jump} between samples {index} and {next}; refine the grid", next = index + 1)]
    UnderResolved { index: usize, jump: f64 },
    #[error("rounding residual {0} exceeds the allowed threshold")]
    RoundingResidual(f64),
    #[error("endpoint is degenerate: det(Psi(1) - I) = {0}")]
    Degenerate(f64),
    #[error("m * theta = {0} is within 1e-9 of an integer")]
    NearIntegerIterate(f64),
    #[error("iterate must be at least 1")]
    ZeroIterate,
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

/// The standard complex structure `[[0, -1], [1, 0]]`.
pub fn j0() -> Mat2 {
    Mat2::new(0.0, -1.0, 1.0, 0.0)
}

/// Counterclockwise rotation by `angle`.
pub fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// `ad - bc` evaluated with a fused correction term, accurate even when the
/// two products nearly cancel.
pub fn det2(m: &Mat2) -> f64 {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let w = b * c;
    let e = libm::fma(-b, c, w);
    let f = libm::fma(a, d, -w);
    f + e
}

/// Size of `|ad| + |bc|`, the scale against which determinant noise is measured.
pub fn det_scale(m: &Mat2) -> f64 {
    (m[(0, 0)] * m[(1, 1)]).abs() + (m[(0, 1)] * m[(1, 0)]).abs()
}

/// Inverse of a determinant-one matrix.
pub fn symplectic_inverse(m: &Mat2) -> Mat2 {
    Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Rotation angle of the polar factor `U` in `M = U P`, in `(-pi, pi]`.
pub fn polar_angle(m: &Mat2) -> f64 {
    (m[(1, 0)] - m[(0, 1)]).atan2(m[(0, 0)] + m[(1, 1)])
}

fn is_finite(m: &Mat2) -> bool {
    m.iter().all(|x| x.is_finite())
}

/// A 2x2 real matrix with determinant one.
///
/// The tolerance is `1e-9` relative to `max(1, |ad| + |bc|)`, so strongly
/// hyperbolic matrices whose determinant is only known up to rounding noise
/// are still accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMatrix(Mat2);

impl SymplecticMatrix {
    pub fn new(m: Mat2) -> Result<Self, PathError> {
        if !is_finite(&m) {
            return Err(PathError::NonFiniteMatrix);
        }
        let det = det2(&m);
        if (det - 1.0).abs() > DET_TOL * det_scale(&m).max(1.0) {
            return Err(PathError::NotSymplectic { det });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_inner(self) -> Mat2 {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(symplectic_inverse(&self.0))
    }
}

/// A path in Sp(2,R) on the uniform grid `t_k = k / (n - 1)` with `Psi(0) = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPath {
    samples: Vec<Mat2>,
}

impl SymplecticPath {
    /// Wraps samples taken on a uniform grid of `[0, 1]`.
    pub fn new(samples: Vec<Mat2>) -> Result<Self, PathError> {
        if samples.len() < 2 {
            return Err(PathError::TooShort);
        }
        for m in &samples {
            SymplecticMatrix::new(*m)?;
        }
        if (samples[0] - Mat2::identity()).norm() > DET_TOL {
            return Err(PathError::NotAtIdentity);
        }
        Ok(Self { samples })
    }

    /// Samples `f` at `steps + 1` uniform points.
    pub fn from_fn(f: impl Fn(f64) -> Mat2, steps: usize) -> Result<Self, PathError> {
        let n = steps.max(1);
        Self::new((0..=n).map(|k| f(k as f64 / n as f64)).collect())
    }

    pub fn samples(&self) -> &[Mat2] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        1.0 / (self.samples.len() - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step()
    }

    pub fn endpoint(&self) -> Mat2 {
        self.samples[self.samples.len() - 1]
    }

    /// Pointwise inverse `t -> Psi(t)^{-1}`.
    pub fn inverse(&self) -> Self {
        Self {
            samples: self.samples.iter().map(symplectic_inverse).collect(),
        }
    }

    /// Pointwise product `t -> g(t) Psi(t)`.
    pub fn left_multiply(&self, g: &SymplecticPath) -> Result<Self, PathError> {
        if g.len() != self.len() {
            return Err(PathError::GridMismatch);
        }
        Ok(Self {
            samples: g
                .samples
                .iter()
                .zip(&self.samples)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Conjugation `t -> C Psi(t) C^{-1}`.
    pub fn conjugate(&self, c: &SymplecticMatrix) -> Self {
        let ci = symplectic_inverse(c.matrix());
        Self {
            samples: self.samples.iter().map(|m| c.matrix() * m * ci).collect(),
        }
    }
}

/// Endpoint classes of nondegenerate paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Elliptic,
    HyperbolicEven,
    HyperbolicOdd,
    Degenerate,
}

impl EndpointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EndpointKind::Elliptic => "elliptic",
            EndpointKind::HyperbolicEven => "hyperbolic_even",
            EndpointKind::HyperbolicOdd => "hyperbolic_odd",
            EndpointKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEndpointClass {
    pub kind: EndpointKind,
    pub eigenvalues: [Complex<f64>; 2],
}

/// Classifies a matrix by its eigenvalues.
pub fn classify_endpoint(m: &SymplecticMatrix) -> PathEndpointClass {
    let m = m.matrix();
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let disc = half_tr * half_tr - det2(m);
    let eigenvalues = if disc >= 0.0 {
        let r = disc.sqrt();
        // the smaller root is recovered from the product to avoid cancellation
        let big = if half_tr >= 0.0 {
            half_tr + r
        } else {
            half_tr - r
        };
        let small = if big != 0.0 { det2(m) / big } else { 0.0 };
        [Complex::new(big, 0.0), Complex::new(small, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [Complex::new(half_tr, r), Complex::new(half_tr, -r)]
    };
    let near_one = eigenvalues
        .iter()
        .any(|l| (l - Complex::new(1.0, 0.0)).norm_sqr().sqrt() <= EIGEN_ONE_TOL);
    let kind = if near_one {
        EndpointKind::Degenerate
    } else if disc < 0.0 {
        EndpointKind::Elliptic
    } else if eigenvalues[0].re > 0.0 {
        EndpointKind::HyperbolicEven
    } else {
        EndpointKind::HyperbolicOdd
    };
    PathEndpointClass { kind, eigenvalues }
}

/// Statistics collected by [`evolve_linear_system_with_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvolveStats {
    /// Largest `|det - 1|` seen after an RK4 step and before re-normalization.
    pub max_det_drift: f64,
}

/// RK4 solution of `Psi' = M(t) Psi`, `Psi(0) = I` on `steps` uniform steps.
pub fn evolve_linear_system(
    generator: impl Fn(f64) -> Mat2,
    steps: usize,
) -> Result<SymplecticPath, PathError> {
    evolve_linear_system_with_stats(generator, steps).map(|(p, _)| p)
}

/// As [`evolve_linear_system`], also reporting the determinant drift.
///
/// After each step the matrix is divided by `sqrt(det)` whenever the drift
/// exceeds the rounding noise the determinant has accumulated. For strongly
/// hyperbolic paths `det` is pure noise and rescaling by it would corrupt the
/// dominant direction, so no correction is applied there.
pub fn evolve_linear_system_with_stats(
    generator: impl Fn(f64) -> Mat2,
    steps: usize,
) -> Result<(SymplecticPath, EvolveStats), PathError> {
    if steps < MIN_STEPS {
        return Err(PathError::TooFewSteps(steps));
    }
    let h = 1.0 / steps as f64;
    let eval = |t: f64| {
        let m = generator(t);
        if is_finite(&m) {
            Ok(m)
        } else {
            Err(PathError::NonFiniteGenerator(t))
        }
    };
    let mut stats = EvolveStats::default();
    let mut psi = Mat2::identity();
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(psi);
    let mut m0 = eval(0.0)?;
    // rounding noise accumulated in the determinant since the last re-normalization
    let mut noise = 0.0;
    for k in 0..steps {
        let t = k as f64 * h;
        let m_half = eval(t + 0.5 * h)?;
        let m1 = eval(t + h)?;
        let k1 = m0 * psi;
        let k2 = m_half * (psi + k1 * (0.5 * h));
        let k3 = m_half * (psi + k2 * (0.5 * h));
        let k4 = m1 * (psi + k3 * h);
        psi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let det = det2(&psi);
        if !det.is_finite() || !is_finite(&psi) {
            return Err(PathError::DeterminantCollapse(t + h));
        }
        let drift = (det - 1.0).abs();
        stats.max_det_drift = stats.max_det_drift.max(drift);
        noise += 4.0 * f64::EPSILON * det_scale(&psi);
        if drift > noise {
            if det <= 0.0 {
                return Err(PathError::DeterminantCollapse(t + h));
            }
            psi /= det.sqrt();
            noise = 4.0 * f64::EPSILON * det_scale(&psi);
        }
        samples.push(psi);
        m0 = m1;
    }
    Ok((SymplecticPath { samples }, stats))
}

/// Continuous lift of a sequence of angles given modulo `2 pi`.
///
/// Fails when two consecutive samples differ by more than `pi / 2`.
pub fn lift_angles(raw: &[f64]) -> Result<Vec<f64>, PathError> {
    let mut out = Vec::with_capacity(raw.len());
    let Some(&first) = raw.first() else {
        return Ok(out);
    };
    out.push(first);
    let mut acc = first;
    for (i, w) in raw.windows(2).enumerate() {
        let jump = wrap_pi(w[1] - w[0]);
        if jump.abs() > FRAC_PI_2 {
            return Err(PathError::UnderResolved { index: i, jump });
        }
        acc += jump;
        out.push(acc);
    }
    Ok(out)
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

fn round_checked(x: f64) -> Result<i64, PathError> {
    let r = x.round();
    let residual = (x - r).abs();
    if residual > ROUNDING_TOL {
        return Err(PathError::RoundingResidual(residual));
    }
    Ok(r as i64)
}

/// Maslov index of a loop: winding of the polar rotation angle.
pub fn maslov_index(lp: &SymplecticPath) -> Result<i64, PathError> {
    let gap = (lp.endpoint() - Mat2::identity()).norm();
    if gap > LOOP_TOL {
        return Err(PathError::NotALoop(gap));
    }
    let raw: Vec<f64> = lp.samples().iter().map(polar_angle).collect();
    let lifted = lift_angles(&raw)?;
    round_checked((lifted[lifted.len() - 1] - lifted[0]) / TAU)
}

/// `det(Psi - I)` for a determinant-one matrix, i.e. `2 - tr Psi`.
pub fn det_minus_identity(m: &Mat2) -> f64 {
    2.0 - (m[(0, 0)] + m[(1, 1)])
}

/// Symmetric positive factor `P` and its spectral data `(sigma, phi)` where
/// `P = R(phi) diag(sigma, 1/sigma) R(phi)^T`, `sigma >= 1`.
fn spd_spectral(p: &Mat2) -> (f64, f64) {
    let (a, b, d) = (p[(0, 0)], 0.5 * (p[(0, 1)] + p[(1, 0)]), p[(1, 1)]);
    let half_tr = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let sigma = half_tr + r;
    let phi = 0.5 * (2.0 * b).atan2(a - d);
    (sigma.max(1.0), phi)
}

fn spd_from_spectral(sigma: f64, phi: f64) -> Mat2 {
    let q = rotation(phi);
    q * Mat2::new(sigma, 0.0, 0.0, 1.0 / sigma) * q.transpose()
}

/// Normal-form arc from `end` (with lifted polar angle `alpha`) to `-I` or
/// `diag(2, 1/2)`, staying in the component of the nondegenerate set that
/// contains `end`.
fn normal_form_arc(end: &Mat2, alpha: f64) -> Vec<Mat2> {
    let base = polar_angle(end);
    let p = rotation(-base) * end;
    let (sigma, phi) = spd_spectral(&p);
    let mut arc = Vec::with_capacity(2 * ARC_SAMPLES + 1);
    let steps = ARC_SAMPLES;
    if det_minus_identity(end) > 0.0 {
        // shrink the positive factor to the identity, then rotate to an odd multiple of pi
        for k in 1..=steps {
            let u = 1.0 - k as f64 / steps as f64;
            arc.push(rotation(base) * spd_from_spectral(sigma.powf(u), phi));
        }
        let target = (2.0 * (alpha / TAU).floor() + 1.0) * PI;
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            arc.push(rotation(alpha + s * (target - alpha)));
        }
    } else {
        // rotate to the nearest multiple of 2 pi, then move the positive factor to diag(2, 1/2)
        let target = (alpha / TAU).round() * TAU;
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            arc.push(rotation(alpha + s * (target - alpha)) * p);
        }
        let phi0 = wrap_half_pi(phi);
        let (l0, l1) = (sigma.ln(), 2.0f64.ln());
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            arc.push(spd_from_spectral(
                (l0 + s * (l1 - l0)).exp(),
                (1.0 - s) * phi0,
            ));
        }
    }
    arc
}

fn wrap_half_pi(phi: f64) -> f64 {
    let mut p = phi % PI;
    if p > FRAC_PI_2 {
        p -= PI;
    } else if p <= -FRAC_PI_2 {
        p += PI;
    }
    p
}

/// Conley-Zehnder index of a path with nondegenerate endpoint.
pub fn conley_zehnder(path: &SymplecticPath) -> Result<i64, PathError> {
    let end = path.endpoint();
    let dmi = det_minus_identity(&end);
    if dmi.abs() <= DEGENERACY_TOL {
        return Err(PathError::Degenerate(dmi));
    }
    let raw: Vec<f64> = path.samples().iter().map(polar_angle).collect();
    let lifted = lift_angles(&raw)?;
    let alpha = lifted[lifted.len() - 1];
    let mut prev = polar_angle(&end);
    let mut acc = alpha;
    for (i, m) in normal_form_arc(&end, alpha).iter().enumerate() {
        let a = polar_angle(m);
        let jump = wrap_pi(a - prev);
        if jump.abs() > FRAC_PI_2 {
            return Err(PathError::UnderResolved {
                index: lifted.len() + i,
                jump,
            });
        }
        acc += jump;
        prev = a;
    }
    round_checked(acc / PI)
}

/// Base data of an orbit for the iteration formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CzBase {
    /// Conley-Zehnder index of the simple hyperbolic orbit.
    Hyperbolic(i64),
    /// Rotation number of an elliptic orbit.
    Elliptic(f64),
}

/// Conley-Zehnder index of the `m`-fold iterate.
pub fn cz_iterate(base: CzBase, m: u32) -> Result<i64, PathError> {
    if m == 0 {
        return Err(PathError::ZeroIterate);
    }
    match base {
        CzBase::Hyperbolic(mu) => Ok(mu * m as i64),
        CzBase::Elliptic(theta) => {
            let x = theta * m as f64;
            if (x - x.round()).abs() <= 1e-9 {
                return Err(PathError::NearIntegerIterate(x));
            }
            Ok(2 * x.floor() as i64 + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det2_is_exact_for_small_integers() {
        assert_eq!(det2(&Mat2::new(3.0, 5.0, 2.0, 4.0)), 2.0);
    }

    #[test]
    fn wrap_pi_range() {
        assert!((wrap_pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_pi(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn lift_rejects_large_jumps() {
        assert!(matches!(
            lift_angles(&[0.0, 2.0]),
            Err(PathError::UnderResolved { index: 0, .. })
        ));
    }

    #[test]
    fn spd_roundtrip() {
        let p = spd_from_spectral(3.0, 0.4);
        let (s, phi) = spd_spectral(&p);
        assert!((s - 3.0).abs() < 1e-12);
        assert!((phi - 0.4).abs() < 1e-12);
    }

    #[test]
    fn arc_ends_at_normal_forms() {
        let e = rotation(0.7) * spd_from_spectral(1.5, 0.2);
        let arc = normal_form_arc(&e, 0.7);
        assert!((arc[arc.len() - 1] + Mat2::identity()).norm() < 1e-12);
        let h = rotation(0.3) * spd_from_spectral(5.0, -1.2);
        let arc = normal_form_arc(&h, 0.3);
        assert!((arc[arc.len() - 1] - Mat2::new(2.0, 0.0, 0.0, 0.5)).norm() < 1e-12);
        for m in &arc {
            assert!(det_minus_identity(m) < 0.0);
        }
    }
}
