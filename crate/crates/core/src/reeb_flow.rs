//! RK4 integration of the neck Reeb field, the equatorial orbit and its
//! linearized return map.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;
use thiserror::Error;

use crate::contact_models::{
    frame_derivatives, radial_form_jet, reeb_field_closed_form, reeb_field_jacobian_polar,
    symplectic_frame, ChartId, ChartPoint, ContactError, NeckProfile, RadialProfile, TangentVector,
};
use crate::sp_paths::{
    classify_endpoint, conley_zehnder, evolve_linear_system, wrap_pi, EndpointKind, Mat2,
    PathEndpointClass, PathError, SymplecticMatrix, SymplecticPath,
};

/// Polar to pole switch threshold on `|sin theta|`.
pub const SWITCH_TO_POLE: f64 = 0.1;
/// Pole to polar switch threshold on `sqrt(X^2 + Y^2)`.
pub const SWITCH_TO_POLAR: f64 = 0.12;
/// Trajectories stop when `|rho|` reaches this multiple of epsilon.
pub const REGION_FACTOR: f64 = 10.0;
/// Slack allowed when checking that `Z` is non-decreasing.
pub const MONOTONE_SLACK: f64 = 1e-10;
/// Evolution steps for the linearized return map (`h = 1e-4`).
pub const DEFAULT_ORBIT_STEPS: usize = 10_000;
/// Number of points at which an orbit record is sampled.
pub const ORBIT_SAMPLES: usize = 256;
pub const ORBIT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("flow is only modeled on the neck, got chart {0}")]
    NotNeckChart(&'static str),
    #[error("step {h} must be positive and at most duration/100 (duration {duration})")]
    BadStep { h: f64, duration: f64 },
    #[error("trajectory left the modeled region at t = {t} (rho = {rho})")]
    LeftRegion { t: f64, rho: f64 },
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("profile is not admissible: f(0) = {f0}, f''(0) = {f2}")]
    InvalidProfile { f0: f64, f2: f64 },
    #[error("orbit residual {0} exceeds tolerance")]
    OrbitResidual(f64),
    #[error("index {cz} has the wrong parity for a {kind} endpoint")]
    ParityMismatch { cz: i64, kind: &'static str },
    #[error("no return within t = {0}")]
    NoReturn(f64),
}

/// A chart change between consecutive trajectory points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChartTransition {
    /// Index of the first point expressed in the new chart.
    pub index: usize,
    pub from: ChartId,
    pub to: ChartId,
}

/// Sampled RK4 trajectory of a Reeb field.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<(f64, ChartPoint)>,
    h: f64,
    field_id: String,
    transitions: Vec<ChartTransition>,
}

impl Trajectory {
    pub fn points(&self) -> &[(f64, ChartPoint)] {
        &self.points
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn field_id(&self) -> &str {
        &self.field_id
    }

    pub fn transitions(&self) -> &[ChartTransition] {
        &self.transitions
    }

    pub fn endpoint(&self) -> ChartPoint {
        self.points[self.points.len() - 1].1
    }
}

fn field<P: RadialProfile + ?Sized>(
    profile: &P,
    chart: ChartId,
    x: [f64; 3],
) -> Result<[f64; 3], ContactError> {
    let p = ChartPoint::new(chart, x)?;
    Ok(reeb_field_closed_form(profile, &p)?.components)
}

fn axpy(x: [f64; 3], k: f64, v: [f64; 3]) -> [f64; 3] {
    [x[0] + k * v[0], x[1] + k * v[1], x[2] + k * v[2]]
}

/// Point of `R x R^3` carrying a neck point independently of its chart.
pub fn embed(p: &ChartPoint) -> Result<[f64; 4], ContactError> {
    let (rho, c, _) = p.neck_trig()?;
    let [_, a, b] = p.coords();
    let (x, y) = match p.chart() {
        ChartId::NeckPolar => (a.sin() * b.cos(), a.sin() * b.sin()),
        _ => (a, b),
    };
    Ok([rho, x, y, c])
}

/// Chart independent distance between two neck points.
pub fn neck_distance(a: &ChartPoint, b: &ChartPoint) -> Result<f64, ContactError> {
    let (ea, eb) = (embed(a)?, embed(b)?);
    Ok((0..4)
        .map(|i| (ea[i] - eb[i]) * (ea[i] - eb[i]))
        .sum::<f64>()
        .sqrt())
}

/// Incremental RK4 flow with chart switching.
///
/// In the polar chart the azimuth is kept unreduced so that full turns can be
/// counted; in the pole charts it is tracked by unwrapping `atan2(Y, X)`.
#[derive(Debug, Clone)]
pub struct Flow<'a, P: RadialProfile + ?Sized> {
    profile: &'a P,
    chart: ChartId,
    x: [f64; 3],
    phi: f64,
    t: f64,
    rho_max: f64,
}

impl<'a, P: RadialProfile + ?Sized> Flow<'a, P> {
    pub fn new(profile: &'a P, start: &ChartPoint, rho_max: f64) -> Result<Self, FlowError> {
        if !start.chart().is_neck() {
            return Err(FlowError::NotNeckChart(start.chart().as_str()));
        }
        let x = start.coords();
        let phi = match start.chart() {
            ChartId::NeckPolar => x[2],
            _ => x[2].atan2(x[1]),
        };
        let mut flow = Flow {
            profile,
            chart: start.chart(),
            x,
            phi,
            t: 0.0,
            rho_max,
        };
        flow.maybe_switch()?;
        Ok(flow)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    /// Unreduced azimuth.
    pub fn phi_lift(&self) -> f64 {
        self.phi
    }

    pub fn point(&self) -> ChartPoint {
        // the state is always inside the chart domain after a successful step
        ChartPoint::new(self.chart, self.x).expect("flow state left its chart")
    }

    /// Reeb field at the current state, in the current chart.
    pub fn velocity(&self) -> Result<[f64; 3], FlowError> {
        Ok(field(self.profile, self.chart, self.x)?)
    }

    /// Advances by `h`; returns the chart change if one happened.
    pub fn step(&mut self, h: f64) -> Result<Option<(ChartId, ChartId)>, FlowError> {
        let (p, c, x) = (self.profile, self.chart, self.x);
        let k1 = field(p, c, x)?;
        let k2 = field(p, c, axpy(x, 0.5 * h, k1))?;
        let k3 = field(p, c, axpy(x, 0.5 * h, k2))?;
        let k4 = field(p, c, axpy(x, h, k3))?;
        let mut next = x;
        for i in 0..3 {
            next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        self.t += h;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::NonFinite(self.t));
        }
        if next[0].abs() >= self.rho_max {
            return Err(FlowError::LeftRegion {
                t: self.t,
                rho: next[0],
            });
        }
        ChartPoint::new(c, next)?;
        self.x = next;
        if c == ChartId::NeckPolar {
            self.phi = next[2];
        } else if next[1] != 0.0 || next[2] != 0.0 {
            self.phi += wrap_pi(next[2].atan2(next[1]) - self.phi);
        }
        self.maybe_switch()
    }

    fn maybe_switch(&mut self) -> Result<Option<(ChartId, ChartId)>, FlowError> {
        let from = self.chart;
        match from {
            ChartId::NeckPolar if self.x[1].sin().abs() < SWITCH_TO_POLE => {
                let q = self.point().to_pole()?;
                self.chart = q.chart();
                self.x = q.coords();
            }
            ChartId::NeckPoleNorth | ChartId::NeckPoleSouth
                if (self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt() > SWITCH_TO_POLAR =>
            {
                let q = self.point().to_polar()?;
                let [rho, theta, phi] = q.coords();
                let phi = self.phi + wrap_pi(phi - self.phi);
                self.chart = ChartId::NeckPolar;
                self.x = [rho, theta, phi];
                self.phi = phi;
            }
            _ => return Ok(None),
        }
        Ok(Some((from, self.chart)))
    }
}

/// RK4 trajectory of `X_f` on `[0, duration]`, leaving the model at `|rho| >= 10 eps`.
pub fn integrate(
    profile: &NeckProfile,
    start: &ChartPoint,
    duration: f64,
    h: f64,
) -> Result<Trajectory, FlowError> {
    integrate_in(
        profile,
        start,
        duration,
        h,
        REGION_FACTOR * profile.epsilon(),
    )
}

/// As [`integrate`] for any radial profile, with an explicit region bound on `|rho|`.
///
/// The step is shrunk to `duration / ceil(duration / h)` so that the last point
/// lands on `duration`.
pub fn integrate_in<P: RadialProfile + ?Sized>(
    profile: &P,
    start: &ChartPoint,
    duration: f64,
    h: f64,
    rho_max: f64,
) -> Result<Trajectory, FlowError> {
    if !(h > 0.0 && duration > 0.0 && h <= duration / 100.0) {
        return Err(FlowError::BadStep { h, duration });
    }
    let steps = (duration / h - 1e-9).ceil() as usize;
    let h = duration / steps as f64;
    let mut flow = Flow::new(profile, start, rho_max)?;
    let mut points = Vec::with_capacity(steps + 1);
    let mut transitions = Vec::new();
    if flow.chart() != start.chart() {
        transitions.push(ChartTransition {
            index: 0,
            from: start.chart(),
            to: flow.chart(),
        });
    }
    points.push((0.0, flow.point()));
    for k in 1..=steps {
        if let Some((from, to)) = flow.step(h)? {
            transitions.push(ChartTransition { index: k, from, to });
        }
        points.push((k as f64 * h, flow.point()));
    }
    Ok(Trajectory {
        points,
        h,
        field_id: profile.label(),
        transitions,
    })
}

/// `Z = rho cos(theta)` along a trajectory.
pub fn monotone_functional(trajectory: &Trajectory) -> Vec<f64> {
    trajectory
        .points
        .iter()
        .map(|(_, p)| p.z_value().expect("trajectories only contain neck points"))
        .collect()
}

/// Index of the first sample that drops more than `slack` below its predecessor.
pub fn first_decrease(values: &[f64], slack: f64) -> Option<usize> {
    values
        .windows(2)
        .position(|w| w[1] < w[0] - slack)
        .map(|i| i + 1)
}

/// Discrete line integral of `f lambda_1` along a trajectory (midpoint rule on
/// chord displacements; segments that change chart use the field instead).
pub fn trajectory_action<P: RadialProfile + ?Sized>(
    profile: &P,
    trajectory: &Trajectory,
) -> Result<f64, FlowError> {
    let mut total = 0.0;
    for w in trajectory.points.windows(2) {
        let ((t0, a), (t1, b)) = (w[0], w[1]);
        if a.chart() != b.chart() {
            let x = reeb_field_closed_form(profile, &a)?;
            total += radial_form_jet(profile, &a)?.eval(&x.components) * (t1 - t0);
            continue;
        }
        let (ca, cb) = (a.coords(), b.coords());
        let mut d = [cb[0] - ca[0], cb[1] - ca[1], cb[2] - ca[2]];
        let mut mid = [
            0.5 * (ca[0] + cb[0]),
            0.5 * (ca[1] + cb[1]),
            0.5 * (ca[2] + cb[2]),
        ];
        if a.chart() == ChartId::NeckPolar {
            d[2] = wrap_pi(d[2]);
            mid[2] = ca[2] + 0.5 * d[2];
        }
        let m = ChartPoint::new(a.chart(), mid)?;
        total += radial_form_jet(profile, &m)?.eval(&d);
    }
    Ok(total)
}

/// Time and place at which a trajectory completes one full turn in the azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstReturn {
    pub time: f64,
    pub point: ChartPoint,
    /// Distance from the start, see [`neck_distance`].
    pub distance: f64,
}

fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * d1
}

/// Integrates from `start` until the unreduced azimuth has advanced by `2 pi`.
///
/// The crossing is located by cubic Hermite interpolation on the step where it
/// happens. Only polar-chart starts are accepted and the crossing must occur in
/// the polar chart.
pub fn first_return<P: RadialProfile + ?Sized>(
    profile: &P,
    start: &ChartPoint,
    h: f64,
    max_time: f64,
    rho_max: f64,
) -> Result<FirstReturn, FlowError> {
    if start.chart() != ChartId::NeckPolar {
        return Err(FlowError::NotNeckChart(start.chart().as_str()));
    }
    if !(h > 0.0 && max_time > h) {
        return Err(FlowError::BadStep {
            h,
            duration: max_time,
        });
    }
    let mut flow = Flow::new(profile, start, rho_max)?;
    let target = flow.phi_lift() + TAU;
    while flow.time() < max_time {
        let (x0, v0, c0) = (flow.x, flow.velocity()?, flow.chart());
        let t0 = flow.time();
        flow.step(h)?;
        if flow.phi_lift() < target {
            continue;
        }
        if c0 != ChartId::NeckPolar || flow.chart() != ChartId::NeckPolar {
            return Err(FlowError::NotNeckChart(flow.chart().as_str()));
        }
        let (x1, v1) = (flow.x, flow.velocity()?);
        let phi_at = |s: f64| hermite(x0[2], x1[2], v0[2], v1[2], h, s);
        // the azimuth is monotone on the step, so bisection is safe
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if phi_at(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let coords = [
            hermite(x0[0], x1[0], v0[0], v1[0], h, s),
            hermite(x0[1], x1[1], v0[1], v1[1], h, s),
            target,
        ];
        let point = ChartPoint::new(ChartId::NeckPolar, coords)?;
        let distance = neck_distance(&point, start)?;
        return Ok(FirstReturn {
            time: t0 + s * h,
            point,
            distance,
        });
    }
    Err(FlowError::NoReturn(max_time))
}

/// Observed RK4 convergence under step halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub error_h: f64,
    pub error_half: f64,
    /// `error_h / error_half`, close to 16 for a fourth-order method.
    pub ratio: f64,
}

/// Endpoint errors at steps `h` and `h/2` against a reference run at `h/16`.
pub fn convergence_ratio<P: RadialProfile + ?Sized>(
    profile: &P,
    start: &ChartPoint,
    duration: f64,
    h: f64,
    rho_max: f64,
) -> Result<ConvergenceReport, FlowError> {
    let end =
        |step: f64| integrate_in(profile, start, duration, step, rho_max).map(|t| t.endpoint());
    let reference = end(h / 16.0)?;
    let error_h = neck_distance(&end(h)?, &reference)?;
    let error_half = neck_distance(&end(h / 2.0)?, &reference)?;
    Ok(ConvergenceReport {
        error_h,
        error_half,
        ratio: error_h / error_half,
    })
}

/// Outcome of [`uniqueness_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub tested: usize,
    /// Indices of starts that came back within the tolerance.
    pub returned: Vec<usize>,
    /// Starts whose trajectory left the modeled region (counted as not returning).
    pub left_region: usize,
    /// Smallest distance to the start seen after half a period, over all starts.
    pub min_distance: f64,
}

/// Integrates each start for `duration` and records whether it comes back within
/// `tol` of itself at any time after `min_time`.
pub fn uniqueness_probe<P: RadialProfile + ?Sized>(
    profile: &P,
    starts: &[ChartPoint],
    duration: f64,
    min_time: f64,
    h: f64,
    tol: f64,
    rho_max: f64,
) -> Result<ProbeReport, FlowError> {
    let mut report = ProbeReport {
        tested: starts.len(),
        returned: Vec::new(),
        left_region: 0,
        min_distance: f64::INFINITY,
    };
    for (i, start) in starts.iter().enumerate() {
        let mut flow = Flow::new(profile, start, rho_max)?;
        while flow.time() < duration {
            match flow.step(h) {
                Ok(_) => {}
                Err(FlowError::LeftRegion { .. }) => {
                    report.left_region += 1;
                    break;
                }
                Err(e) => return Err(e),
            }
            if flow.time() >= min_time {
                let d = neck_distance(&flow.point(), start)?;
                report.min_distance = report.min_distance.min(d);
                if d < tol {
                    report.returned.push(i);
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// Generator of the linearized flow of `period * X_f` in the frame `(v_1, v_2)`.
///
/// Column `j` holds the frame coordinates of `period (DX v_j - Dv_j X)`, read off
/// with `d lambda_f`, which is normalized to `d lambda_f(v_1, v_2) = 1`.
pub fn lie_generator<P: RadialProfile + ?Sized>(
    profile: &P,
    p: &ChartPoint,
    period: f64,
) -> Result<Mat2, FlowError> {
    let x = nalgebra::Vector3::from(reeb_field_closed_form(profile, p)?.components);
    let dx = reeb_field_jacobian_polar(profile, p)?;
    let (v1, v2) = symplectic_frame(profile, p)?;
    let dv = frame_derivatives(profile, p)?;
    let omega = radial_form_jet(profile, p)?.d_matrix();
    let (v1, v2) = (
        nalgebra::Vector3::from(v1.components),
        nalgebra::Vector3::from(v2.components),
    );
    let mut m = Mat2::zeros();
    for (j, (v, dvj)) in [(v1, dv.dv1), (v2, dv.dv2)].into_iter().enumerate() {
        let w = (dx * v - dvj * x) * period;
        m[(0, j)] = (w.transpose() * omega * v2)[(0, 0)];
        m[(1, j)] = (v1.transpose() * omega * w)[(0, 0)];
    }
    Ok(m)
}

/// `gamma_0(t) = (0, pi/2, 2 pi t)`.
pub fn equatorial_point(t: f64) -> ChartPoint {
    ChartPoint::polar(0.0, FRAC_PI_2, TAU * t).expect("equator lies in the polar chart")
}

/// `[[0, -2 pi f(0)], [-pi f''(0) / (4 f(0)^2), 0]]`.
pub fn equatorial_generator_closed_form<P: RadialProfile + ?Sized>(profile: &P) -> Mat2 {
    let [f, _, ddf] = profile.jet(0.0);
    Mat2::new(0.0, -TAU * f, -PI * ddf / (4.0 * f * f), 0.0)
}

/// `C diag(e^{AB}, e^{-AB}) C^{-1}` with `A = sqrt(2 pi f(0))`,
/// `B = sqrt(pi f''(0)) / (2 f(0))` and `C = 2^{-1/2} [[A/B, 1], [-1, B/A]]`.
pub fn equatorial_floquet_closed_form<P: RadialProfile + ?Sized>(profile: &P) -> Mat2 {
    let [f, _, ddf] = profile.jet(0.0);
    let a = (TAU * f).sqrt();
    let b = (PI * ddf).sqrt() / (2.0 * f);
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let c = Mat2::new(r * a / b, r, -r, r * b / a);
    let c_inv = Mat2::new(r * b / a, -r, r, r * a / b);
    let e = (a * b).exp();
    c * Mat2::new(e, 0.0, 0.0, 1.0 / e) * c_inv
}

/// Certified periodic orbit together with its linearized return map.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbitRecord {
    /// Period in action units.
    pub period: f64,
    /// `int_0^1 gamma^* lambda_f`, from the parametrization.
    pub action: f64,
    /// Largest `|gamma'(t) - T X_f(gamma(t))|` over the samples.
    pub residual: f64,
    /// Orbit points at `t = k / ORBIT_SAMPLES`.
    pub samples: Vec<ChartPoint>,
    pub frame: Vec<(TangentVector, TangentVector)>,
    /// Generator at the sample points.
    pub generator: Vec<Mat2>,
    /// Largest entrywise deviation of the sampled generator from its value at `t = 0`.
    pub generator_spread: f64,
    /// Linearized flow on `[0, 1]`.
    pub path: SymplecticPath,
    pub floquet: SymplecticMatrix,
    pub classification: PathEndpointClass,
    pub cz_index: i64,
}

/// The orbit `gamma_0` of period `f(0) pi` on the equator of the neck.
pub fn equatorial_orbit<P: RadialProfile + ?Sized>(
    profile: &P,
) -> Result<PeriodicOrbitRecord, FlowError> {
    equatorial_orbit_with_steps(profile, DEFAULT_ORBIT_STEPS)
}

pub fn equatorial_orbit_with_steps<P: RadialProfile + ?Sized>(
    profile: &P,
    steps: usize,
) -> Result<PeriodicOrbitRecord, FlowError> {
    let [f0, _, f2] = profile.jet(0.0);
    if !(f0 > 0.0 && f2 > 0.0 && f0.is_finite() && f2.is_finite()) {
        return Err(FlowError::InvalidProfile { f0, f2 });
    }
    let period = f0 * PI;
    let mut samples = Vec::with_capacity(ORBIT_SAMPLES);
    let mut frame = Vec::with_capacity(ORBIT_SAMPLES);
    let mut generator = Vec::with_capacity(ORBIT_SAMPLES);
    let mut residual: f64 = 0.0;
    let mut action = 0.0;
    for k in 0..ORBIT_SAMPLES {
        let p = equatorial_point(k as f64 / ORBIT_SAMPLES as f64);
        let velocity = [0.0, 0.0, TAU];
        let x = reeb_field_closed_form(profile, &p)?.components;
        residual = residual.max(
            (0..3)
                .map(|i| (velocity[i] - period * x[i]).abs())
                .fold(0.0, f64::max),
        );
        action += radial_form_jet(profile, &p)?.eval(&velocity) / ORBIT_SAMPLES as f64;
        samples.push(p);
        frame.push(symplectic_frame(profile, &p)?);
        generator.push(lie_generator(profile, &p, period)?);
    }
    if residual > ORBIT_RESIDUAL_TOL {
        return Err(FlowError::OrbitResidual(residual));
    }
    let generator_spread = generator
        .iter()
        .map(|m| (m - generator[0]).amax())
        .fold(0.0, f64::max);
    let path = evolve_linear_system(
        |t| {
            lie_generator(profile, &equatorial_point(t), period)
                .unwrap_or_else(|_| Mat2::from_element(f64::NAN))
        },
        steps,
    )?;
    let floquet = SymplecticMatrix::new(path.endpoint())?;
    let classification = classify_endpoint(&floquet);
    let mut record = PeriodicOrbitRecord {
        period,
        action,
        residual,
        samples,
        frame,
        generator,
        generator_spread,
        path,
        floquet,
        classification,
        cz_index: 0,
    };
    orbit_cz(&mut record)?;
    Ok(record)
}

/// Conley-Zehnder index of the record's linearized flow; stored in the record.
pub fn orbit_cz(record: &mut PeriodicOrbitRecord) -> Result<i64, FlowError> {
    let cz = conley_zehnder(&record.path)?;
    let kind = record.classification.kind;
    let consistent = match kind {
        EndpointKind::HyperbolicEven => cz % 2 == 0,
        EndpointKind::HyperbolicOdd | EndpointKind::Elliptic => cz % 2 != 0,
        EndpointKind::Degenerate => false,
    };
    if !consistent {
        return Err(FlowError::ParityMismatch {
            cz,
            kind: kind.as_str(),
        });
    }
    record.cz_index = cz;
    Ok(cz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact_models::{neck_profile, QuadraticProfile};

    #[test]
    fn generator_is_the_closed_form() {
        let prof = QuadraticProfile { f0: 1.0, f2: 4.0 };
        let m = lie_generator(&prof, &equatorial_point(0.3), PI).unwrap();
        assert!((m - equatorial_generator_closed_form(&prof)).amax() < 1e-12);
    }

    #[test]
    fn closed_form_floquet_is_exp() {
        let prof = neck_profile(1.0).unwrap();
        let m = equatorial_generator_closed_form(&prof);
        let ab = (-m[(0, 1)] * -m[(1, 0)]).sqrt();
        let expected = Mat2::identity() * ab.cosh() + m * (ab.sinh() / ab);
        let got = equatorial_floquet_closed_form(&prof);
        assert!((got - expected).amax() <= 1e-9 * expected.amax());
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| x * x * x - 2.0 * x;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let (a, h) = (0.3, 0.5);
        let v = hermite(f(a), f(a + h), df(a), df(a + h), h, 0.4);
        assert!((v - f(a + 0.2)).abs() < 1e-14);
    }
}
