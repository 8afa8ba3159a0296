//! Spectra of operators `-J0 d/dt - S(t)` on loops in the plane.
//!
//! The operator is discretized by Galerkin projection onto the rotating
//! frame `phi_{k,a}(t) = R(2 pi k t) e_a`, `|k| <= N/4`, where
//! `-J0 d/dt phi_{k,a} = 2 pi k phi_{k,a}` exactly. The matrix is real
//! symmetric, and the Fourier coefficients of `S` are taken from its `N`
//! samples. Decoupled blocks are solved separately, which keeps constant
//! operators with very large `|S|` cheap.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)] // only needed when core lacks float math
use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use crate::contact_models::RadialProfile;
use crate::sp_paths::{lift_angles, Mat2, PathError};

pub const MIN_RESOLUTION: usize = 64;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const CONTINUITY_TOL: f64 = 1e-9;
/// Relative clustering tolerance for multiplicities.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Smallest admissible `|lambda|` for a nondegenerate operator.
pub const SPECTRAL_GAP_TOL: f64 = 1e-8;
pub const MIN_LOOP_NORM: f64 = 1e-10;
pub const WINDING_RESIDUAL_TOL: f64 = 0.1;
/// Default spectral window `[-4 pi, 4 pi]`.
pub const DEFAULT_WINDOW: (f64, f64) = (-4.0 * PI, 4.0 * PI);
/// Matrix entries below this multiple of `1 + |S|` are treated as zero when splitting blocks.
const DROP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    #[error("resolution must be even and at least {MIN_RESOLUTION}, got {0}")]
    BadResolution(usize),
    #[error("S(t) is not symmetric at sample {index} (residual {residual})")]
    NotSymmetric { index: usize, residual: f64 },
    #[error("S is not periodic: |S(1) - S(0)| = {0}")]
    Discontinuous(f64),
    #[error("non-finite coefficient in S")]
    NonFinite,
    #[error("resolution {n} too low: need 2 pi N / 4 > {bound}")]
    Aliasing { n: usize, bound: f64 },
    #[error("window [{0}, {1}] is not a finite interval")]
    BadWindow(f64, f64),
    #[error("assembled matrix is not symmetric (residual {0})")]
    AsymmetricMatrix(f64),
    #[error("eigenloop vanishes (min norm {0})")]
    VanishingLoop(f64),
    #[error("eigenloop is under-resolved")]
    UnderResolved,
    #[error("winding residual {0} exceeds tolerance")]
    WindingResidual(f64),
    #[error("0 is within {0} of the spectrum")]
    Degenerate(f64),
    #[error("no {0} eigenvalue in the resolved spectrum")]
    MissingSide(&'static str),
    #[error("operator belongs to an odd orbit")]
    OddOrbit,
}

impl From<PathError> for AsymError {
    fn from(_: PathError) -> Self {
        AsymError::UnderResolved
    }
}

/// `-J0 d/dt - S(t)` with `S` sampled at `t_j = j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivializedAsymptoticOperator {
    samples: Vec<Mat2>,
    constant: bool,
}

fn check_symmetric(index: usize, s: &Mat2) -> Result<(), AsymError> {
    if s.iter().any(|v| !v.is_finite()) {
        return Err(AsymError::NonFinite);
    }
    let residual = (s[(0, 1)] - s[(1, 0)]).abs();
    if residual > SYMMETRY_TOL {
        return Err(AsymError::NotSymmetric { index, residual });
    }
    Ok(())
}

fn check_resolution(n: usize) -> Result<(), AsymError> {
    if n < MIN_RESOLUTION || n % 2 != 0 {
        return Err(AsymError::BadResolution(n));
    }
    Ok(())
}

impl TrivializedAsymptoticOperator {
    pub fn constant(s: Mat2, n: usize) -> Result<Self, AsymError> {
        check_resolution(n)?;
        check_symmetric(0, &s)?;
        Ok(Self {
            samples: vec![s; n],
            constant: true,
        })
    }

    /// Samples a 1-periodic `S` at `N` points.
    pub fn from_fn(s: impl Fn(f64) -> Mat2, n: usize) -> Result<Self, AsymError> {
        check_resolution(n)?;
        let jump = (s(1.0) - s(0.0)).amax();
        if jump > CONTINUITY_TOL {
            return Err(AsymError::Discontinuous(jump));
        }
        let samples: Vec<Mat2> = (0..n).map(|j| s(j as f64 / n as f64)).collect();
        for (i, m) in samples.iter().enumerate() {
            check_symmetric(i, m)?;
        }
        Ok(Self {
            samples,
            constant: false,
        })
    }

    /// Uses the given samples at `t_j = j / N` directly.
    pub fn from_samples(samples: Vec<Mat2>) -> Result<Self, AsymError> {
        check_resolution(samples.len())?;
        for (i, m) in samples.iter().enumerate() {
            check_symmetric(i, m)?;
        }
        let constant = samples.iter().all(|m| *m == samples[0]);
        Ok(Self { samples, constant })
    }

    pub fn resolution(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Mat2] {
        &self.samples
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// `max_t |S(t)|` in the operator norm.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(sym_norm).fold(0.0, f64::max)
    }

    /// Highest Fourier mode of the Galerkin basis.
    pub fn max_mode(&self) -> i64 {
        (self.samples.len() / 4) as i64
    }
}

fn sym_norm(s: &Mat2) -> f64 {
    let (a, b, c) = (s[(0, 0)], 0.5 * (s[(0, 1)] + s[(1, 0)]), s[(1, 1)]);
    0.5 * (a + c).abs() + (0.25 * (a - c) * (a - c) + b * b).sqrt()
}

/// Smallest admissible resolution (a multiple of 4) with `2 pi N / 4 > bound`.
pub fn required_resolution(bound: f64) -> usize {
    let k = (bound / TAU).floor() as usize + 1;
    (4 * k).max(MIN_RESOLUTION)
}

fn aliasing_bound(op: &TrivializedAsymptoticOperator, lambda: f64) -> Result<(), AsymError> {
    let bound = lambda.abs() + op.sup_norm();
    if TAU * op.max_mode() as f64 <= bound {
        return Err(AsymError::Aliasing {
            n: op.resolution(),
            bound,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// `cos, sin` of `2 pi m / n` for `m in 0..n`.
fn twiddles(n: usize) -> Vec<C64> {
    (0..n)
        .map(|m| {
            let (s, c) = (TAU * m as f64 / n as f64).sin_cos();
            C64::new(c, s)
        })
        .collect()
}

/// `(1/N) sum_j g_j e^{2 pi i n j / N}` for `n in -2K..=2K`, stored at `n + 2K`.
fn fourier(values: &[C64], tw: &[C64], k_max: i64) -> Vec<C64> {
    let n = values.len() as i64;
    (-2 * k_max..=2 * k_max)
        .map(|freq| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, g) in values.iter().enumerate() {
                let w = tw[(freq * j as i64).rem_euclid(n) as usize];
                let p = g.mul(w);
                acc.re += p.re;
                acc.im += p.im;
            }
            C64::new(acc.re / n as f64, acc.im / n as f64)
        })
        .collect()
}

/// An eigenpair of the Galerkin matrix with its eigenvector stored on its block.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// `(basis index, coefficient)`; basis index `2 (k + K) + a`.
    pub support: Vec<(usize, f64)>,
}

fn basis_mode(index: usize, k_max: i64) -> (i64, usize) {
    ((index / 2) as i64 - k_max, index % 2)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// All eigenpairs of the Galerkin matrix, sorted by eigenvalue.
pub fn eigenpairs(op: &TrivializedAsymptoticOperator) -> Result<Vec<Eigenpair>, AsymError> {
    let k_max = op.max_mode();
    let n = op.resolution();
    let size = 2 * (2 * k_max as usize + 1);
    let span = (4 * k_max + 1) as usize;
    // S z = s0 z + q conj(z) in complex notation
    let (f_s0, f_q) = if op.constant {
        let s = op.samples[0];
        let mut f_s0 = vec![C64::new(0.0, 0.0); span];
        let mut f_q = vec![C64::new(0.0, 0.0); span];
        f_s0[2 * k_max as usize] = C64::new(0.5 * (s[(0, 0)] + s[(1, 1)]), 0.0);
        f_q[2 * k_max as usize] = C64::new(0.5 * (s[(0, 0)] - s[(1, 1)]), s[(0, 1)]);
        (f_s0, f_q)
    } else {
        let tw = twiddles(n);
        let s0: Vec<C64> = op
            .samples
            .iter()
            .map(|s| C64::new(0.5 * (s[(0, 0)] + s[(1, 1)]), 0.0))
            .collect();
        let q: Vec<C64> = op
            .samples
            .iter()
            .map(|s| C64::new(0.5 * (s[(0, 0)] - s[(1, 1)]), s[(0, 1)]))
            .collect();
        (fourier(&s0, &tw, k_max), fourier(&q, &tw, k_max))
    };
    let at = |v: &[C64], freq: i64| v[(freq + 2 * k_max) as usize];
    // conj(c_a) c_b and conj(c_a) conj(c_b) for c_0 = 1, c_1 = i
    const CC: [[C64; 2]; 2] = [
        [C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        [C64::new(0.0, -1.0), C64::new(1.0, 0.0)],
    ];
    const CCBAR: [[C64; 2]; 2] = [
        [C64::new(1.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, -1.0), C64::new(-1.0, 0.0)],
    ];
    let entry = |i: usize, j: usize| {
        let (k, a) = basis_mode(i, k_max);
        let (l, b) = basis_mode(j, k_max);
        let mut v = -(CC[a][b].mul(at(&f_s0, l - k)).re + CCBAR[a][b].mul(at(&f_q, -(l + k))).re);
        if i == j {
            v += TAU * k as f64;
        }
        v
    };

    // only Fourier modes of S above the noise floor couple basis functions
    let drop = DROP_TOL * (1.0 + op.sup_norm());
    let live = |v: &[C64]| -> Vec<i64> {
        (-2 * k_max..=2 * k_max)
            .filter(|&n| at(v, n).re.abs().max(at(v, n).im.abs()) > drop)
            .collect()
    };
    let (live_s0, live_q) = (live(&f_s0), live(&f_q));
    let mut parent: Vec<usize> = (0..size).collect();
    let mut entries = Vec::new();
    let mut max_asym: f64 = 0.0;
    let mut partners = Vec::new();
    for i in 0..size {
        let (k, _) = basis_mode(i, k_max);
        partners.clear();
        // entry (k, l) sees F[s0](l - k) and F[q](-(l + k))
        partners.extend(live_s0.iter().map(|n| k + n));
        partners.extend(live_q.iter().map(|m| -k - m));
        partners.push(k);
        partners.retain(|l| l.abs() <= k_max);
        partners.sort_unstable();
        partners.dedup();
        for &l in &partners {
            for b in 0..2 {
                let j = 2 * (l + k_max) as usize + b;
                if j < i {
                    continue;
                }
                let v = entry(i, j);
                if i != j {
                    max_asym = max_asym.max((v - entry(j, i)).abs());
                }
                if i == j || v.abs() > drop {
                    entries.push((i, j, v));
                    if i != j {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
    }
    if max_asym > SYMMETRY_TOL * (1.0 + op.sup_norm()) {
        return Err(AsymError::AsymmetricMatrix(max_asym));
    }

    let roots: Vec<usize> = (0..size).map(|i| find(&mut parent, i)).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (i, r) in roots.iter().enumerate() {
        members[*r].push(i);
    }
    let mut local = vec![0usize; size];
    let mut blocks: Vec<DMatrix<f64>> = members
        .iter()
        .map(|m| DMatrix::zeros(m.len(), m.len()))
        .collect();
    for m in &members {
        for (pos, &i) in m.iter().enumerate() {
            local[i] = pos;
        }
    }
    for &(i, j, v) in &entries {
        let r = roots[i];
        let (li, lj) = (local[i], local[j]);
        blocks[r][(li, lj)] = v;
        blocks[r][(lj, li)] = v;
    }

    let mut out = Vec::with_capacity(size);
    for (r, m) in members.iter().enumerate() {
        if m.is_empty() {
            continue;
        }
        let eig = SymmetricEigen::new(blocks[r].clone());
        for c in 0..m.len() {
            let support = m
                .iter()
                .enumerate()
                .map(|(pos, &i)| (i, eig.eigenvectors[(pos, c)]))
                .collect();
            out.push(Eigenpair {
                value: eig.eigenvalues[c],
                support,
            });
        }
    }
    out.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.support[0].0.cmp(&b.support[0].0))
    });
    Ok(out)
}

/// Eigenfunction `sum x_{k,a} c_a e^{2 pi i k t}` sampled at `samples` points.
pub fn eigenloop(pair: &Eigenpair, k_max: i64, samples: usize) -> Vec<[f64; 2]> {
    let tw = twiddles(samples);
    let m = samples as i64;
    (0..samples)
        .map(|j| {
            let mut z = [0.0, 0.0];
            for &(i, x) in &pair.support {
                let (k, a) = basis_mode(i, k_max);
                let w = tw[(k * j as i64).rem_euclid(m) as usize];
                // c_0 = 1, c_1 = i
                let (re, im) = if a == 0 { (w.re, w.im) } else { (-w.im, w.re) };
                z[0] += x * re;
                z[1] += x * im;
            }
            z
        })
        .collect()
}

/// Winding number of a closed, sampled, nonvanishing loop in the plane.
pub fn eigenloop_winding(lp: &[[f64; 2]]) -> Result<i64, AsymError> {
    let min_norm = lp
        .iter()
        .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
        .fold(f64::INFINITY, f64::min);
    if min_norm.is_nan() || min_norm <= MIN_LOOP_NORM {
        return Err(AsymError::VanishingLoop(min_norm));
    }
    let mut raw: Vec<f64> = lp.iter().map(|v| v[1].atan2(v[0])).collect();
    raw.push(raw[0]);
    let lifted = lift_angles(&raw)?;
    let turns = (lifted[lifted.len() - 1] - lifted[0]) / TAU;
    let r = turns.round();
    if (turns - r).abs() > WINDING_RESIDUAL_TOL {
        return Err(AsymError::WindingResidual((turns - r).abs()));
    }
    Ok(r as i64)
}

fn pair_winding(pair: &Eigenpair, k_max: i64) -> Result<(i64, Vec<[f64; 2]>), AsymError> {
    let top = pair
        .support
        .iter()
        .map(|&(i, _)| basis_mode(i, k_max).0.unsigned_abs())
        .max()
        .unwrap_or(0) as usize;
    let first = (32 * top).max(256);
    let mut samples = first;
    loop {
        let lp = eigenloop(pair, k_max, samples);
        match eigenloop_winding(&lp) {
            Err(AsymError::UnderResolved) if samples < 64 * first => samples *= 2,
            other => return other.map(|w| (w, lp)),
        }
    }
}

/// One eigenvalue cluster of the operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSlice {
    pub eigenvalue: f64,
    pub winding: i64,
    pub multiplicity: usize,
    /// Spread of the clustered eigenvalues.
    pub diameter: f64,
    /// Eigenfunction of the first clustered eigenvalue, sampled on `[0, 1)`.
    #[serde(skip)]
    pub eigenloop: Vec<[f64; 2]>,
}

fn clusters(pairs: &[Eigenpair]) -> Vec<core::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=pairs.len() {
        let split = i == pairs.len() || {
            let a = pairs[start].value;
            pairs[i].value - a > CLUSTER_TOL * (1.0 + a.abs())
        };
        if split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Splits a cluster of numerically equal eigenvalues into runs of equal
/// winding. A genuine eigenspace has a single winding, so eigenvalues that
/// only look equal at the clustering tolerance are separated here.
fn slices_of(
    op: &TrivializedAsymptoticOperator,
    pairs: &[Eigenpair],
) -> Result<Vec<SpectrumSlice>, AsymError> {
    let k_max = op.max_mode();
    let mut out: Vec<(SpectrumSlice, f64)> = Vec::new();
    for p in pairs {
        let (winding, eigenloop) = pair_winding(p, k_max)?;
        match out.last_mut() {
            Some((slice, lo)) if slice.winding == winding => {
                let m = slice.multiplicity as f64;
                slice.eigenvalue = (slice.eigenvalue * m + p.value) / (m + 1.0);
                slice.multiplicity += 1;
                slice.diameter = p.value - *lo;
            }
            _ => out.push((
                SpectrumSlice {
                    eigenvalue: p.value,
                    winding,
                    multiplicity: 1,
                    diameter: 0.0,
                    eigenloop,
                },
                p.value,
            )),
        }
    }
    Ok(out.into_iter().map(|(s, _)| s).collect())
}

/// Eigenvalue clusters in `window` with their windings.
pub fn spectrum(
    op: &TrivializedAsymptoticOperator,
    window: (f64, f64),
) -> Result<Vec<SpectrumSlice>, AsymError> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(AsymError::BadWindow(lo, hi));
    }
    aliasing_bound(op, lo.abs().max(hi.abs()))?;
    let pairs = eigenpairs(op)?;
    clusters(&pairs)
        .into_iter()
        .filter(|r| {
            let v = pairs[r.start].value;
            v >= lo && v <= hi
        })
        .map(|r| slices_of(op, &pairs[r]))
        .collect::<Result<Vec<_>, _>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// Clusters adjacent to zero: `(largest negative, smallest positive)`.
fn extremal_slices(
    op: &TrivializedAsymptoticOperator,
) -> Result<(SpectrumSlice, SpectrumSlice), AsymError> {
    let pairs = eigenpairs(op)?;
    let gap = pairs
        .iter()
        .map(|p| p.value.abs())
        .fold(f64::INFINITY, f64::min);
    if gap <= SPECTRAL_GAP_TOL {
        return Err(AsymError::Degenerate(gap));
    }
    let groups = clusters(&pairs);
    let neg = groups
        .iter()
        .rev()
        .find(|r| pairs[r.start].value < 0.0)
        .ok_or(AsymError::MissingSide("negative"))?;
    let pos = groups
        .iter()
        .find(|r| pairs[r.start].value > 0.0)
        .ok_or(AsymError::MissingSide("positive"))?;
    aliasing_bound(
        op,
        pairs[neg.start]
            .value
            .abs()
            .max(pairs[pos.end - 1].value.abs()),
    )?;
    let neg = slices_of(op, &pairs[neg.clone()])?
        .pop()
        .expect("clusters are nonempty");
    let pos = slices_of(op, &pairs[pos.clone()])?.swap_remove(0);
    Ok((neg, pos))
}

/// Spectral Conley-Zehnder data `(alpha, parity, mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectralCz {
    pub alpha: i64,
    pub parity: i64,
    pub mu: i64,
}

/// `alpha` is the winding at the largest negative eigenvalue; `parity` is 0
/// when some positive eigenvalue has the same winding, and `mu = 2 alpha + parity`.
///
/// By monotonicity of the winding only the smallest positive cluster needs to
/// be inspected.
pub fn spectral_cz(op: &TrivializedAsymptoticOperator) -> Result<SpectralCz, AsymError> {
    let (neg, pos) = extremal_slices(op)?;
    let alpha = neg.winding;
    let parity = if pos.winding == alpha { 0 } else { 1 };
    Ok(SpectralCz {
        alpha,
        parity,
        mu: 2 * alpha + parity,
    })
}

/// Multiplicities of the eigenvalues adjacent to zero, for an even orbit.
pub fn extremal_eigenspace_dims(
    op: &TrivializedAsymptoticOperator,
) -> Result<(usize, usize), AsymError> {
    let (neg, pos) = extremal_slices(op)?;
    if neg.winding != pos.winding {
        return Err(AsymError::OddOrbit);
    }
    Ok((neg.multiplicity, pos.multiplicity))
}

/// Largest eigenvalue shift within `window` between resolutions `N` and `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceFit {
    pub n: usize,
    pub max_shift: f64,
    /// `max_shift * N^2`.
    pub constant: f64,
}

/// Compares windowed spectra of `build(n)` and `build(2n)`.
pub fn resolution_convergence(
    build: impl Fn(usize) -> Result<TrivializedAsymptoticOperator, AsymError>,
    n: usize,
    window: (f64, f64),
) -> Result<ConvergenceFit, AsymError> {
    let values = |op: &TrivializedAsymptoticOperator| -> Result<Vec<f64>, AsymError> {
        aliasing_bound(op, window.0.abs().max(window.1.abs()))?;
        Ok(eigenpairs(op)?
            .into_iter()
            .map(|p| p.value)
            .filter(|v| *v >= window.0 && *v <= window.1)
            .collect())
    };
    let coarse = values(&build(n)?)?;
    let fine = values(&build(2 * n)?)?;
    let max_shift = coarse
        .iter()
        .map(|v| {
            fine.iter()
                .map(|w| (v - w).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(ConvergenceFit {
        n,
        max_shift,
        constant: max_shift * (n * n) as f64,
    })
}

/// The operator of the equatorial orbit, `S = diag(-B^2, A^2)` with
/// `A^2 = 2 pi f(0)` and `B^2 = pi f''(0) / (4 f(0)^2)`, so that `J0 S` is the
/// linearized-flow generator.
///
/// The resolution is raised above `min_n` until the aliasing bound holds for
/// eigenvalues up to `4 pi + |S|`.
pub fn equatorial_operator<P: RadialProfile + ?Sized>(
    profile: &P,
    min_n: usize,
) -> Result<TrivializedAsymptoticOperator, AsymError> {
    let [f, _, ddf] = profile.jet(0.0);
    let (a2, b2) = (TAU * f, PI * ddf / (4.0 * f * f));
    let s = Mat2::new(-b2, 0.0, 0.0, a2);
    let n = min_n.max(required_resolution(4.0 * PI + 2.0 * sym_norm(&s)));
    TrivializedAsymptoticOperator::constant(s, n + n % 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_operator_has_fourier_spectrum() {
        let op = TrivializedAsymptoticOperator::constant(Mat2::zeros(), 64).unwrap();
        let pairs = eigenpairs(&op).unwrap();
        assert_eq!(pairs.len(), 2 * 33);
        for (i, p) in pairs.iter().enumerate() {
            let k = (i / 2) as f64 - 16.0;
            assert!((p.value - TAU * k).abs() < 1e-12);
        }
    }

    #[test]
    fn required_resolution_satisfies_bound() {
        for b in [0.0, 1.0, 100.0, 3e4] {
            let n = required_resolution(b);
            assert!(TAU * (n / 4) as f64 > b);
            assert_eq!(n % 4, 0);
        }
    }

    #[test]
    fn dft_of_trig_term_is_exact() {
        let n = 64;
        let tw = twiddles(n);
        let vals: Vec<C64> = (0..n)
            .map(|j| C64::new((TAU * 3.0 * j as f64 / n as f64).cos(), 0.0))
            .collect();
        let f = fourier(&vals, &tw, 16);
        for (i, c) in f.iter().enumerate() {
            let freq = i as i64 - 32;
            let expected = if freq.abs() == 3 { 0.5 } else { 0.0 };
            assert!(
                (c.re - expected).abs() < 1e-14 && c.im.abs() < 1e-14,
                "{freq}"
            );
        }
    }
}
