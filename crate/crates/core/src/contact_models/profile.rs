use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::ContactError;

/// A radial profile `f(rho) > 0` together with its first two derivatives.
pub trait RadialProfile {
    /// `[f, f', f'']` at `rho`.
    fn jet(&self, rho: f64) -> [f64; 3];

    fn f(&self, rho: f64) -> f64 {
        self.jet(rho)[0]
    }

    fn df(&self, rho: f64) -> f64 {
        self.jet(rho)[1]
    }

    fn d2f(&self, rho: f64) -> f64 {
        self.jet(rho)[2]
    }

    /// Short identifier used in exported data.
    fn label(&self) -> String {
        String::from("radial")
    }
}

const GRID: usize = 10_000;

/// Degree-7 smoothstep in `|x|`: 0 for `|x| <= eps/2`, 1 for `|x| >= eps`.
/// Returns `[beta, beta', beta'']` as functions of `x`.
fn bump(eps: f64, x: f64) -> [f64; 3] {
    let ax = x.abs();
    let half = 0.5 * eps;
    if ax <= half {
        return [0.0, 0.0, 0.0];
    }
    if ax >= eps {
        return [1.0, 0.0, 0.0];
    }
    let s = (ax - half) / half;
    let s2 = s * s;
    let s3 = s2 * s;
    let value = s3 * s * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
    let ds = 140.0 * s3 * (1.0 - s) * (1.0 - s) * (1.0 - s);
    let dds = 420.0 * s2 * (1.0 - s) * (1.0 - s) * (1.0 - 2.0 * s);
    let k = 1.0 / half;
    [value, x.signum() * ds * k, dds * k * k]
}

/// Grid maximum of `beta'(x) / x` over `[eps/2, eps]`.
fn bump_ratio_max(eps: f64) -> f64 {
    let half = 0.5 * eps;
    (0..=GRID)
        .map(|i| {
            let x = half + half * i as f64 / GRID as f64;
            bump(eps, x)[1] / x
        })
        .fold(0.0, f64::max)
}

/// The neck profile `f_eps = 1/2 (beta + 1) x^2 + (1 - beta) c_eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NeckProfileParams", into = "NeckProfileParams")]
pub struct NeckProfile {
    epsilon: f64,
    c_eps: f64,
}

/// Serialized form of a [`NeckProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeckProfileParams {
    pub epsilon: f64,
    pub c_eps: f64,
}

/// Builds the neck profile for a given `epsilon`.
pub fn neck_profile(epsilon: f64) -> Result<NeckProfile, ContactError> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(ContactError::NonPositiveEpsilon(epsilon));
    }
    let c_eps = 1.0 / (2.0 * bump_ratio_max(epsilon));
    Ok(NeckProfile { epsilon, c_eps })
}

impl NeckProfile {
    /// Rebuilds a profile from stored parameters. Any plateau constant at or
    /// below the admissible bound is accepted.
    pub fn from_params(p: NeckProfileParams) -> Result<Self, ContactError> {
        let reference = neck_profile(p.epsilon)?;
        if p.c_eps.is_nan() || p.c_eps <= 0.0 || p.c_eps > reference.c_eps * (1.0 + 1e-12) {
            return Err(ContactError::BadPlateau(p.c_eps));
        }
        Ok(Self {
            epsilon: p.epsilon,
            c_eps: p.c_eps,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn c_eps(&self) -> f64 {
        self.c_eps
    }

    pub fn params(&self) -> NeckProfileParams {
        NeckProfileParams {
            epsilon: self.epsilon,
            c_eps: self.c_eps,
        }
    }

    /// `[beta, beta', beta'']` at `x`.
    pub fn beta(&self, x: f64) -> [f64; 3] {
        bump(self.epsilon, x)
    }
}

impl TryFrom<NeckProfileParams> for NeckProfile {
    type Error = ContactError;

    fn try_from(p: NeckProfileParams) -> Result<Self, Self::Error> {
        Self::from_params(p)
    }
}

impl From<NeckProfile> for NeckProfileParams {
    fn from(p: NeckProfile) -> Self {
        p.params()
    }
}

impl RadialProfile for NeckProfile {
    fn label(&self) -> String {
        format!("neck(epsilon={})", self.epsilon)
    }

    fn jet(&self, x: f64) -> [f64; 3] {
        if x.abs() >= self.epsilon {
            return [x * x, 2.0 * x, 2.0];
        }
        let [b, db, ddb] = self.beta(x);
        let c = self.c_eps;
        let x2 = x * x;
        [
            0.5 * (b + 1.0) * x2 + (1.0 - b) * c,
            0.5 * db * x2 + (b + 1.0) * x - db * c,
            0.5 * ddb * x2 + 2.0 * db * x + (b + 1.0) - ddb * c,
        ]
    }
}

/// `f(rho) = f0 + 1/2 f2 rho^2`, a model profile with prescribed `f(0)` and `f''(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticProfile {
    pub f0: f64,
    pub f2: f64,
}

impl RadialProfile for QuadraticProfile {
    fn label(&self) -> String {
        format!("quadratic(f0={},f2={})", self.f0, self.f2)
    }

    fn jet(&self, rho: f64) -> [f64; 3] {
        [self.f0 + 0.5 * self.f2 * rho * rho, self.f2 * rho, self.f2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_derivatives_match_differences() {
        let eps = 0.7;
        for i in 1..40 {
            let x = 0.35 + 0.35 * i as f64 / 40.0;
            let h = 1e-6;
            let fd = (bump(eps, x + h)[0] - bump(eps, x - h)[0]) / (2.0 * h);
            let fdd = (bump(eps, x + h)[1] - bump(eps, x - h)[1]) / (2.0 * h);
            assert!((fd - bump(eps, x)[1]).abs() < 1e-6);
            assert!((fdd - bump(eps, x)[2]).abs() < 1e-4);
            assert!((bump(eps, -x)[1] + bump(eps, x)[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn bump_is_monotone() {
        let eps = 1.3;
        let mut prev = 0.0;
        for i in 0..=1000 {
            let b = bump(eps, 1.3 * i as f64 / 1000.0)[0];
            assert!(b >= prev);
            prev = b;
        }
        assert_eq!(prev, 1.0);
    }

    #[test]
    fn params_roundtrip_rejects_large_plateau() {
        let p = neck_profile(0.5).unwrap();
        assert_eq!(NeckProfile::from_params(p.params()).unwrap(), p);
        let mut bad = p.params();
        bad.c_eps *= 1.01;
        assert!(NeckProfile::from_params(bad).is_err());
    }
}
