#![allow(dead_code)]

pub mod ledger_grid;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_core::sp_paths::{j0, Mat2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric 2x2 loop `S0 + S1 cos(2 pi t) + S2 sin(2 pi t)`.
#[derive(Debug, Clone, Copy)]
pub struct TrigLoop {
    pub s0: [f64; 3],
    pub s1: [f64; 3],
    pub s2: [f64; 3],
}

fn sym(v: [f64; 3]) -> Mat2 {
    Mat2::new(v[0], v[1], v[1], v[2])
}

impl TrigLoop {
    pub fn constant(v: [f64; 3]) -> Self {
        Self {
            s0: v,
            s1: [0.0; 3],
            s2: [0.0; 3],
        }
    }

    pub fn random(r: &mut ChaCha8Rng, scale: f64, wobble: f64) -> Self {
        let mut draw = |s: f64| {
            [
                r.random_range(-s..s),
                r.random_range(-s..s),
                r.random_range(-s..s),
            ]
        };
        Self {
            s0: draw(scale),
            s1: draw(wobble),
            s2: draw(wobble),
        }
    }

    pub fn at(&self, t: f64) -> Mat2 {
        let (s, c) = (TAU * t).sin_cos();
        sym(self.s0) + sym(self.s1) * c + sym(self.s2) * s
    }

    pub fn generator(&self, t: f64) -> Mat2 {
        j0() * self.at(t)
    }
}

/// Conley-Zehnder index by the crossing form: half the signature at `t = 0`
/// plus the signs of the regular crossings of `det(Psi - I) = 0`.
///
/// Works for generic paths `Psi' = J0 S Psi` with rank-one crossings; it is an
/// independent oracle for the rotation-angle method.
pub fn crossing_form_cz(samples: &[Mat2], generator: impl Fn(f64) -> Mat2) -> i64 {
    let n = samples.len() - 1;
    let q0 = {
        let m = j0().transpose() * generator(0.0);
        (m + m.transpose()) * 0.5
    };
    let ev = q0.symmetric_eigenvalues();
    let mut twice = ev
        .iter()
        .map(|&l| if l > 0.0 { 1 } else { -1 })
        .sum::<i64>();
    let f = |m: &Mat2| 2.0 - m.trace();
    for k in 1..n {
        let (a, b) = (f(&samples[k]), f(&samples[k + 1]));
        if a == 0.0 || a.signum() == b.signum() {
            continue;
        }
        let j = if a.abs() < b.abs() { k } else { k + 1 };
        let d = samples[j] - Mat2::identity();
        let c1 = nalgebra::Vector2::new(-d[(0, 1)], d[(0, 0)]);
        let c2 = nalgebra::Vector2::new(d[(1, 1)], -d[(1, 0)]);
        let v = if c1.norm() > c2.norm() { c1 } else { c2 };
        let t = j as f64 / n as f64;
        let form = (j0() * v).dot(&(generator(t) * v));
        twice += 2 * if form > 0.0 { 1 } else { -1 };
    }
    twice / 2
}
