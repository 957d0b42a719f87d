//! Helpers shared by the integration suites.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use mubot::dynamics::GeneralizedState;
use mubot::morphology::RobotModel;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature with a forced minimum depth so that kinks
/// inside a coarse panel cannot pass the error test by accident.
pub fn simpson_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        let err = left + right - whole;
        if depth > 54 || (depth >= 6 && err.abs() <= 15.0 * tol) {
            return left + right + err / 15.0;
        }
        adapt(f, a, m, left, 0.5 * tol, depth + 1) + adapt(f, m, b, right, 0.5 * tol, depth + 1)
    }
    adapt(f, a, b, simpson(f, a, b), tol, 0)
}

/// [`simpson_adaptive`] over `[a, b]` split at the interior `breaks`, so
/// that each piece is smooth.
pub fn simpson_pieces(f: &dyn Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let mut knots = vec![a];
    knots.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    knots.push(b);
    knots
        .windows(2)
        .map(|w| simpson_adaptive(f, w[0], w[1], tol * (w[1] - w[0]) / (b - a)))
        .sum()
}

/// Zero of `v0 + omega x`, if any.
pub fn velocity_zero(v0: f64, omega: f64) -> Vec<f64> {
    if omega == 0.0 {
        Vec::new()
    } else {
        vec![-v0 / omega]
    }
}

/// Derivative at `t` by Richardson-extrapolated central differences.
pub fn derivative(f: &dyn Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}

/// `|a - b| <= tol * max(|b|, scale)`.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(scale)
}

/// Relative error with a floor for quantities that may vanish.
pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale)
}

/// Random state with small joint angles and moderate rates.
pub fn random_state(model: &RobotModel, rng: &mut ChaCha8Rng) -> GeneralizedState {
    let n = model.dof();
    let q: Vec<f64> = (0..n)
        .map(|i| match i {
            0 | 1 => rng.gen_range(-0.05..0.05),
            2 => rng.gen_range(-3.0..3.0),
            _ => rng.gen_range(-1.2..1.2),
        })
        .collect();
    let qd: Vec<f64> = (0..n)
        .map(|i| {
            if i < 2 {
                rng.gen_range(-0.2..0.2)
            } else {
                rng.gen_range(-8.0..8.0)
            }
        })
        .collect();
    GeneralizedState::new(q, qd, 0.0)
}

pub mod criteria;

#[path = "../oracle/lagrangian_noa1.rs"]
pub mod lagrangian;
