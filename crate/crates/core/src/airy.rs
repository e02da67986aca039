//! The Airy function `Ai` on `[-15, 15]`.
//!
//! Values come from Taylor series of the ODE `y'' = t y`, re-expanded at
//! intermediate points. Near the origin the series is seeded by `Ai(0)` and
//! `Ai'(0)`. For `t > 2` the recessive solution is seeded from the asymptotic
//! expansion at `max(t, 12)` and stepped back toward `t`, which keeps the
//! dominant `Bi` component from growing.

use crate::error::{Error, Result};

/// `3^{-2/3} / Γ(2/3)`
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// `-3^{-1/3} / Γ(1/3)`
pub const AIP0: f64 = -0.258_819_403_792_806_8;

pub const MAX_ARG: f64 = 15.0;
const STEP: f64 = 0.5;
const ASYMPTOTIC_FROM: f64 = 12.0;

/// Advance `(y, y')` of `y'' = t y` from `t0` to `t0 + h` by a converged Taylor series.
fn taylor_step(t0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // (k+2)(k+1) a_{k+2} = t0 a_k + a_{k-1}
    let (mut am1, mut a0, mut a1) = (0.0, y, yp);
    let (mut val, mut der) = (y + yp * h, yp);
    let mut hk = 1.0; // h^k
    let scale = y.abs() + yp.abs();
    for k in 0..400 {
        let kf = k as f64;
        let a2 = (t0 * a0 + am1) / ((kf + 2.0) * (kf + 1.0));
        // contributions of a_{k+2}
        let tv = a2 * hk * h * h;
        let td = a2 * (kf + 2.0) * hk * h;
        val += tv;
        der += td;
        hk *= h;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        if k > 4 && tv.abs().max(td.abs()) <= 1e-18 * scale && (a0 * hk).abs() <= 1e-18 * scale {
            break;
        }
    }
    (val, der)
}

fn asymptotic(t: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let (mut su, mut sv) = (1.0, 1.0);
    let mut u = 1.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zk *= -zeta;
        let term = u / zk;
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        su += term;
        sv += v / zk;
    }
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let t4 = t.powf(0.25);
    (pre / t4 * su, -pre * t4 * sv)
}

/// March `(y, y')` from `t0` to `t1` in steps of at most [`STEP`].
fn march(mut t0: f64, mut y: f64, mut yp: f64, t1: f64) -> (f64, f64) {
    let steps = ((t1 - t0).abs() / STEP).ceil() as usize;
    if steps == 0 {
        return (y, yp);
    }
    let h = (t1 - t0) / steps as f64;
    for _ in 0..steps {
        (y, yp) = taylor_step(t0, y, yp, h);
        t0 += h;
    }
    (y, yp)
}

/// `(Ai(t), Ai'(t))`.
pub fn airy_pair(t: f64) -> Result<(f64, f64)> {
    if !t.is_finite() || t.abs() > MAX_ARG {
        return Err(Error::OutOfRange(t));
    }
    Ok(if t.abs() <= 2.0 {
        taylor_step(0.0, AI0, AIP0, t)
    } else if t < 0.0 {
        march(0.0, AI0, AIP0, t)
    } else {
        let start = t.max(ASYMPTOTIC_FROM);
        let (y, yp) = asymptotic(start);
        march(start, y, yp, t)
    })
}

pub fn airy_ai(t: f64) -> Result<f64> {
    Ok(airy_pair(t)?.0)
}

/// `[Ai(t), Ai'(t), ..., Ai^{(m)}(t)]` via `y^{(k+2)} = t y^{(k)} + k y^{(k-1)}`.
pub fn airy_derivs(t: f64, m: usize) -> Result<Vec<f64>> {
    let (a, ap) = airy_pair(t)?;
    let mut d = vec![a, ap];
    for k in 0..m.saturating_sub(1) {
        let prev = if k >= 1 { k as f64 * d[k - 1] } else { 0.0 };
        d.push(t * d[k] + prev);
    }
    d.truncate(m + 1);
    Ok(d)
}
