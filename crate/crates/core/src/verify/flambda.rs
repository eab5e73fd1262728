use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const MEMBERSHIP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FLambdaPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub lambda: f64,
}

impl FLambdaPoint {
    /// `-y ≤ x ≤ λ`, `-λ ≤ 2y ≤ 0`, `x - λ ≤ z ≤ 0`, with a `1e-12` slack.
    pub fn in_domain(&self) -> bool {
        let s = MEMBERSHIP_SLACK;
        let FLambdaPoint { x, y, z, lambda } = *self;
        lambda >= 0.0
            && -y <= x + s
            && x <= lambda + s
            && -lambda <= 2.0 * y + s
            && y <= s
            && x - lambda <= z + s
            && z <= s
    }
}

/// `atan x + atan y + atan z - atan λ + atan(λ - x) - atan(y + z)`.
pub fn eval_f_lambda(p: &FLambdaPoint) -> Result<f64> {
    if !p.in_domain() {
        return Err(domain(format!("{p:?} outside the admissible set")));
    }
    Ok(f_lambda(p.x, p.y, p.z, p.lambda))
}

fn f_lambda(x: f64, y: f64, z: f64, lambda: f64) -> f64 {
    x.atan() + y.atan() + z.atan() - lambda.atan() + (lambda - x).atan() - (y + z).atan()
}

/// Minimum of `F_λ` over a grid of spacing `step` covering the admissible
/// set, and the point where it is attained.
pub fn grid_min_f_lambda(lambda: f64, step: f64) -> Result<(f64, FLambdaPoint)> {
    if !(lambda >= 0.0 && step > 0.0) {
        return Err(domain(format!("need λ >= 0 and step > 0 (λ = {lambda}, step = {step})")));
    }
    let idx = |v: f64| (v / step + 1e-9).floor() as i64;
    let mut best = (f64::INFINITY, FLambdaPoint { x: 0.0, y: 0.0, z: 0.0, lambda });
    // y ∈ [-λ/2, 0]
    for iy in -idx(lambda / 2.0)..=0 {
        let y = iy as f64 * step;
        // x ∈ [-y, λ]
        for ix in -iy..=idx(lambda) {
            let x = ix as f64 * step;
            // z ∈ [x - λ, 0]
            let lo = -idx(lambda - x);
            for iz in lo..=0 {
                let z = iz as f64 * step;
                let f = f_lambda(x, y, z, lambda);
                if f < best.0 {
                    best = (f, FLambdaPoint { x, y, z, lambda });
                }
            }
        }
    }
    Ok(best)
}

/// The three families on which `F_λ` vanishes, sampled at `k + 1` values
/// of the free coordinate.
pub fn equality_families(lambda: f64, k: usize) -> Vec<FLambdaPoint> {
    let mut pts = Vec::with_capacity(3 * (k + 1));
    for i in 0..=k {
        let t = i as f64 / k.max(1) as f64;
        let y = -0.5 * lambda * t;
        pts.push(FLambdaPoint { x: lambda, y, z: 0.0, lambda });
        pts.push(FLambdaPoint { x: -y, y, z: -y - lambda, lambda });
        pts.push(FLambdaPoint { x: 0.0, y: 0.0, z: -lambda * t, lambda });
    }
    pts
}
