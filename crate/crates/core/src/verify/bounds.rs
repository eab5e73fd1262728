use super::{apothem, Domain};
use crate::error::{precondition, Result};
use crate::numerics::integrate;

/// `∫_Ω ½(1 - M/√(M² + d(x)²)) dx`, `d` the distance to `∂Ω`: the
/// infimum of the resistance over all single-shock profiles with height at
/// most `M`. Computed by adaptive quadrature to absolute accuracy `tol`.
pub fn lower_bound(domain: &Domain, big_m: f64, tol: f64) -> Result<f64> {
    if !(big_m > 0.0) {
        return Err(precondition(format!("M > 0 required (M = {big_m})")));
    }
    let deficit = |d: f64| 1.0 - big_m / (big_m * big_m + d * d).sqrt();
    match *domain {
        Domain::Interval { lo, hi } => {
            // both halves contribute ∫_0^{L/2} ½(...) ds
            integrate(deficit, 0.0, 0.5 * (hi - lo), tol)
        }
        Domain::Disk { radius } => {
            let v = integrate(|r| deficit(radius - r) * r, 0.0, radius, tol / std::f64::consts::PI)?;
            Ok(std::f64::consts::PI * v)
        }
        Domain::Polygon { sides, radius } => {
            // the triangle from the center to an edge, at distance s from
            // that edge, has width L(a - s)/a
            let a = apothem(sides, radius);
            let edge = 2.0 * radius * (std::f64::consts::PI / sides as f64).sin();
            let scale = 0.5 * sides as f64 * edge / a;
            let v = integrate(|s| deficit(s) * (a - s), 0.0, a, tol / scale)?;
            Ok(scale * v)
        }
    }
}

/// `1 - M asinh(1/M)`, the interval `[-1, 1]` value in closed form.
pub fn lower_bound_unit_interval(big_m: f64) -> f64 {
    1.0 - big_m * (1.0 / big_m).asinh()
}
