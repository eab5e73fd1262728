//! Independent checks: q-concavity, the single-shock inequality, the
//! universal lower bound, the three-variable arctangent inequality and
//! brute-force discretized minimizers.

mod bounds;
mod concavity;
mod flambda;
mod oracles;
mod pav;
mod sampled;
mod shock;

use serde::{Deserialize, Serialize};

pub use bounds::{lower_bound, lower_bound_unit_interval};
pub use concavity::{check_qconcave, check_qconcave_segments, qconcavity_defect};
pub use flambda::{equality_families, eval_f_lambda, grid_min_f_lambda, FLambdaPoint};
pub use oracles::{oracle_discrete_1d, oracle_discrete_radial, OracleResult};
pub use pav::pav_nonincreasing;
pub use sampled::PiecewiseParabolic;
pub use shock::{check_single_shock, ShockReport, ShockViolation, DEFAULT_TAU_SAMPLES, GRADIENT_STEP, SHOCK_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    Interval { lo: f64, hi: f64 },
    Disk { radius: f64 },
    /// Regular polygon with vertices `radius·(cos 2πk/n, sin 2πk/n)`.
    Polygon { sides: usize, radius: f64 },
}

impl Domain {
    pub const UNIT_INTERVAL: Domain = Domain::Interval { lo: -1.0, hi: 1.0 };
    pub const UNIT_DISK: Domain = Domain::Disk { radius: 1.0 };

    pub fn dim(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Disk { .. } | Domain::Polygon { .. } => 2,
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Interval { lo, hi } => hi - lo,
            Domain::Disk { radius } => 2.0 * radius,
            Domain::Polygon { sides, radius } => {
                if sides % 2 == 0 {
                    2.0 * radius
                } else {
                    2.0 * radius * (std::f64::consts::PI / (2 * sides) as f64).cos()
                }
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match *self {
            Domain::Interval { lo, hi } => (lo..=hi).contains(&x[0]),
            Domain::Disk { radius } => x[0] * x[0] + x[1] * x[1] <= radius * radius,
            Domain::Polygon { sides, radius } => {
                let a = apothem(sides, radius) * (1.0 + 1e-12);
                (0..sides).all(|k| dot(edge_normal(sides, k), x) <= a)
            }
        }
    }

    /// Largest `τ ≥ 0` with `x + τ d` in the (closed) domain, for `x` inside.
    pub fn exit_time(&self, x: &[f64], d: &[f64]) -> f64 {
        match *self {
            Domain::Interval { lo, hi } => {
                if d[0] > 0.0 {
                    (hi - x[0]) / d[0]
                } else if d[0] < 0.0 {
                    (lo - x[0]) / d[0]
                } else {
                    f64::INFINITY
                }
            }
            Domain::Disk { radius } => {
                // |x + τd|² = R²
                let a = d[0] * d[0] + d[1] * d[1];
                if a == 0.0 {
                    return f64::INFINITY;
                }
                let b = x[0] * d[0] + x[1] * d[1];
                let c = x[0] * x[0] + x[1] * x[1] - radius * radius;
                let disc = (b * b - a * c).max(0.0);
                ((-b + disc.sqrt()) / a).max(0.0)
            }
            Domain::Polygon { sides, radius } => {
                let a = apothem(sides, radius);
                (0..sides)
                    .filter_map(|k| {
                        let nk = edge_normal(sides, k);
                        let v = dot(nk, d);
                        (v > 0.0).then(|| ((a - dot(nk, x)) / v).max(0.0))
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

pub(crate) fn apothem(sides: usize, radius: f64) -> f64 {
    radius * (std::f64::consts::PI / sides as f64).cos()
}

/// Outward unit normal of the edge from vertex `k` to vertex `k + 1`.
pub(crate) fn edge_normal(sides: usize, k: usize) -> [f64; 2] {
    let t = std::f64::consts::PI * (2 * k + 1) as f64 / sides as f64;
    [t.cos(), t.sin()]
}

fn dot(a: [f64; 2], b: &[f64]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_times() {
        let iv = Domain::UNIT_INTERVAL;
        assert_eq!(iv.exit_time(&[0.5], &[2.0]), 0.25);
        assert_eq!(iv.exit_time(&[0.5], &[-1.0]), 1.5);
        let disk = Domain::UNIT_DISK;
        assert!((disk.exit_time(&[0.0, 0.0], &[0.0, 2.0]) - 0.5).abs() < 1e-15);
        assert!((disk.exit_time(&[0.6, 0.0], &[-1.0, 0.0]) - 1.6).abs() < 1e-15);
        assert_eq!(disk.diameter(), 2.0);
        assert_eq!(iv.dim(), 1);
    }

    #[test]
    fn polygon_geometry() {
        // vertices on the axes: |x| + |y| ≤ √2
        let sq = Domain::Polygon { sides: 4, radius: 2f64.sqrt() };
        assert!(sq.contains(&[0.7, -0.7]) && !sq.contains(&[1.42, 0.0]));
        assert!((sq.exit_time(&[0.0, 0.0], &[1.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
        assert!((sq.exit_time(&[0.0, 0.0], &[-1.0, -1.0]) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((sq.diameter() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let tri = Domain::Polygon { sides: 3, radius: 1.0 };
        // longest chord of a triangle is a side
        assert!((tri.diameter() - 3f64.sqrt()).abs() < 1e-15);
        assert!(tri.contains(&[1.0, 0.0]) && !tri.contains(&[-0.6, 0.0]));
    }
}
