use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Domain;

pub const SHOCK_TOL: f64 = 1e-9;
pub const GRADIENT_STEP: f64 = 1e-6;
pub const DEFAULT_TAU_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockViolation {
    pub x: Vec<f64>,
    pub tau: f64,
    /// `u(x - τ∇u) - u(x) - (τ/2)(1 - |∇u|²)`, positive.
    pub deficit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockReport {
    pub tested_points: usize,
    pub violations: Vec<ShockViolation>,
    pub pass: bool,
}

pub type Value<'a> = &'a dyn Fn(&[f64]) -> f64;
pub type Gradient<'a> = &'a dyn Fn(&[f64]) -> Vec<f64>;

fn central_gradient(u: Value<'_>, x: &[f64], domain: &Domain) -> Vec<f64> {
    let h = GRADIENT_STEP;
    (0..x.len())
        .map(|i| {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[i] += h;
            minus[i] -= h;
            match (domain.contains(&plus), domain.contains(&minus)) {
                (true, true) => (u(&plus) - u(&minus)) / (2.0 * h),
                (true, false) => (u(&plus) - u(x)) / h,
                (false, true) => (u(x) - u(&minus)) / h,
                (false, false) => 0.0,
            }
        })
        .collect()
}

fn stratified_points(domain: &Domain, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    match *domain {
        Domain::Interval { lo, hi } => (0..samples)
            .map(|i| vec![lo + (hi - lo) * (i as f64 + rng.gen::<f64>()) / samples as f64])
            .collect(),
        Domain::Disk { .. } | Domain::Polygon { .. } => {
            // equal-area cells in (ρ², θ), stretched to the boundary
            let rings = ((samples as f64).sqrt().round() as usize).max(1);
            let sectors = samples.div_ceil(rings);
            let mut pts = Vec::with_capacity(rings * sectors);
            for i in 0..rings {
                for j in 0..sectors {
                    let s = (i as f64 + rng.gen::<f64>()) / rings as f64;
                    let t = 2.0 * std::f64::consts::PI * (j as f64 + rng.gen::<f64>()) / sectors as f64;
                    let r = boundary_radius(domain, t) * s.sqrt();
                    pts.push(vec![r * t.cos(), r * t.sin()]);
                }
            }
            pts.truncate(samples);
            pts
        }
    }
}

fn boundary_radius(domain: &Domain, theta: f64) -> f64 {
    match *domain {
        Domain::Polygon { sides, radius } => {
            let sector = 2.0 * std::f64::consts::PI / sides as f64;
            let local = theta.rem_euclid(sector) - 0.5 * sector;
            super::apothem(sides, radius) / local.cos()
        }
        Domain::Disk { radius } => radius,
        Domain::Interval { .. } => unreachable!("intervals are sampled directly"),
    }
}

/// Monte Carlo test of the single-shock inequality
/// `u(x - τ∇u(x)) ≤ u(x) + (τ/2)(1 - |∇u(x)|²)` for `τ` from 0 up to the
/// exit of the ray from the domain.
///
/// Points are stratified over the domain; along each ray `tau_samples`
/// equispaced values of `τ` are tested. Without an analytic gradient,
/// central differences with step `1e-6` are used.
pub fn check_single_shock(
    u: Value<'_>,
    grad: Option<Gradient<'_>>,
    domain: &Domain,
    samples: usize,
    tau_samples: usize,
    seed: u64,
) -> ShockReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = stratified_points(domain, samples, &mut rng);
    let mut violations = Vec::new();
    for x in &points {
        let g = match grad {
            Some(grad) => grad(x),
            None => central_gradient(u, x, domain),
        };
        let g2: f64 = g.iter().map(|v| v * v).sum();
        if g2 == 0.0 {
            continue;
        }
        let dir: Vec<f64> = g.iter().map(|v| -v).collect();
        let tau_max = domain.exit_time(x, &dir);
        if !(tau_max > 0.0) {
            continue;
        }
        let ux = u(x);
        for k in 1..=tau_samples {
            let tau = tau_max * k as f64 / tau_samples as f64 * (1.0 - 1e-12);
            let y: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + tau * d).collect();
            let deficit = u(&y) - ux - 0.5 * tau * (1.0 - g2);
            if deficit > SHOCK_TOL {
                violations.push(ShockViolation {
                    x: x.clone(),
                    tau,
                    deficit,
                });
            }
        }
    }
    ShockReport {
        tested_points: points.len(),
        pass: violations.is_empty(),
        violations,
    }
}
