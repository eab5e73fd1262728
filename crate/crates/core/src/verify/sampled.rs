use crate::error::{domain, Result};

/// A profile known at grid nodes, continued between nodes as
/// `u = w + (q/2)x²` with `w` piecewise linear. Samples of a q-concave
/// function give a q-concave interpolant (a piecewise linear one would not
/// be), and pieces where the samples come from `(q/2)x² + affine` are
/// reproduced exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseParabolic {
    xs: Vec<f64>,
    ws: Vec<f64>,
    q: f64,
}

impl PiecewiseParabolic {
    pub fn new(xs: &[f64], us: &[f64], q: f64) -> Result<Self> {
        if xs.len() < 2 || xs.len() != us.len() {
            return Err(domain(format!(
                "need at least two samples with matching lengths (got {} and {})",
                xs.len(),
                us.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("grid must be strictly increasing"));
        }
        let ws = xs.iter().zip(us).map(|(&x, &u)| u - 0.5 * q * x * x).collect();
        Ok(PiecewiseParabolic { xs: xs.to_vec(), ws, q })
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn node_values(&self) -> Vec<f64> {
        self.xs.iter().zip(&self.ws).map(|(&x, &w)| w + 0.5 * self.q * x * x).collect()
    }

    fn interval(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    fn slope(&self, k: usize) -> f64 {
        (self.ws[k + 1] - self.ws[k]) / (self.xs[k + 1] - self.xs[k])
    }

    /// Value at `x`, extended beyond the grid with the end pieces.
    pub fn value(&self, x: f64) -> f64 {
        let k = self.interval(x);
        self.ws[k] + self.slope(k) * (x - self.xs[k]) + 0.5 * self.q * x * x
    }

    /// Right derivative (left derivative at the last node).
    pub fn derivative(&self, x: f64) -> f64 {
        self.slope(self.interval(x)) + self.q * x
    }

    /// `∫ dx / (1 + u'²)` over the grid, exact up to the 8-point Gauss rule.
    pub fn resistance_1d(&self) -> f64 {
        let rule = crate::numerics::gauss_legendre::<f64>(8);
        (0..self.xs.len() - 1)
            .map(|k| {
                let s = self.slope(k);
                rule.integrate(|x| 1.0 / (1.0 + (s + self.q * x).powi(2)), self.xs[k], self.xs[k + 1])
            })
            .sum()
    }

    /// `∫ r dr / (1 + u'²)` over the grid, reading `x` as a radius.
    pub fn resistance_radial(&self) -> f64 {
        let rule = crate::numerics::gauss_legendre::<f64>(8);
        (0..self.xs.len() - 1)
            .map(|k| {
                let s = self.slope(k);
                rule.integrate(|r| r / (1.0 + (s + self.q * r).powi(2)), self.xs[k], self.xs[k + 1])
            })
            .sum()
    }

    /// The radial profile `x ↦ u(|x|)` on the disk.
    pub fn disk_value(&self, x: &[f64]) -> f64 {
        self.value(x[0].hypot(x[1]))
    }

    pub fn disk_gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return vec![0.0, 0.0];
        }
        let d = self.derivative(r);
        vec![d * x[0] / r, d * x[1] / r]
    }
}
