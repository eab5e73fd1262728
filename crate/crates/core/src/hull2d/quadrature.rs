use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

pub const DEFAULT_TRIANGLE_ORDER: usize = 10;
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Quadrature on the reference triangle `(0,0), (1,0), (0,1)`.
///
/// Built by collapsing a `d × d` tensor Gauss–Legendre rule on the unit
/// square onto the triangle (`x = s`, `y = t(1 - s)`), which gives `d²`
/// positive weights and exactness for total degree `2d - 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    /// Reference coordinates `(x, y)`; the barycentric weights are
    /// `(1 - x - y, x, y)`.
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl TriangleRule {
    pub fn collapsed_gauss(d: usize) -> TriangleRule {
        assert!(d >= 1, "collapsed_gauss needs d >= 1");
        let gl = gauss_legendre::<f64>(d);
        let unit: Vec<(f64, f64)> = gl
            .nodes
            .iter()
            .zip(&gl.weights)
            .map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let mut nodes = Vec::with_capacity(d * d);
        let mut weights = Vec::with_capacity(d * d);
        for &(s, ws) in &unit {
            for &(t, wt) in &unit {
                nodes.push([s, t * (1.0 - s)]);
                weights.push(ws * wt * (1.0 - s));
            }
        }
        TriangleRule {
            nodes,
            weights,
            degree: 2 * d - 2,
        }
    }

    /// Number of control points `n_c`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl Default for TriangleRule {
    fn default() -> Self {
        TriangleRule::collapsed_gauss(DEFAULT_TRIANGLE_ORDER)
    }
}

pub(crate) fn signed_area(tri: &[[f64; 2]; 3]) -> f64 {
    let [a, b, c] = tri;
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// `∫_tri f` with `rule` mapped affinely onto `tri`.
pub fn triangle_quadrature<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    tri: &[[f64; 2]; 3],
    rule: &TriangleRule,
) -> Result<f64> {
    let area = signed_area(tri).abs();
    if area < MIN_TRIANGLE_AREA {
        return Err(Error::DegenerateTriangle { area });
    }
    Ok(2.0 * area * map_sum(&mut f, tri, rule))
}

pub(crate) fn map_sum<F: FnMut([f64; 2]) -> f64>(f: &mut F, tri: &[[f64; 2]; 3], rule: &TriangleRule) -> f64 {
    let [a, b, c] = *tri;
    let e1 = [b[0] - a[0], b[1] - a[1]];
    let e2 = [c[0] - a[0], c[1] - a[1]];
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(n, &w)| w * f([a[0] + n[0] * e1[0] + n[1] * e2[0], a[1] + n[0] * e1[1] + n[1] * e2[1]]))
        .sum()
}
