//! Nonradial candidates on the unit disk from lifted point clouds.
//!
//! `m` parameter points `(r, θ, z)` are lifted by
//! `Φ(r, θ, z) = (r cos θ, r sin θ, zM - q(r² - 1)/2)`. The upper convex
//! hull of the lifted points together with the rim `C_0..C_{n-1}` of the
//! inscribed `n`-gon `Ω_n` is the graph of a concave piecewise-linear `v`,
//! and `u = v + q(|x|² - 1)/2` is q-concave. The Newton cost of `u` is
//! integrated face by face with a triangle Gauss rule; `∇u = ∇v + q x` is
//! linear on every face.

mod export;
mod hull;
mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::radial::RadialSolution;

pub use export::{mesh_to_obj, write_obj, MeshRecord};
pub use quadrature::{triangle_quadrature, TriangleRule, DEFAULT_TRIANGLE_ORDER, MIN_TRIANGLE_AREA};

use hull::Hull;
use quadrature::{map_sum, signed_area};

const BOX_SLACK: f64 = 1e-12;
// lifted points are pulled this far (relative) inside Ω_n
const RIM_CLEARANCE: f64 = 1e-9;
const UPPER_NORMAL_MIN: f64 = 1e-12;
const LOCATE_TOL: f64 = 1e-12;

/// The DE decision variables: `m` points `(r, θ, z) ∈ [0,1]×[0,2π]×[0,1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamVector {
    pub points: Vec<[f64; 3]>,
}

impl ParamVector {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        let p = ParamVector { points };
        p.validate()?;
        Ok(p)
    }

    /// Reads `[r_0, θ_0, z_0, r_1, ...]`.
    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if x.len() % 3 != 0 {
            return Err(domain(format!("flat parameter length {} is not a multiple of 3", x.len())));
        }
        ParamVector::new(x.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.points.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let s = BOX_SLACK;
        for (i, &[r, t, z]) in self.points.iter().enumerate() {
            let ok = (-s..=1.0 + s).contains(&r) && (-s..=2.0 * PI + s).contains(&t) && (-s..=1.0 + s).contains(&z);
            if !ok {
                return Err(domain(format!("point {i} = ({r}, {t}, {z}) outside [0,1]×[0,2π]×[0,1]")));
            }
        }
        Ok(())
    }

    /// Box bounds of a flattened vector with `m` points.
    pub fn bounds(m: usize) -> Vec<[f64; 2]> {
        (0..m).flat_map(|_| [[0.0, 1.0], [0.0, 2.0 * PI], [0.0, 1.0]]).collect()
    }
}

/// Upper hull projected onto `Ω_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    /// `(x, y, v)`; the first `n` vertices are the rim `C_0..C_{n-1}`.
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise in projection.
    pub faces: Vec<[usize; 3]>,
    pub face_gradients: Vec<[f64; 2]>,
    pub boundary: Vec<[f64; 2]>,
}

/// `C_k = (cos 2πk/n, sin 2πk/n)`, `k = 0..n-1`.
pub fn sample_boundary(n: usize) -> Result<Vec<[f64; 2]>> {
    if n < 3 {
        return Err(domain(format!("need n >= 3 boundary points (n = {n})")));
    }
    Ok((0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect())
}

/// `(n/2) sin(2π/n)`.
pub fn polygon_area(n: usize) -> f64 {
    0.5 * n as f64 * (2.0 * PI / n as f64).sin()
}

pub fn phi_map(p: [f64; 3], big_m: f64, q: f64) -> [f64; 3] {
    let [r, t, z] = p;
    [r * t.cos(), r * t.sin(), z * big_m - q * (r * r - 1.0) / 2.0]
}

/// Distance from the origin to the boundary of `Ω_n` in direction `θ`.
pub fn polygon_radius(n: usize, theta: f64) -> f64 {
    let sector = 2.0 * PI / n as f64;
    let local = theta.rem_euclid(sector) - 0.5 * sector;
    (PI / n as f64).cos() / local.cos()
}

/// Builds the projected upper hull of `Ω_n ∪ Φ(P_1..P_m)`.
///
/// Lifted points whose projection falls outside `Ω_n` (between the polygon
/// and the circle) are pulled radially just inside it before lifting. With
/// no point above the rim plane the result is the flat fan from `C_0`.
pub fn build_hull(params: &ParamVector, n: usize, big_m: f64, q: f64) -> Result<SurfaceMesh> {
    params.validate()?;
    let rim = sample_boundary(n)?;
    let mut hull = Hull::over_rim(&rim);
    for &[r, t, z] in &params.points {
        let r = r.clamp(0.0, polygon_radius(n, t) * (1.0 - RIM_CLEARANCE));
        let z = z.clamp(0.0, 1.0);
        hull.insert(phi_map([r, t, z], big_m, q));
    }

    let mut remap = vec![usize::MAX; hull.points.len()];
    let mut vertices: Vec<[f64; 3]> = rim.iter().map(|c| [c[0], c[1], 0.0]).collect();
    for (i, slot) in remap.iter_mut().enumerate().take(n) {
        *slot = i;
    }
    let mut faces = Vec::new();
    let mut face_gradients = Vec::new();
    for (v, normal) in hull.top_faces() {
        if normal[2] <= UPPER_NORMAL_MIN {
            continue;
        }
        let tri = v.map(|i| [hull.points[i][0], hull.points[i][1]]);
        if signed_area(&tri) <= MIN_TRIANGLE_AREA {
            continue;
        }
        let mut f = [0; 3];
        for k in 0..3 {
            if remap[v[k]] == usize::MAX {
                remap[v[k]] = vertices.len();
                vertices.push(hull.points[v[k]]);
            }
            f[k] = remap[v[k]];
        }
        face_gradients.push([-normal[0] / normal[2], -normal[1] / normal[2]]);
        faces.push(f);
    }
    if faces.is_empty() {
        return Err(Error::DegenerateHull("no upward faces".into()));
    }
    let mut mesh = SurfaceMesh {
        vertices,
        faces,
        face_gradients,
        boundary: rim,
    };
    // plane normals lose a few digits for thin faces; refit from vertices
    for i in 0..mesh.faces.len() {
        mesh.face_gradients[i] = mesh.vertex_gradient(i);
    }
    Ok(mesh)
}

impl SurfaceMesh {
    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    pub fn triangle(&self, face: usize) -> [[f64; 2]; 3] {
        self.faces[face].map(|i| [self.vertices[i][0], self.vertices[i][1]])
    }

    fn vertex_gradient(&self, face: usize) -> [f64; 2] {
        let [a, b, c] = self.faces[face].map(|i| self.vertices[i]);
        let (e1, e2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]]);
        let (d1, d2) = (b[2] - a[2], c[2] - a[2]);
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        [(d1 * e2[1] - d2 * e1[1]) / det, (e1[0] * d2 - e2[0] * d1) / det]
    }

    /// Sum of projected face areas; equals `area(Ω_n)` for a valid mesh.
    pub fn projected_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| signed_area(&self.triangle(f))).sum()
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let n = self.boundary.len();
        (0..n).all(|k| {
            let a = self.boundary[k];
            let b = self.boundary[(k + 1) % n];
            (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= -LOCATE_TOL
        })
    }

    /// Index of a face containing `x`, or `None` outside `Ω_n`.
    pub fn locate(&self, x: [f64; 2]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let mut best = (f64::NEG_INFINITY, 0);
        for f in 0..self.faces.len() {
            let lam = barycentric(&self.triangle(f), x);
            let worst = lam[0].min(lam[1]).min(lam[2]);
            if worst >= -LOCATE_TOL {
                return Some(f);
            }
            if worst > best.0 {
                best = (worst, f);
            }
        }
        Some(best.1)
    }

    /// Concave part `v(x)`.
    pub fn eval_v(&self, x: [f64; 2]) -> Result<f64> {
        let f = self.locate(x).ok_or(Error::OutsideDomain { x: x[0], y: x[1] })?;
        let a = self.vertices[self.faces[f][0]];
        let g = self.face_gradients[f];
        Ok(a[2] + g[0] * (x[0] - a[0]) + g[1] * (x[1] - a[1]))
    }

    /// Exact cost when `q = 0`: `Σ area_τ / (1 + |∇v_τ|²)`.
    pub fn linear_cost(&self) -> f64 {
        (0..self.faces.len())
            .map(|f| {
                let g = self.face_gradients[f];
                signed_area(&self.triangle(f)) / (1.0 + g[0] * g[0] + g[1] * g[1])
            })
            .sum()
    }

    /// `u = v + q(|x|² - 1)/2` at every vertex.
    pub fn u_vertices(&self, q: f64) -> Vec<[f64; 3]> {
        self.vertices
            .iter()
            .map(|p| [p[0], p[1], p[2] + q * (p[0] * p[0] + p[1] * p[1] - 1.0) / 2.0])
            .collect()
    }
}

fn barycentric(tri: &[[f64; 2]; 3], x: [f64; 2]) -> [f64; 3] {
    let [a, b, c] = *tri;
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((x[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (x[1] - a[1])) / det;
    let l2 = ((b[0] - a[0]) * (x[1] - a[1]) - (x[0] - a[0]) * (b[1] - a[1])) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// `u(x) = v(x) + q(|x|² - 1)/2` for `x ∈ Ω_n`.
pub fn recover_u(mesh: &SurfaceMesh, x: [f64; 2], q: f64) -> Result<f64> {
    Ok(mesh.eval_v(x)? + q * (x[0] * x[0] + x[1] * x[1] - 1.0) / 2.0)
}

/// `Σ_τ ∫_τ dx / (1 + |∇v_τ + q x|²)`. Faces below the area threshold are
/// skipped.
pub fn cost(mesh: &SurfaceMesh, q: f64, rule: &TriangleRule) -> Result<f64> {
    let mut total = 0.0;
    for f in 0..mesh.faces.len() {
        let tri = mesh.triangle(f);
        let area = signed_area(&tri).abs();
        if area < MIN_TRIANGLE_AREA {
            continue;
        }
        let g = mesh.face_gradients[f];
        let mut integrand = |p: [f64; 2]| {
            let gx = g[0] + q * p[0];
            let gy = g[1] + q * p[1];
            1.0 / (1.0 + gx * gx + gy * gy)
        };
        total += 2.0 * area * map_sum(&mut integrand, &tri, rule);
    }
    Ok(total)
}

/// `cost ∘ build_hull` on flattened parameters, for the optimizer.
#[derive(Debug, Clone)]
pub struct CostEvaluator {
    pub n: usize,
    pub big_m: f64,
    pub q: f64,
    pub rule: TriangleRule,
}

impl CostEvaluator {
    pub fn new(n: usize, big_m: f64, q: f64) -> Result<Self> {
        if n < 3 {
            return Err(domain(format!("need n >= 3 boundary points (n = {n})")));
        }
        if !(big_m > 0.0) || !(q >= 0.0) {
            return Err(domain(format!("need M > 0 and q >= 0 (M = {big_m}, q = {q})")));
        }
        Ok(CostEvaluator {
            n,
            big_m,
            q,
            rule: TriangleRule::default(),
        })
    }

    pub fn mesh(&self, x: &[f64]) -> Result<SurfaceMesh> {
        build_hull(&ParamVector::from_flat(x)?, self.n, self.big_m, self.q)
    }

    pub fn cost(&self, x: &[f64]) -> Result<f64> {
        cost(&self.mesh(x)?, self.q, &self.rule)
    }

    /// Infallible version for black-box use; failures cost `+∞`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.cost(x).unwrap_or(f64::INFINITY)
    }
}

/// Places `m` points on concentric rings so that their hull interpolates a
/// radial profile: one ring exactly on the kink `r = a*` at full height
/// (which makes the cap flat in `v`), and tail rings in between, with the
/// number of points per ring proportional to its radius.
pub fn radial_params(sol: &RadialSolution<f64>, m: usize) -> Result<ParamVector> {
    let prob = sol.problem();
    if (prob.radius - 1.0).abs() > 1e-12 {
        return Err(domain(format!("hull2d works on the unit disk (R = {})", prob.radius)));
    }
    if m == 0 {
        return Ok(ParamVector::default());
    }
    let a = sol.a_star();
    let rings = ring_count(m, a);
    let mut radii = vec![a];
    for j in 1..rings {
        let t = j as f64 / rings as f64;
        radii.push(a + (1.0 - a) * t);
    }
    let counts = split_proportional(m, &radii);
    let mut points = Vec::with_capacity(m);
    for (ring, (&r, &k)) in radii.iter().zip(&counts).enumerate() {
        let z = if ring == 0 { 1.0 } else { (sol.eval(r) / prob.height).clamp(0.0, 1.0) };
        // stagger alternate rings
        let phase = if ring % 2 == 1 { PI / k.max(1) as f64 } else { 0.0 };
        for i in 0..k {
            let t = (phase + 2.0 * PI * i as f64 / k as f64).rem_euclid(2.0 * PI);
            points.push([r, t, z]);
        }
    }
    ParamVector::new(points)
}

fn ring_count(m: usize, a: f64) -> usize {
    // rings spaced like the angular spacing on the kink ring
    let tail = 1.0 - a;
    let mut best = 1;
    for rings in 1..=m {
        let radii: Vec<f64> = (0..rings).map(|j| a + tail * j as f64 / rings as f64).collect();
        let counts = split_proportional(m, &radii);
        if counts.iter().any(|&c| c < 3) {
            break;
        }
        let spacing = 2.0 * PI * a / counts[0] as f64;
        best = rings;
        if tail / rings as f64 <= spacing {
            break;
        }
    }
    best
}

fn split_proportional(m: usize, radii: &[f64]) -> Vec<usize> {
    let total: f64 = radii.iter().sum();
    let mut counts: Vec<usize> = radii.iter().map(|r| (m as f64 * r / total).floor() as usize).collect();
    let mut rest = m - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&i, &j| {
        let fi = m as f64 * radii[i] / total - counts[i] as f64;
        let fj = m as f64 * radii[j] / total - counts[j] as f64;
        fj.total_cmp(&fi)
    });
    for &i in order.iter().cycle() {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}
