use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SurfaceMesh;
use crate::error::Result;

/// Wavefront OBJ of the graph of `u` (not `v`), faces 1-based.
pub fn mesh_to_obj(mesh: &SurfaceMesh, q: f64) -> String {
    let mut out = String::new();
    for v in mesh.u_vertices(q) {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

pub fn write_obj(path: impl AsRef<Path>, mesh: &SurfaceMesh, q: f64) -> Result<()> {
    std::fs::write(path, mesh_to_obj(mesh, q))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshRecord {
    /// `(x, y, u)`.
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub cost: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub q: f64,
    pub m: usize,
    pub n: usize,
}

impl MeshRecord {
    pub fn new(mesh: &SurfaceMesh, cost: f64, big_m: f64, q: f64, m: usize) -> Self {
        MeshRecord {
            vertices: mesh.u_vertices(q),
            faces: mesh.faces.clone(),
            cost,
            big_m,
            q,
            m,
            n: mesh.n(),
        }
    }
}
