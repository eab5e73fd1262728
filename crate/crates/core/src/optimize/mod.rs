//! Differential evolution over lifted point clouds.

mod de;

use std::path::Path;

pub use de::{optimize, optimize_with, DEConfig, DEOptions, OptimizationTrace};

use crate::error::{precondition, Result};
use crate::hull2d::{cost, radial_params, CostEvaluator, ParamVector, SurfaceMesh};
use crate::radial::{solve_radial, RadialProblem};

#[derive(Debug, Clone)]
pub struct Solve2D {
    pub mesh: SurfaceMesh,
    pub params: ParamVector,
    pub trace: OptimizationTrace,
    /// Cost of the radial minimizer's mesh at the same `m` and `n`, when
    /// seeding was requested and possible.
    pub radial_cost: Option<f64>,
}

/// Minimizes the mesh cost over `m` lifted points on `Ω_n`.
///
/// With `seed_radial`, one population member interpolates the radial
/// minimizer for the same `(M, q)`; elitism then bounds the result by that
/// mesh's cost.
pub fn solve_2d(big_m: f64, q: f64, m: usize, n: usize, config: &DEConfig, seed_radial: bool) -> Result<Solve2D> {
    if !(big_m > 0.0 && big_m.is_finite()) {
        return Err(precondition(format!("M > 0 required (M = {big_m})")));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(precondition(format!("q >= 0 required (q = {q})")));
    }
    if m < 1 {
        return Err(precondition("m >= 1 lifted points required"));
    }
    if n < 3 {
        return Err(precondition(format!("n >= 3 boundary points required (n = {n})")));
    }
    if q > 1.0 {
        log::warn!("q = {q} > 1: profiles on the unit disk may lose the single-shock property");
    }
    let evaluator = CostEvaluator::new(n, big_m, q)?;

    let mut initial = Vec::new();
    let mut radial_cost = None;
    if seed_radial {
        match RadialProblem::new(1.0, big_m, q).and_then(|p| solve_radial(&p, 512)) {
            Ok(sol) => {
                let x = radial_params(&sol, m)?.to_flat();
                radial_cost = Some(evaluator.cost(&x)?);
                initial.push(x);
            }
            Err(e) => log::warn!("radial seed unavailable: {e}"),
        }
    }

    let bounds = ParamVector::bounds(m);
    let trace = optimize_with(
        |x: &[f64]| evaluator.eval(x),
        &bounds,
        config,
        DEOptions { initial, repair: None },
    )?;
    let params = ParamVector::from_flat(&trace.best_params)?;
    let mesh = evaluator.mesh(&trace.best_params)?;
    debug_assert!((cost(&mesh, q, &evaluator.rule)? - trace.final_cost).abs() < 1e-12);
    Ok(Solve2D {
        mesh,
        params,
        trace,
        radial_cost,
    })
}

/// `evaluation_count,best_cost` rows.
pub fn write_trace_csv(path: impl AsRef<Path>, trace: &OptimizationTrace) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(["evaluation_count", "best_cost"])?;
    for &(n, c) in &trace.best_cost_history {
        w.write_record([n.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
