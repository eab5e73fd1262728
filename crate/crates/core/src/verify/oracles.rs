//! Brute-force discretized minimizers, independent of the closed forms.
//!
//! The decision variables are node values of `w = u - (q/2)x²` on a uniform
//! grid; `w` is continued linearly between nodes, so `u` is piecewise
//! parabolic and q-concave exactly when the chord slopes of `w` are
//! nonincreasing. Every candidate is projected onto that cone (pool
//! adjacent violators on the slopes), lowered until its smallest node value
//! is 0 and cut off at `M`. A penalty on box violations is kept as a guard.
//!
//! DE alone stalls in this class: kinks can only sit at nodes, and moving
//! one is a jump between local minima. The search therefore runs coarse to
//! fine and follows DE on each grid with a greedy polish (knot slides, slope
//! bumps and node moves) that shares the same evaluation budget.

use serde::{Deserialize, Serialize};

use super::pav::pav_nonincreasing;
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::optimize::{optimize_with, DEConfig, DEOptions};

const PENALTY: f64 = 100.0;
const ORACLE_POPULATION: usize = 40;
// share of the budget spent by DE; the rest polishes the best point
const DE_SHARE: f64 = 0.5;
const COARSEST_CELLS: usize = 8;
// relative slope difference still counted as one run
const RUN_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub resistance: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest distance of a node value from `[0, M]`.
    pub max_violation: f64,
    pub evaluations: usize,
}

struct Discretization {
    nodes: Vec<f64>,
    // u = w + offset
    offset: Vec<f64>,
    big_m: f64,
    q: f64,
    radial: bool,
}

impl Discretization {
    /// Uniform grid with `n` cells on `[0, R]` (radial) or `[-1, 1]`.
    fn new(radius: f64, n: usize, big_m: f64, q: f64, radial: bool) -> Self {
        let nodes: Vec<f64> = if radial {
            (0..=n).map(|j| radius * j as f64 / n as f64).collect()
        } else {
            (0..=n).map(|j| -1.0 + 2.0 * j as f64 / n as f64).collect()
        };
        let offset = if radial {
            nodes.iter().map(|r| 0.5 * q * r * r).collect()
        } else {
            nodes.iter().map(|y| 0.5 * q * (y * y - 1.0)).collect()
        };
        Discretization {
            nodes,
            offset,
            big_m,
            q,
            radial,
        }
    }

    /// `w` of a coarser grid read at this grid's nodes (linear between
    /// coarse nodes, so the profile is unchanged when the grids nest).
    fn prolong(&self, coarse: &Discretization, w: &[f64]) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|&x| {
                let k = coarse.nodes.partition_point(|&v| v <= x).clamp(1, coarse.nodes.len() - 1) - 1;
                let (x0, x1) = (coarse.nodes[k], coarse.nodes[k + 1]);
                w[k] + (w[k + 1] - w[k]) * (x - x0) / (x1 - x0)
            })
            .collect()
    }

    fn bounds(&self) -> Vec<[f64; 2]> {
        self.offset.iter().map(|&c| [-c, self.big_m - c]).collect()
    }

    fn slopes(&self, w: &[f64]) -> Vec<f64> {
        w.windows(2)
            .zip(self.nodes.windows(2))
            .map(|(w, x)| (w[1] - w[0]) / (x[1] - x[0]))
            .collect()
    }

    fn violation(&self, w: &[f64]) -> f64 {
        w.iter()
            .zip(&self.offset)
            .map(|(&w, &c)| (-c - w).max(w - (self.big_m - c)).max(0.0))
            .fold(0.0, f64::max)
    }

    fn repair(&self, w: &mut [f64]) {
        let widths: Vec<f64> = self.nodes.windows(2).map(|x| x[1] - x[0]).collect();
        let mut s = self.slopes(w);
        pav_nonincreasing(&mut s, &widths);
        if self.radial {
            for v in s.iter_mut() {
                *v = v.min(0.0);
            }
        }
        let mut acc = 0.0;
        w[0] = 0.0;
        for j in 0..s.len() {
            acc += s[j] * widths[j];
            w[j + 1] = acc;
        }
        // rest the lowest node on u = 0, then cut the top at u = M; the cap
        // M - offset is concave (and nonincreasing in r), so the minimum keeps
        // both properties at the nodes
        let low = w.iter().zip(&self.offset).map(|(&v, &c)| v + c).fold(f64::INFINITY, f64::min);
        for (v, &c) in w.iter_mut().zip(&self.offset) {
            *v = (*v - low).min(self.big_m - c);
        }
    }

    fn resistance(&self, w: &[f64]) -> f64 {
        let rule = gauss_legendre::<f64>(8);
        let q = self.q;
        self.slopes(w)
            .iter()
            .zip(self.nodes.windows(2))
            .map(|(&s, x)| {
                if self.radial {
                    rule.integrate(|r| r / (1.0 + (s + q * r).powi(2)), x[0], x[1])
                } else {
                    rule.integrate(|y| 1.0 / (1.0 + (s + q * y).powi(2)), x[0], x[1])
                }
            })
            .sum()
    }

    fn objective(&self, w: &[f64]) -> f64 {
        self.resistance(w) + PENALTY * self.violation(w)
    }

    /// DE over the node values, started from `start` when given, then a
    /// greedy polish with what is left of `budget`.
    fn search(&self, start: Option<Vec<f64>>, budget: usize, seed: u64) -> Result<(Vec<f64>, usize)> {
        let de_budget = ((budget as f64 * DE_SHARE) as usize).max(ORACLE_POPULATION);
        let config = DEConfig {
            population_size: ORACLE_POPULATION,
            max_evaluations: de_budget,
            seed,
            ..DEConfig::default()
        };
        let repair = |w: &mut [f64]| self.repair(w);
        let trace = optimize_with(
            |w: &[f64]| self.objective(w),
            &self.bounds(),
            &config,
            DEOptions {
                initial: start.into_iter().collect(),
                repair: Some(&repair),
            },
        )?;
        let (w, polish_evals) =
            self.polish(trace.best_params, trace.final_cost, budget.saturating_sub(trace.evaluations));
        Ok((w, trace.evaluations + polish_evals))
    }

    /// Cells where a run of equal slopes starts (closed by the cell
    /// count), on the slopes of `w` or, when `shifted`, the chord slopes of `u`.
    fn runs(&self, w: &[f64], shifted: bool) -> Vec<usize> {
        let v: Vec<f64> = self
            .slopes(w)
            .iter()
            .zip(self.offset.windows(2).zip(self.nodes.windows(2)))
            .map(|(s, (c, x))| if shifted { s + (c[1] - c[0]) / (x[1] - x[0]) } else { *s })
            .collect();
        let scale = 1.0 + v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let mut starts = vec![0];
        for j in 1..v.len() {
            if (v[j] - v[j - 1]).abs() > RUN_TOL * scale {
                starts.push(j);
            }
        }
        starts.push(v.len());
        starts
    }

    fn spaces(&self) -> &'static [bool] {
        if self.q == 0.0 {
            &[false]
        } else {
            &[false, true]
        }
    }

    /// Knot slides. A joint is a node where the cells on either side share
    /// no run in either space; the pieces next to it are the longest runs
    /// ending and starting there. The joint moves by one cell keeping its
    /// height and the heights at the far ends of both pieces, and each
    /// piece is rebuilt straight in its own space (`u` for straight pieces,
    /// `w` for parabolic ones). Kinks sit at nodes, so this is how one moves
    /// without passing through worse profiles.
    fn slides(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let cells = self.nodes.len() - 1;
        // per space: index of the run holding each cell, and run bounds
        let layouts: Vec<(bool, Vec<usize>, Vec<usize>)> = self
            .spaces()
            .iter()
            .map(|&shifted| {
                let starts = self.runs(w, shifted);
                let mut id = vec![0; cells];
                for (r, b) in starts.windows(2).enumerate() {
                    id[b[0]..b[1]].fill(r);
                }
                (shifted, id, starts)
            })
            .collect();
        let u: Vec<f64> = w.iter().zip(&self.offset).map(|(a, b)| a + b).collect();
        let mut out = Vec::new();
        for k in 1..cells {
            if layouts.iter().any(|(_, id, _)| id[k - 1] == id[k]) {
                continue;
            }
            let (left_straight, a) = layouts
                .iter()
                .map(|(sh, id, st)| (*sh, st[id[k - 1]]))
                .min_by_key(|&(_, a)| a)
                .expect("one space");
            let (right_straight, b) = layouts
                .iter()
                .map(|(sh, id, st)| (*sh, st[id[k] + 1]))
                .max_by_key(|&(_, b)| b)
                .expect("one space");
            for k2 in [k - 1, k + 1] {
                if k2 <= a || k2 >= b {
                    continue;
                }
                let mut nw = w.to_vec();
                // values at a, k2, b: u_a, u_k, u_b
                let mut fill = |lo: usize, hi: usize, ulo: f64, uhi: f64, straight: bool| {
                    let (xl, xh) = (self.nodes[lo], self.nodes[hi]);
                    for j in lo..=hi {
                        let t = (self.nodes[j] - xl) / (xh - xl);
                        nw[j] = if straight {
                            ulo + (uhi - ulo) * t - self.offset[j]
                        } else {
                            let (wl, wh) = (ulo - self.offset[lo], uhi - self.offset[hi]);
                            wl + (wh - wl) * t
                        };
                    }
                };
                fill(a, k2, u[a], u[k], left_straight);
                fill(k2, b, u[k], u[b], right_straight);
                out.push(nw);
            }
        }
        out
    }

    /// Cell ranges whose slopes move together in a bump: every single cell
    /// and every run of two or more equal slopes.
    fn bump_ranges(&self, w: &[f64]) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.nodes.len() - 1).map(|k| (k, k + 1)).collect();
        for &shifted in self.spaces() {
            let runs = self.runs(w, shifted);
            out.extend(runs.windows(2).filter(|r| r[1] - r[0] >= 2).map(|r| (r[0], r[1])));
        }
        out
    }

    /// Greedy local search from the DE optimum. A sweep tries every knot
    /// slide, then slope bumps of size `step` on single cells and on whole
    /// runs (a ramp over the range added to `w`). Every probe is projected like the DE
    /// trials; the step halves after a sweep without improvement.
    fn polish(&self, mut w: Vec<f64>, mut f: f64, budget: usize) -> (Vec<f64>, usize) {
        let mut step = 1.0;
        let mut evals = 0;
        let try_probe = |probe: &mut Vec<f64>, w: &mut Vec<f64>, f: &mut f64, evals: &mut usize| {
            self.repair(probe);
            let fp = self.objective(probe);
            *evals += 1;
            if fp < *f {
                *w = std::mem::take(probe);
                *f = fp;
                true
            } else {
                false
            }
        };
        while evals < budget && step > 1e-12 {
            let mut improved = false;
            let mut candidates = self.slides(&w);
            if !self.radial {
                // the interval and the constraints are mirror symmetric and the
                // feasible set is convex, so the mirror average is admissible
                candidates.push(w.iter().zip(w.iter().rev()).map(|(a, b)| 0.5 * (a + b)).collect());
            }
            for mut probe in candidates {
                if evals >= budget {
                    break;
                }
                improved |= try_probe(&mut probe, &mut w, &mut f, &mut evals);
            }
            for (i, j) in self.bump_ranges(&w) {
                let (a, b) = (self.nodes[i], self.nodes[j]);
                for sign in [1.0, -1.0] {
                    if evals >= budget {
                        break;
                    }
                    let mut probe: Vec<f64> = w
                        .iter()
                        .zip(&self.nodes)
                        .map(|(&v, &x)| v + sign * step * (x.clamp(a, b) - a))
                        .collect();
                    if try_probe(&mut probe, &mut w, &mut f, &mut evals) {
                        improved = true;
                        break;
                    }
                }
            }
            // single node values: trades slope between the two cells around a node
            for k in 0..self.nodes.len() {
                let h = self.nodes[k.max(1)] - self.nodes[k.max(1) - 1];
                for sign in [1.0, -1.0] {
                    if evals >= budget {
                        break;
                    }
                    let mut probe = w.clone();
                    probe[k] += sign * step * h;
                    if try_probe(&mut probe, &mut w, &mut f, &mut evals) {
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (w, evals)
    }
}

/// Coarse-to-fine search: the grid is halved down to `COARSEST_CELLS`,
/// the coarsest level is searched from scratch and each finer one starts
/// from the previous best. Coarse levels get the smaller share of `budget`.
fn run(radius: f64, n: usize, big_m: f64, q: f64, radial: bool, budget: usize, seed: u64) -> Result<OracleResult> {
    let mut cells = vec![n];
    while cells[0] % 2 == 0 && cells[0] / 2 >= COARSEST_CELLS {
        cells.insert(0, cells[0] / 2);
    }
    let total: usize = cells.iter().sum();
    let mut best: Option<(Discretization, Vec<f64>)> = None;
    let mut used = 0;
    for (level, &c) in cells.iter().enumerate() {
        let d = Discretization::new(radius, c, big_m, q, radial);
        let share = if level + 1 == cells.len() {
            budget - used
        } else {
            (budget * c / total).max(ORACLE_POPULATION)
        };
        let start = best.as_ref().map(|(coarse, w)| d.prolong(coarse, w));
        let (w, evals) = d.search(start, share.max(ORACLE_POPULATION), seed.wrapping_add(level as u64))?;
        used += evals;
        best = Some((d, w));
    }
    let (d, w) = best.expect("at least one level");
    Ok(OracleResult {
        resistance: d.resistance(&w),
        values: w.iter().zip(&d.offset).map(|(w, c)| w + c).collect(),
        max_violation: d.violation(&w),
        nodes: d.nodes,
        evaluations: used,
    })
}

fn check(big_m: f64, q: f64, n: usize, budget: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Config(format!("need N >= 4 intervals (N = {n})")));
    }
    if budget < ORACLE_POPULATION {
        return Err(Error::Config(format!("budget must be at least {ORACLE_POPULATION} (got {budget})")));
    }
    if !(big_m > 0.0 && q >= 0.0) {
        return Err(Error::Config(format!("need M > 0 and q >= 0 (M = {big_m}, q = {q})")));
    }
    Ok(())
}

/// Best piecewise-parabolic q-concave profile on `[-1, 1]` with `N`
/// intervals found within `budget` evaluations: an upper bound on the
/// 1D minimum.
pub fn oracle_discrete_1d(big_m: f64, q: f64, n: usize, budget: usize, seed: u64) -> Result<OracleResult> {
    check(big_m, q, n, budget)?;
    run(1.0, n, big_m, q, false, budget, seed)
}

/// Best radial profile on `[0, R]` with `r ↦ u - (q/2)r²` concave,
/// nonincreasing and piecewise linear on `N` intervals: an upper bound on
/// the radial minimum `D_R`.
pub fn oracle_discrete_radial(radius: f64, big_m: f64, q: f64, n: usize, budget: usize, seed: u64) -> Result<OracleResult> {
    check(big_m, q, n, budget)?;
    if !(radius > 0.0) {
        return Err(Error::Config(format!("need R > 0 (R = {radius})")));
    }
    run(radius, n, big_m, q, true, budget, seed)
}
