use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Self-adaptive DE/rand/1/bin settings (jDE).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DEConfig {
    pub population_size: usize,
    pub max_evaluations: usize,
    pub seed: u64,
    pub f_init: f64,
    pub cr_init: f64,
    /// Probability of resampling `F` for an individual.
    pub tau_f: f64,
    /// Probability of resampling `CR` for an individual.
    pub tau_cr: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Evaluate each generation's trials on the rayon pool.
    pub parallel: bool,
}

impl Default for DEConfig {
    fn default() -> Self {
        DEConfig {
            population_size: 50,
            max_evaluations: 100_000,
            seed: 1,
            f_init: 0.5,
            cr_init: 0.9,
            tau_f: 0.1,
            tau_cr: 0.1,
            f_min: 0.1,
            f_max: 1.0,
            parallel: false,
        }
    }
}

impl DEConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.population_size < 4 {
            return fail(format!("population_size must be >= 4 (got {})", self.population_size));
        }
        if self.max_evaluations < self.population_size {
            return fail(format!(
                "max_evaluations ({}) must be >= population_size ({})",
                self.max_evaluations, self.population_size
            ));
        }
        if !(self.f_min > 0.0 && self.f_min <= self.f_max) {
            return fail(format!("need 0 < f_min <= f_max (got {}, {})", self.f_min, self.f_max));
        }
        if !(self.f_min..=self.f_max).contains(&self.f_init) {
            return fail(format!("f_init {} outside [f_min, f_max]", self.f_init));
        }
        for (name, v) in [("cr_init", self.cr_init), ("tau_f", self.tau_f), ("tau_cr", self.tau_cr)] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} must lie in [0, 1] (got {v})"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    /// `(evaluation count, best cost)` at every improvement of the best.
    pub best_cost_history: Vec<(usize, f64)>,
    pub best_params: Vec<f64>,
    pub final_cost: f64,
    pub evaluations: usize,
    pub generations: usize,
    pub seed: u64,
    pub parallel: bool,
}

/// Extra inputs to [`optimize_with`].
#[derive(Default)]
pub struct DEOptions<'a> {
    /// Vectors placed in the initial population before the random fill.
    pub initial: Vec<Vec<f64>>,
    /// Applied in place to every trial after bound handling; the repaired
    /// vector is the one kept (Lamarckian).
    pub repair: Option<&'a (dyn Fn(&mut [f64]) + Sync)>,
}

pub fn optimize<F>(cost_fn: F, bounds: &[[f64; 2]], config: &DEConfig) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    optimize_with(cost_fn, bounds, config, DEOptions::default())
}

fn reflect(v: f64, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
    let r = if v < lo {
        lo + (lo - v)
    } else if v > hi {
        hi - (v - hi)
    } else {
        return v;
    };
    if (lo..=hi).contains(&r) {
        r
    } else {
        rng.gen_range(lo..=hi)
    }
}

struct Best {
    cost: f64,
    index: usize,
    history: Vec<(usize, f64)>,
}

impl Best {
    fn offer(&mut self, cost: f64, index: usize, evals: usize) {
        if cost < self.cost {
            self.cost = cost;
            self.index = index;
            self.history.push((evals, cost));
        }
    }
}

/// DE/rand/1/bin with per-individual self-adaptive `F` and `CR`.
///
/// Each generation builds all trial vectors from the current population
/// before evaluating any of them, so the result depends only on the seed
/// whether or not evaluation runs in parallel. Selection is greedy, which
/// makes the best individual monotone.
pub fn optimize_with<F>(
    cost_fn: F,
    bounds: &[[f64; 2]],
    config: &DEConfig,
    options: DEOptions<'_>,
) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    if bounds.is_empty() {
        return Err(Error::Config("empty search box".into()));
    }
    for (i, b) in bounds.iter().enumerate() {
        if !(b[0].is_finite() && b[1].is_finite() && b[0] <= b[1]) {
            return Err(Error::Config(format!("bad bounds [{}, {}] for coordinate {i}", b[0], b[1])));
        }
    }
    let dim = bounds.len();
    let np = config.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let eval = |x: &[f64]| {
        let c = cost_fn(x);
        if c.is_nan() {
            f64::INFINITY
        } else {
            c
        }
    };

    let mut pop: Vec<Vec<f64>> = Vec::with_capacity(np);
    for x in options.initial.iter().take(np) {
        if x.len() != dim {
            return Err(Error::Config(format!(
                "initial vector has length {} (expected {dim})",
                x.len()
            )));
        }
        pop.push(x.iter().zip(bounds).map(|(&v, b)| v.clamp(b[0], b[1])).collect());
    }
    while pop.len() < np {
        pop.push(bounds.iter().map(|b| rng.gen_range(b[0]..=b[1])).collect());
    }
    if let Some(repair) = options.repair {
        for x in pop.iter_mut().skip(options.initial.len()) {
            repair(x);
        }
    }
    let mut costs: Vec<f64> = if config.parallel {
        pop.par_iter().map(|x| eval(x)).collect()
    } else {
        pop.iter().map(|x| eval(x)).collect()
    };
    let mut evals = 0;
    let mut best = Best {
        cost: f64::INFINITY,
        index: 0,
        history: Vec::new(),
    };
    for (i, &c) in costs.iter().enumerate() {
        evals += 1;
        best.offer(c, i, evals);
    }
    if best.cost == f64::INFINITY {
        best.index = 0;
    }

    let mut f_par = vec![config.f_init; np];
    let mut cr_par = vec![config.cr_init; np];
    let mut generations = 0;
    while evals < config.max_evaluations {
        let batch = np.min(config.max_evaluations - evals);
        let mut trials = Vec::with_capacity(batch);
        for i in 0..batch {
            let f = if rng.gen::<f64>() < config.tau_f {
                config.f_min + rng.gen::<f64>() * (config.f_max - config.f_min)
            } else {
                f_par[i]
            };
            let cr = if rng.gen::<f64>() < config.tau_cr { rng.gen::<f64>() } else { cr_par[i] };
            let mut pick = |taken: &[usize]| loop {
                let r = rng.gen_range(0..np);
                if !taken.contains(&r) {
                    break r;
                }
            };
            let r1 = pick(&[i]);
            let r2 = pick(&[i, r1]);
            let r3 = pick(&[i, r1, r2]);
            let jrand = rng.gen_range(0..dim);
            let mut trial = pop[i].clone();
            for j in 0..dim {
                if j == jrand || rng.gen::<f64>() < cr {
                    let v = pop[r1][j] + f * (pop[r2][j] - pop[r3][j]);
                    trial[j] = reflect(v, bounds[j][0], bounds[j][1], &mut rng);
                }
            }
            if let Some(repair) = options.repair {
                repair(&mut trial);
            }
            trials.push((trial, f, cr));
        }
        let trial_costs: Vec<f64> = if config.parallel {
            trials.par_iter().map(|(x, _, _)| eval(x)).collect()
        } else {
            trials.iter().map(|(x, _, _)| eval(x)).collect()
        };
        for (i, ((trial, f, cr), c)) in trials.into_iter().zip(trial_costs).enumerate() {
            evals += 1;
            if c <= costs[i] {
                pop[i] = trial;
                costs[i] = c;
                f_par[i] = f;
                cr_par[i] = cr;
                best.offer(c, i, evals);
            }
        }
        generations += 1;
    }

    Ok(OptimizationTrace {
        best_cost_history: best.history,
        best_params: pop[best.index].clone(),
        final_cost: costs[best.index],
        evaluations: evals,
        generations,
        seed: config.seed,
        parallel: config.parallel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    fn cfg(pop: usize, evals: usize, seed: u64) -> DEConfig {
        DEConfig {
            population_size: pop,
            max_evaluations: evals,
            seed,
            ..DEConfig::default()
        }
    }

    #[test]
    fn sphere_smoke() {
        let t = optimize(sphere, &[[-5.0, 5.0]; 3], &cfg(20, 10_000, 3)).unwrap();
        assert!(t.final_cost < 1e-6, "{}", t.final_cost);
        assert_eq!(t.evaluations, 10_000);
    }

    #[test]
    fn rosenbrock_smoke() {
        let t = optimize(rosenbrock, &[[-5.0, 5.0]; 2], &cfg(20, 50_000, 11)).unwrap();
        assert!(t.final_cost < 1e-4, "{}", t.final_cost);
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let a = optimize(rosenbrock, &[[-2.0, 2.0]; 2], &cfg(10, 3000, 5)).unwrap();
        let b = optimize(rosenbrock, &[[-2.0, 2.0]; 2], &cfg(10, 3000, 5)).unwrap();
        assert_eq!(a, b);
        let par = DEConfig {
            parallel: true,
            ..cfg(10, 3000, 5)
        };
        let c = optimize(rosenbrock, &[[-2.0, 2.0]; 2], &par).unwrap();
        assert_eq!(a.best_params, c.best_params);
        assert_eq!(a.best_cost_history, c.best_cost_history);
        assert!(c.parallel);
    }

    #[test]
    fn history_monotone_and_in_bounds() {
        use std::sync::Mutex;
        let seen = Mutex::new(Vec::new());
        let bounds = [[-1.0, 2.0], [0.5, 0.75], [3.0, 3.0]];
        let t = optimize(
            |x: &[f64]| {
                seen.lock().unwrap().push(x.to_vec());
                sphere(x)
            },
            &bounds,
            &cfg(8, 999, 2),
        )
        .unwrap();
        assert!(t.best_cost_history.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].0 > w[0].0));
        assert_eq!(t.best_cost_history.last().unwrap().1, t.final_cost);
        let seen = seen.into_inner().unwrap();
        assert_eq!(seen.len(), 999);
        for x in seen {
            for (v, b) in x.iter().zip(&bounds) {
                assert!(*v >= b[0] && *v <= b[1]);
            }
        }
    }

    #[test]
    fn seeded_member_is_never_lost() {
        let seed = vec![0.0; 4];
        let t = optimize_with(
            sphere,
            &[[-5.0, 5.0]; 4],
            &cfg(10, 200, 9),
            DEOptions {
                initial: vec![seed],
                repair: None,
            },
        )
        .unwrap();
        assert_eq!(t.final_cost, 0.0);
        assert_eq!(t.best_cost_history[0], (1, 0.0));
    }

    #[test]
    fn repair_is_applied() {
        let snap = |x: &mut [f64]| {
            for v in x.iter_mut() {
                *v = v.round();
            }
        };
        let t = optimize_with(
            |x: &[f64]| sphere(x) + 0.1,
            &[[-3.0, 3.0]; 2],
            &cfg(8, 400, 4),
            DEOptions {
                initial: vec![],
                repair: Some(&snap),
            },
        )
        .unwrap();
        assert!(t.best_params.iter().all(|v| v.fract() == 0.0));
    }

    #[test]
    fn config_errors() {
        let b = [[0.0, 1.0]];
        assert!(matches!(optimize(sphere, &b, &cfg(3, 100, 0)), Err(Error::Config(_))));
        assert!(matches!(optimize(sphere, &b, &cfg(10, 5, 0)), Err(Error::Config(_))));
        assert!(matches!(optimize(sphere, &[[1.0, 0.0]], &cfg(10, 50, 0)), Err(Error::Config(_))));
        let bad = DEConfig {
            cr_init: 1.5,
            ..DEConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn config_defaults_from_partial_toml_like_json() {
        let c: DEConfig = serde_json::from_str(r#"{"seed": 42}"#).unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.population_size, 50);
        assert_eq!(c.max_evaluations, 100_000);
    }
}
