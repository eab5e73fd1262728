//! `newtres`: solve, export and verify minimal-resistance profiles.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad usage or a violated
//! precondition.

mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use newtres::hull2d::{write_obj, MeshRecord};
use newtres::io::{
    read_json, read_profile_csv, write_json, write_profile_csv, Profile1DRecord, ProfileRecord, RadialRecord,
};
use newtres::optimize::{solve_2d, write_trace_csv, DEConfig};
use newtres::profile1d::solve_1d;
use newtres::radial::solve_radial;
use newtres::verify::{
    check_qconcave, check_single_shock, lower_bound, Domain, PiecewiseParabolic, ShockReport, DEFAULT_TAU_SAMPLES,
};
use newtres::RadialProblem;

use config::{required, seed, FileConfig};

const BOUND_TOL: f64 = 1e-9;
const LOWER_BOUND_QUAD_TOL: f64 = 1e-12;
const DEFAULT_SAMPLES_1D: usize = 1001;
const DEFAULT_SAMPLES_RADIAL: usize = 2048;
// dense grid for checking closed-form profiles
const CHECK_GRID: usize = 4001;
const SHOWN_VIOLATIONS: usize = 10;

#[derive(Parser)]
#[command(name = "newtres", version, about = "Minimal-resistance profiles over q-concave functions")]
struct Cli {
    /// TOML file whose keys are flag names; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form 1D minimizer on [-1, 1]; writes PREFIX.csv (x,u) and PREFIX.json.
    #[command(name = "solve-1d")]
    Solve1d(Solve1dArgs),
    /// Radial minimizer on the disk of radius R; writes PREFIX.csv (r,u) and PREFIX.json.
    #[command(name = "solve-radial")]
    SolveRadial(SolveRadialArgs),
    /// Differential evolution over convex-hull meshes on the regular n-gon.
    #[command(name = "solve-2d")]
    Solve2d(Solve2dArgs),
    /// Runs checks on an exported profile (CSV or JSON).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Solve1dArgs {
    /// Height bound.
    #[arg(long = "M")]
    big_m: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Number of uniform samples in the CSV (the kinks are added).
    #[arg(long)]
    samples: Option<usize>,
    /// Output prefix [default: profile1d].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveRadialArgs {
    /// Disk radius [default: 1].
    #[arg(long = "R")]
    radius: Option<f64>,
    #[arg(long = "M")]
    big_m: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Output prefix [default: radial].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Solve2dArgs {
    #[arg(long = "M")]
    big_m: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Number of lifted points [default: 50].
    #[arg(long)]
    m: Option<usize>,
    /// Number of polygon vertices [default: 100].
    #[arg(long)]
    n: Option<usize>,
    /// Cost evaluation budget [default: 100000].
    #[arg(long)]
    evals: Option<usize>,
    /// Population size [default: 50].
    #[arg(long)]
    population: Option<usize>,
    /// RNG seed [default: $NEWTRES_SEED, else 1].
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate trials on all cores (same result as sequential).
    #[arg(long)]
    parallel: bool,
    /// Start from random members only.
    #[arg(long)]
    no_radial_seed: bool,
    /// [default: mesh2d.obj]
    #[arg(long)]
    out_mesh: Option<PathBuf>,
    /// [default: trace2d.csv]
    #[arg(long)]
    out_trace: Option<PathBuf>,
    /// Also write the mesh, cost and parameters as JSON.
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Profile file: .json record from a solve command, or a CSV with header x,u or r,u.
    file: PathBuf,
    /// Concavity parameter (required for CSV; defaults to the record's q for JSON).
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated checks out of qconcave, shock [default: qconcave,shock].
    #[arg(long)]
    check: Option<String>,
    /// Number of sampled points for the shock check [default: 10000].
    #[arg(long)]
    rays: Option<usize>,
    /// Values of τ tested along each ray [default: 32].
    #[arg(long)]
    tau_samples: Option<usize>,
    /// Tolerance of the q-concavity check [default: 1e-9].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the shock report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Check(String),
}

impl From<newtres::Error> for Failure {
    fn from(e: newtres::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = FileConfig::load(cli.config.as_deref()).and_then(|file| match cli.command {
        Command::Solve1d(a) => solve_1d_cmd(a, &file),
        Command::SolveRadial(a) => solve_radial_cmd(a, &file),
        Command::Solve2d(a) => solve_2d_cmd(a, &file),
        Command::Verify(a) => verify_cmd(a, &file),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped.
fn g12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn line(label: &str, value: f64) {
    println!("{label:<16} {}", g12(value));
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn at_least(value: usize, min: usize, name: &str) -> Result<usize, Failure> {
    if value < min {
        return Err(Failure::Usage(format!("--{name} must be at least {min} (got {value})")));
    }
    Ok(value)
}

fn check_bound(achieved: f64, bound: f64) -> Result<(), Failure> {
    if achieved < bound - BOUND_TOL {
        return Err(Failure::Check(format!(
            "resistance {} is below the lower bound {}",
            g12(achieved),
            g12(bound)
        )));
    }
    Ok(())
}

fn solve_1d_cmd(a: Solve1dArgs, file: &FileConfig) -> Result<(), Failure> {
    let big_m = required(a.big_m, file.big_m, "M")?;
    let q = required(a.q, file.q, "q")?;
    let samples = at_least(a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES_1D), 2, "samples")?;
    let out = a.out.or(file.out.clone()).unwrap_or_else(|| "profile1d".into());

    let p = solve_1d(big_m, q)?;
    let rec = Profile1DRecord::from_profile(&p)?;
    let bound = lower_bound(&Domain::UNIT_INTERVAL, big_m, LOWER_BOUND_QUAD_TOL)?;
    let (xs, us) = p.sample(samples);
    let (csv_path, json_path) = (with_ext(&out, "csv"), with_ext(&out, "json"));
    write_profile_csv(create(&csv_path)?, "x", &xs, &us)?;
    write_json(&json_path, &rec)?;

    line("gamma_star", rec.gamma_star);
    line("resistance", rec.resistance);
    line("lower_bound", bound);
    println!("{:<16} {}", "csv", csv_path.display());
    println!("{:<16} {}", "json", json_path.display());
    check_bound(rec.resistance, bound)
}

fn solve_radial_cmd(a: SolveRadialArgs, file: &FileConfig) -> Result<(), Failure> {
    let radius = a.radius.or(file.radius).unwrap_or(1.0);
    let big_m = required(a.big_m, file.big_m, "M")?;
    let q = required(a.q, file.q, "q")?;
    let samples = at_least(a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES_RADIAL), 8, "samples")?;
    let out = a.out.or(file.out.clone()).unwrap_or_else(|| "radial".into());

    let sol = solve_radial(&RadialProblem::new(radius, big_m, q)?, samples)?;
    let rec = RadialRecord::from_solution(&sol)?;
    let disk = sol.disk_resistance()?;
    let bound = lower_bound(&Domain::Disk { radius }, big_m, LOWER_BOUND_QUAD_TOL)?;
    let rs: Vec<f64> = sol.samples().iter().map(|s| s.r).collect();
    let us: Vec<f64> = sol.samples().iter().map(|s| s.u).collect();
    let (csv_path, json_path) = (with_ext(&out, "csv"), with_ext(&out, "json"));
    write_profile_csv(create(&csv_path)?, "r", &rs, &us)?;
    write_json(&json_path, &rec)?;

    line("a_M", sol.a_m());
    line("a_star", rec.a_star);
    line("eta_star", rec.eta_star);
    line("resistance", rec.resistance);
    line("disk_resistance", disk);
    line("lower_bound", bound);
    line("el_residual", sol.euler_lagrange_residual());
    line("u(a_star)-M", sol.eval(rec.a_star) - big_m);
    line("u(R)", sol.eval(radius));
    println!("{:<16} {}", "csv", csv_path.display());
    println!("{:<16} {}", "json", json_path.display());
    check_bound(disk, bound)
}

fn solve_2d_cmd(a: Solve2dArgs, file: &FileConfig) -> Result<(), Failure> {
    let big_m = required(a.big_m, file.big_m, "M")?;
    let q = required(a.q, file.q, "q")?;
    let m = at_least(a.m.or(file.m).unwrap_or(50), 1, "m")?;
    let n = at_least(a.n.or(file.n).unwrap_or(100), 3, "n")?;
    let config = DEConfig {
        population_size: a.population.or(file.population).unwrap_or(50),
        max_evaluations: a.evals.or(file.evals).unwrap_or(100_000),
        seed: seed(a.seed, file.seed)?,
        parallel: a.parallel || file.parallel.unwrap_or(false),
        ..DEConfig::default()
    };
    config.validate()?;
    let radial_seed = !(a.no_radial_seed || file.no_radial_seed.unwrap_or(false));
    let out_mesh = a.out_mesh.or(file.out_mesh.clone()).unwrap_or_else(|| "mesh2d.obj".into());
    let out_trace = a.out_trace.or(file.out_trace.clone()).unwrap_or_else(|| "trace2d.csv".into());
    let out_json = a.out_json.or(file.out_json.clone());

    let res = solve_2d(big_m, q, m, n, &config, radial_seed)?;
    let bound = lower_bound(&Domain::Polygon { sides: n, radius: 1.0 }, big_m, LOWER_BOUND_QUAD_TOL)?;
    let cost = res.trace.final_cost;
    write_obj(&out_mesh, &res.mesh, q)?;
    write_trace_csv(&out_trace, &res.trace)?;
    if let Some(path) = &out_json {
        write_json(path, &MeshRecord::new(&res.mesh, cost, big_m, q, m))?;
    }

    line("final_cost", cost);
    match res.radial_cost {
        Some(r) => line("radial_cost", r),
        None => println!("{:<16} n/a", "radial_cost"),
    }
    line("lower_bound", bound);
    println!("{:<16} {}", "evaluations", res.trace.evaluations);
    println!("{:<16} {}", "generations", res.trace.generations);
    println!("{:<16} {}", "seed", res.trace.seed);
    println!("{:<16} {}", "mesh", out_mesh.display());
    println!("{:<16} {}", "trace", out_trace.display());
    if let Some(path) = &out_json {
        println!("{:<16} {}", "json", path.display());
    }
    check_bound(cost, bound)
}

/// A loaded profile ready for checking.
struct Loaded {
    domain: Domain,
    q: f64,
    /// Points and values for the discrete q-concavity test.
    grid: (Vec<f64>, Vec<f64>),
    radial: bool,
    value: Box<dyn Fn(&[f64]) -> f64>,
    gradient: Box<dyn Fn(&[f64]) -> Vec<f64>>,
    resistance: f64,
}

fn load_profile(path: &Path, q_flag: Option<f64>) -> Result<Loaded, Failure> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let rec: ProfileRecord = read_json(path)?;
        return Ok(match rec {
            ProfileRecord::Interval(rec) => {
                let p = rec.profile()?;
                let (xs, us) = p.sample(CHECK_GRID);
                Loaded {
                    domain: Domain::UNIT_INTERVAL,
                    q: q_flag.unwrap_or(rec.q),
                    grid: (xs, us),
                    radial: false,
                    value: Box::new(move |x: &[f64]| p.eval(x[0].clamp(-1.0, 1.0)).unwrap_or(f64::NAN)),
                    gradient: Box::new(move |x: &[f64]| vec![p.derivative(x[0])]),
                    resistance: p.resistance()?,
                }
            }
            ProfileRecord::Radial(rec) => {
                let sol = rec.solve(DEFAULT_SAMPLES_RADIAL)?;
                let grid = sol.samples().iter().map(|s| (s.r, s.u)).unzip();
                let resistance = sol.resistance()?;
                let sol2 = sol.clone();
                Loaded {
                    domain: Domain::Disk { radius: rec.radius },
                    q: q_flag.unwrap_or(rec.q),
                    grid,
                    radial: true,
                    value: Box::new(move |x: &[f64]| sol.eval(x[0].hypot(x[1]))),
                    gradient: Box::new(move |x: &[f64]| {
                        let r = x[0].hypot(x[1]);
                        if r == 0.0 {
                            return vec![0.0, 0.0];
                        }
                        let d = sol2.derivative(r);
                        vec![d * x[0] / r, d * x[1] / r]
                    }),
                    resistance,
                }
            }
        });
    }
    let text = std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let sp = read_profile_csv(&text[..])?;
    let q = q_flag.ok_or_else(|| Failure::Usage("--q is required for CSV profiles".into()))?;
    let pp = PiecewiseParabolic::new(&sp.xs, &sp.us, q)?;
    let radial = sp.is_radial();
    let domain = if radial {
        if pp.lo() != 0.0 {
            return Err(Failure::Usage(format!("radial profile must start at r = 0 (starts at {})", pp.lo())));
        }
        Domain::Disk { radius: pp.hi() }
    } else {
        Domain::Interval { lo: pp.lo(), hi: pp.hi() }
    };
    let resistance = if radial { pp.resistance_radial() } else { pp.resistance_1d() };
    let pp2 = pp.clone();
    Ok(Loaded {
        domain,
        q,
        grid: (sp.xs, sp.us),
        radial,
        value: Box::new(move |x: &[f64]| if radial { pp.disk_value(x) } else { pp.value(x[0]) }),
        gradient: Box::new(move |x: &[f64]| {
            if radial {
                pp2.disk_gradient(x)
            } else {
                vec![pp2.derivative(x[0])]
            }
        }),
        resistance,
    })
}

fn verify_cmd(a: VerifyArgs, file: &FileConfig) -> Result<(), Failure> {
    let checks_arg = a.check.or(file.check.clone()).unwrap_or_else(|| "qconcave,shock".into());
    let mut checks = Vec::new();
    for c in checks_arg.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        match c {
            "qconcave" | "shock" => checks.push(c),
            other => return Err(Failure::Usage(format!("unknown check `{other}` (expected qconcave, shock)"))),
        }
    }
    let rays = at_least(a.rays.or(file.rays).unwrap_or(10_000), 1, "rays")?;
    let tau_samples = at_least(a.tau_samples.or(file.tau_samples).unwrap_or(DEFAULT_TAU_SAMPLES), 1, "tau-samples")?;
    let tol = a.tol.or(file.tol).unwrap_or(1e-9);
    let seed = seed(a.seed, file.seed)?;
    let report_path = a.report.or(file.report.clone());

    let prof = load_profile(&a.file, a.q.or(file.q))?;
    println!("{:<16} {}", "profile", if prof.radial { "radial" } else { "interval" });
    line("q", prof.q);
    line("resistance", prof.resistance);

    let mut failed = Vec::new();
    for check in checks {
        match check {
            "qconcave" => {
                let ok = check_qconcave(&prof.grid.0, &prof.grid.1, prof.q, tol)?;
                println!("{:<16} {}", "qconcave", if ok { "pass" } else { "FAIL" });
                if !ok {
                    failed.push("qconcave");
                }
            }
            _ => {
                let report: ShockReport = check_single_shock(
                    &*prof.value,
                    Some(&*prof.gradient),
                    &prof.domain,
                    rays,
                    tau_samples,
                    seed,
                );
                println!(
                    "{:<16} {} ({} points, {} violations)",
                    "shock",
                    if report.pass { "pass" } else { "FAIL" },
                    report.tested_points,
                    report.violations.len()
                );
                for v in report.violations.iter().take(SHOWN_VIOLATIONS) {
                    let x: Vec<String> = v.x.iter().map(|&c| g12(c)).collect();
                    println!("  violation x=({}) tau={} deficit={}", x.join(", "), g12(v.tau), g12(v.deficit));
                }
                if report.violations.len() > SHOWN_VIOLATIONS {
                    println!("  ... {} more", report.violations.len() - SHOWN_VIOLATIONS);
                }
                if let Some(path) = &report_path {
                    write_json(path, &report)?;
                }
                if !report.pass {
                    failed.push("shock");
                }
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::g12;

    #[test]
    fn twelve_digits() {
        assert_eq!(g12(0.4), "0.4");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(g12(123456.0), "123456");
        assert_eq!(g12(-1.5), "-1.5");
        assert_eq!(g12(0.0), "0");
    }
}
