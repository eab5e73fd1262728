use std::path::Path;
use std::process::{Command, Output};

use newtres::io::{read_json, read_profile_csv, Profile1DRecord};
use newtres::profile1d::solve_1d;

fn newtres(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newtres"))
        .args(args)
        .current_dir(dir)
        .env_remove("NEWTRES_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value printed after `key` on its own line.
fn field(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.collect::<Vec<_>>().join(" "))
        })
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{}", stdout(o)))
}

#[test]
fn solve_1d_prints_and_writes() {
    let dir = tempfile::tempdir().unwrap();
    let o = newtres(dir.path(), &["solve-1d", "--M", "0.5", "--q", "1", "--out", "p"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&o, "gamma_star"), "0.690738134957");
    assert_eq!(field(&o, "resistance"), "1.38011752453");
    assert!(dir.path().join("p.csv").exists());
    let rec: Profile1DRecord = read_json(dir.path().join("p.json")).unwrap();
    assert_eq!(rec.big_m, 0.5);

    let flat = newtres(dir.path(), &["solve-1d", "--M", "2", "--q", "0.5", "--out", "flat"]);
    assert_eq!(field(&flat, "gamma_star"), "0");
    assert_eq!(field(&flat, "resistance"), "0.4");
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = newtres(dir.path(), &["solve-1d", "--M", "0.5", "--q", "1", "--out", "p"]);
    assert!(o.status.success());
    let exact = solve_1d(0.5, 1.0).unwrap();
    let csv = read_profile_csv(std::fs::File::open(dir.path().join("p.csv")).unwrap()).unwrap();
    // the grid plus the two kinks
    assert!(csv.xs.len() >= 1001);
    for (x, u) in csv.xs.iter().zip(&csv.us) {
        assert!((exact.eval(*x).unwrap() - u).abs() < 1e-6, "x = {x}");
    }
    let rec: Profile1DRecord = read_json(dir.path().join("p.json")).unwrap();
    assert!((rec.profile().unwrap().resistance().unwrap() - exact.resistance().unwrap()).abs() < 1e-6);

    for file in ["p.csv", "p.json"] {
        let v = newtres(dir.path(), &["verify", file, "--q", "1", "--rays", "2000"]);
        assert_eq!(v.status.code(), Some(0), "{file}: {}", stdout(&v));
        assert_eq!(field(&v, "qconcave"), "pass");
        assert!(field(&v, "shock").starts_with("pass"));
        let r: f64 = field(&v, "resistance").parse().unwrap();
        assert!((r - exact.resistance().unwrap()).abs() < 1e-6, "{file}: {r}");
    }
}

#[test]
fn radial_solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = newtres(dir.path(), &["solve-radial", "--M", "0.5", "--q", "1", "--out", "rad"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&o, "a_star"), "0.723736014755");
    for file in ["rad.csv", "rad.json"] {
        let v = newtres(dir.path(), &["verify", file, "--q", "1", "--rays", "1000"]);
        assert_eq!(v.status.code(), Some(0), "{file}: {}", stdout(&v));
        assert_eq!(field(&v, "profile"), "radial");
    }
    let low = newtres(dir.path(), &["solve-radial", "--M", "0.4", "--q", "1"]);
    assert_eq!(low.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // 2M < q
    assert_eq!(newtres(dir.path(), &["solve-1d", "--M", "0.1", "--q", "1"]).status.code(), Some(2));
    assert_eq!(newtres(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(newtres(dir.path(), &["solve-1d", "--q", "1"]).status.code(), Some(2));
    assert_eq!(
        newtres(dir.path(), &["solve-2d", "--M", "1", "--q", "0.4", "--m", "0"]).status.code(),
        Some(2)
    );

    std::fs::write(dir.path().join("bad.csv"), "x,u\n0,1\n1,oops\n").unwrap();
    assert_eq!(newtres(dir.path(), &["verify", "bad.csv", "--q", "0"]).status.code(), Some(2));

    // (q/2)r² with q diam = 3 is q-concave but not single-shock
    let mut text = String::from("r,u\n");
    for i in 0..=200 {
        let r = i as f64 / 200.0;
        text.push_str(&format!("{r},{}\n", 0.75 * r * r));
    }
    std::fs::write(dir.path().join("para.csv"), text).unwrap();
    let v = newtres(dir.path(), &["verify", "para.csv", "--q", "1.5", "--check", "shock", "--rays", "500"]);
    assert_eq!(v.status.code(), Some(1), "{}", stdout(&v));
    assert!(field(&v, "shock").starts_with("FAIL"));
}

#[test]
fn solve_2d_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let mesh = format!("{tag}.obj");
        let trace = format!("{tag}.csv");
        let args = [
            "solve-2d", "--M", "1", "--q", "0.4", "--m", "6", "--n", "24", "--evals", "3000", "--population", "20",
            "--seed", "11", "--out-mesh", &mesh, "--out-trace", &trace,
        ];
        let o = newtres(dir.path(), &args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let read = |p: &str| std::fs::read_to_string(dir.path().join(p)).unwrap();
        (read(&mesh), read(&trace), field(&o, "final_cost"))
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);
    assert!(a.1.starts_with("evaluation_count,best_cost\n"));
    let costs: Vec<f64> = a.1.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(costs.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "M = 0.5\nq = 0.2\nout = \"cfg\"\n").unwrap();
    let from_file = newtres(dir.path(), &["--config", "run.toml", "solve-1d"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    let plain = newtres(dir.path(), &["solve-1d", "--M", "0.5", "--q", "0.2"]);
    assert_eq!(field(&from_file, "resistance"), field(&plain, "resistance"));
    assert!(dir.path().join("cfg.csv").exists());

    let overridden = newtres(dir.path(), &["--config", "run.toml", "solve-1d", "--q", "1"]);
    assert_eq!(field(&overridden, "gamma_star"), "0.690738134957");

    std::fs::write(dir.path().join("typo.toml"), "M = 0.5\nqq = 1\n").unwrap();
    assert_eq!(newtres(dir.path(), &["--config", "typo.toml", "solve-1d"]).status.code(), Some(2));
}
