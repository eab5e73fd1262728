use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

/// Values read from `--config FILE`. Keys are the flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    #[serde(rename = "M")]
    pub big_m: Option<f64>,
    pub q: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub evals: Option<usize>,
    pub population: Option<usize>,
    pub seed: Option<u64>,
    pub parallel: Option<bool>,
    pub no_radial_seed: Option<bool>,
    pub out: Option<PathBuf>,
    pub out_mesh: Option<PathBuf>,
    pub out_trace: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub check: Option<String>,
    pub rays: Option<usize>,
    pub tau_samples: Option<usize>,
    pub tol: Option<f64>,
    pub report: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Flag, else config file, else an error naming the flag.
pub fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, Failure> {
    flag.or(file).ok_or_else(|| Failure::Usage(format!("--{name} is required (flag or config key `{name}`)")))
}

/// Flag, else config file, else `NEWTRES_SEED`, else 1.
pub fn seed(flag: Option<u64>, file: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var("NEWTRES_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("NEWTRES_SEED = `{v}` is not an unsigned integer"))),
        Err(_) => Ok(1),
    }
}
