//! CSV and JSON records for solved profiles.
//!
//! CSV files have a header row and two columns (`x,u` for the interval,
//! `r,u` for radial profiles). JSON records keep their keys in field order.

use std::io::{Read, Write};
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile1d::Profile1D;
use crate::radial::{solve_radial, RadialProblem, RadialSolution};
use crate::verify::OracleResult;

/// Summary of a 1D solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile1DRecord {
    #[serde(rename = "M")]
    pub big_m: f64,
    pub q: f64,
    pub gamma_star: f64,
    pub resistance: f64,
}

impl Profile1DRecord {
    pub fn from_profile(p: &Profile1D<f64>) -> Result<Self> {
        Ok(Profile1DRecord {
            big_m: p.height(),
            q: p.q(),
            gamma_star: p.gamma_star(),
            resistance: p.resistance()?,
        })
    }

    pub fn profile(&self) -> Result<Profile1D<f64>> {
        Profile1D::from_parts(self.big_m, self.q, self.gamma_star)
    }
}

/// Summary of a radial solve. `resistance` is `∫ r dr / (1 + u'²)`, without
/// the factor `2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialRecord {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub q: f64,
    pub a_star: f64,
    pub eta_star: f64,
    pub resistance: f64,
}

impl RadialRecord {
    pub fn from_solution(sol: &RadialSolution<f64>) -> Result<Self> {
        let p = sol.problem();
        Ok(RadialRecord {
            radius: p.radius,
            big_m: p.height,
            q: p.q,
            a_star: sol.a_star(),
            eta_star: sol.eta_star(),
            resistance: sol.resistance()?,
        })
    }

    /// Solves the stored problem again; `a_star` and `eta_star` of the
    /// record are not trusted.
    pub fn solve(&self, n_samples: usize) -> Result<RadialSolution<f64>> {
        solve_radial(&RadialProblem::new(self.radius, self.big_m, self.q)?, n_samples)
    }
}

/// Either kind of profile summary, told apart by its keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileRecord {
    Radial(RadialRecord),
    Interval(Profile1DRecord),
}

/// Two-column sampled profile as read from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    /// `"x"` or `"r"`.
    pub abscissa: String,
    pub xs: Vec<f64>,
    pub us: Vec<f64>,
}

impl SampledProfile {
    pub fn is_radial(&self) -> bool {
        self.abscissa == "r"
    }
}

pub fn write_profile_csv<W: Write>(out: W, abscissa: &str, xs: &[f64], us: &[f64]) -> Result<()> {
    if xs.len() != us.len() {
        return Err(Error::Domain(format!("column lengths differ ({} and {})", xs.len(), us.len())));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record([abscissa, "u"])?;
    for (x, u) in xs.iter().zip(us) {
        w.write_record([x.to_string(), u.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile_csv<R: Read>(input: R) -> Result<SampledProfile> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rd.headers()?.clone();
    let abscissa = match (header.get(0), header.get(1), header.len()) {
        (Some(a @ ("x" | "r")), Some("u"), 2) => a.to_string(),
        _ => {
            return Err(Error::Parse(format!(
                "expected header `x,u` or `r,u`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            )))
        }
    };
    let (mut xs, mut us) = (Vec::new(), Vec::new());
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("");
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("row {}: `{field}` is not a finite number", line + 2)))
        };
        xs.push(parse(0)?);
        us.push(parse(1)?);
    }
    if xs.len() < 2 {
        return Err(Error::Parse(format!("need at least two rows, found {}", xs.len())));
    }
    Ok(SampledProfile { abscissa, xs, us })
}

pub fn write_oracle_csv<W: Write>(out: W, abscissa: &str, res: &OracleResult) -> Result<()> {
    write_profile_csv(out, abscissa, &res.nodes, &res.values)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
