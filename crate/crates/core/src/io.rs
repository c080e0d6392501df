//! File formats.
//!
//! * Increments: one value per line in `{:.16e}` (17 significant digits, so
//!   values read back bit-identical), after an optional header
//!   `# delta=<..> n=<..> seed=<..>`.
//! * Coefficients: a JSON document with the basis descriptor and the values.
//! * Draws: JSON lines `{"draw_index":..,"K":..,"theta":[..]}`.
//! * CSV summaries: comma separated, `.` decimal, header row always present.
//! * Config: flat `key = value` text, `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{LevyError, Result};
use crate::estimator::CoefficientVector;
use crate::harness::{ExperimentReport, RateRow};
use crate::posterior::{CredibleBand, MarginalK, PosteriorDraws};
use crate::process::{IncrementSeries, SamplingScheme};

/// Lossless decimal form of a float.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_increments<W: Write>(series: &IncrementSeries, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# delta={} n={} seed={}",
        fmt_f64(series.scheme.delta),
        series.scheme.n,
        series.seed
    )?;
    for v in &series.values {
        writeln!(out, "{}", fmt_f64(*v))?;
    }
    Ok(())
}

pub fn save_increments(series: &IncrementSeries, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    write_increments(series, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Increments plus whatever header metadata was present.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementFile {
    pub delta: Option<f64>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub values: Vec<f64>,
}

impl IncrementFile {
    /// Builds a series, taking `Δ` from the header or from `delta_override`.
    pub fn into_series(self, delta_override: Option<f64>) -> Result<IncrementSeries> {
        let delta = delta_override.or(self.delta).ok_or_else(|| {
            LevyError::parameter("the increment file has no delta header; pass delta explicitly")
        })?;
        let scheme = SamplingScheme::new(delta, self.values.len())?;
        IncrementSeries::new(scheme, self.values, self.seed.unwrap_or(0))
    }
}

pub fn read_increments<R: Read>(input: R) -> Result<IncrementFile> {
    let mut file = IncrementFile { delta: None, n: None, seed: None, values: Vec::new() };
    for (idx, line) in BufReader::new(input).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('#') {
            for token in header.split_whitespace() {
                let Some((key, value)) = token.split_once('=') else { continue };
                let bad = |e: &dyn std::fmt::Display| LevyError::Parse {
                    line: lineno,
                    message: format!("header field `{token}`: {e}"),
                };
                match key {
                    "delta" => file.delta = Some(value.parse().map_err(|e| bad(&e))?),
                    "n" => file.n = Some(value.parse().map_err(|e| bad(&e))?),
                    "seed" => file.seed = Some(value.parse().map_err(|e| bad(&e))?),
                    _ => {}
                }
            }
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|e| LevyError::Parse {
            line: lineno,
            message: format!("`{trimmed}` is not a number ({e})"),
        })?;
        file.values.push(v);
    }
    if let Some(n) = file.n {
        if n != file.values.len() {
            return Err(LevyError::Parse {
                line: 1,
                message: format!("header says n={n} but the file has {} values", file.values.len()),
            });
        }
    }
    Ok(file)
}

pub fn load_increments(path: &Path) -> Result<IncrementFile> {
    read_increments(fs::File::open(path)?)
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn save_coefficients(c: &CoefficientVector, path: &Path) -> Result<()> {
    save_json(c, path)
}

pub fn load_coefficients(path: &Path) -> Result<CoefficientVector> {
    let text = fs::read_to_string(path)?;
    let c: CoefficientVector = serde_json::from_str(&text).map_err(|e| LevyError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if c.values.len() != c.basis.k() {
        return Err(LevyError::Dimension { expected: c.basis.k(), got: c.values.len() });
    }
    Ok(c)
}

#[derive(Serialize)]
struct DrawRecord<'a> {
    draw_index: usize,
    #[serde(rename = "K")]
    k: usize,
    theta: &'a [f64],
}

pub fn write_draws<W: Write>(draws: &PosteriorDraws, mut out: W) -> Result<()> {
    for (i, d) in draws.draws.iter().enumerate() {
        let rec = DrawRecord { draw_index: i, k: d.k(), theta: &d.values };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `K,prob`, or `j,K,prob` when `j` is given.
pub fn k_posterior_csv(rows: &[(Option<u32>, &MarginalK)]) -> String {
    let with_j = rows.iter().any(|(j, _)| j.is_some());
    let mut s = String::from(if with_j { "j,K,prob\n" } else { "K,prob\n" });
    for (j, pmf) in rows {
        for (i, p) in pmf.probs.iter().enumerate() {
            if let Some(j) = j {
                let _ = write!(s, "{j},");
            }
            let _ = writeln!(s, "{},{}", i + 1, fmt_f64(*p));
        }
    }
    s
}

/// `x,psi_true,psi_mean,band_lo,band_hi` (the truth column only when given).
pub fn band_csv(band: &CredibleBand, psi_true: Option<&[f64]>) -> String {
    let mut s = String::from(if psi_true.is_some() {
        "x,psi_true,psi_mean,band_lo,band_hi\n"
    } else {
        "x,psi_mean,band_lo,band_hi\n"
    });
    for g in 0..band.center.x.len() {
        let _ = write!(s, "{},", fmt_f64(band.center.x[g]));
        if let Some(t) = psi_true {
            let _ = write!(s, "{},", fmt_f64(t[g]));
        }
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_f64(band.center.values[g]),
            fmt_f64(band.lower[g]),
            fmt_f64(band.upper[g])
        );
    }
    s
}

/// `x,psi_true,psi_mean,lo,hi` for one study regime.
pub fn study_band_csv(report: &ExperimentReport) -> String {
    let mut s = String::from("x,psi_true,psi_mean,lo,hi\n");
    for g in 0..report.grid.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_f64(report.grid[g]),
            fmt_f64(report.psi_true[g]),
            fmt_f64(report.psi_mean[g]),
            fmt_f64(report.band_lo[g]),
            fmt_f64(report.band_hi[g])
        );
    }
    s
}

/// `j,t_n,err_projection,err_postmean,eps_n,ratio`.
pub fn errors_csv(rows: &[RateRow]) -> String {
    let mut s = String::from("j,t_n,err_projection,err_postmean,eps_n,ratio\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.j,
            fmt_f64(r.t_n),
            fmt_f64(r.err_projection),
            fmt_f64(r.error),
            fmt_f64(r.eps_n),
            fmt_f64(r.ratio)
        );
    }
    s
}

/// Parses a flat `key = value` document. Later keys override earlier ones.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| LevyError::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(LevyError::Parse { line: idx + 1, message: "empty key".into() });
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}
