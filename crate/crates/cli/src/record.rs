//! Persisted run records.
//!
//! JSONL layout, one object per line:
//!
//! ```text
//! {"schema_version":1,"config":{...}}
//! {"d":-3,"re":1.0,"im":0.0,"abs":1.0,"w":2.25}
//! ...
//! {"summary":{...}}
//! ```
//!
//! CSV layout: a `d,re,im,abs,w` table, with the header object and summary
//! written to a sibling `<file>.summary.json`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use charsum_core::arith::FundamentalDiscriminant;
use charsum_core::engine::{certify, CertificateReport, CharSumReport};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub d: i64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub w: f64,
}

impl From<&CharSumReport> for Row {
    fn from(r: &CharSumReport) -> Self {
        Self {
            d: r.d.get(),
            re: r.d_n.re,
            im: r.d_n.im,
            abs: r.abs_d_n,
            w: r.weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub x: u64,
    pub n: u64,
    pub delta: f64,
    pub eps: f64,
    pub coefficients: String,
    pub y: f64,
    pub y_overridden: bool,
    pub lambda: Option<f64>,
    pub support_size: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub s1: f64,
    pub s2: f64,
    pub ratio: f64,
    pub certified_lower_bound: f64,
    pub observed_max: f64,
    pub argmax_d: i64,
    pub benchmark: Option<f64>,
    pub family_size: u64,
    pub inequality_holds: bool,
    pub wall_time_seconds: f64,
}

impl Summary {
    pub fn from_certificate(c: &CertificateReport, wall_time_seconds: f64) -> Self {
        Self {
            s1: c.s1,
            s2: c.s2,
            ratio: c.ratio,
            certified_lower_bound: c.certified_lower_bound,
            observed_max: c.observed_max,
            argmax_d: c.argmax_d.get(),
            benchmark: c.benchmark,
            family_size: c.family_size,
            inequality_holds: c.holds(),
            wall_time_seconds,
        }
    }

    /// Same statistics within `tol` relative; wall time is ignored.
    pub fn agrees_with(&self, other: &Summary, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs());
        close(self.s1, other.s1)
            && close(self.s2, other.s2)
            && close(self.ratio, other.ratio)
            && close(self.certified_lower_bound, other.certified_lower_bound)
            && close(self.observed_max, other.observed_max)
            && self.argmax_d == other.argmax_d
            && self.family_size == other.family_size
            && self.inequality_holds == other.inequality_holds
            && match (self.benchmark, other.benchmark) {
                (Some(a), Some(b)) => close(a, b),
                (None, None) => true,
                _ => false,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema_version: u32,
    config: ConfigEcho,
}

#[derive(Serialize, Deserialize)]
struct SummaryLine {
    summary: Summary,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    schema_version: u32,
    config: ConfigEcho,
    summary: Summary,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

impl RunRecord {
    /// Rebuild the summary statistics from the rows alone.
    pub fn recompute_summary(&self) -> Result<Summary> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let d = FundamentalDiscriminant::new(r.d)
                    .map_err(|e| CliError::Record(e.to_string()))?;
                Ok((d, Complex64::new(r.re, r.im), r.w))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = certify(rows, self.config.n, self.config.x)
            .map_err(|e| CliError::Record(e.to_string()))?;
        Ok(Summary::from_certificate(
            &c,
            self.summary.wall_time_seconds,
        ))
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(
            &mut w,
            &Header {
                schema_version: self.schema_version,
                config: self.config.clone(),
            },
        )?;
        writeln!(w)?;
        for row in &self.rows {
            serde_json::to_writer(&mut w, row)?;
            writeln!(w)?;
        }
        serde_json::to_writer(
            &mut w,
            &SummaryLine {
                summary: self.summary.clone(),
            },
        )?;
        writeln!(w)?;
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<Header> = None;
        let mut summary: Option<Summary> = None;
        let mut rows = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: serde_json::Value = serde_json::from_str(&line)?;
            if v.get("summary").is_some() {
                summary = Some(serde_json::from_value::<SummaryLine>(v)?.summary);
            } else if v.get("schema_version").is_some() {
                header = Some(serde_json::from_value(v)?);
            } else if summary.is_some() {
                return Err(CliError::Record(format!(
                    "line {}: row after summary",
                    i + 1
                )));
            } else {
                rows.push(serde_json::from_value(v)?);
            }
        }
        let header = header.ok_or_else(|| CliError::Record("missing header line".into()))?;
        check_version(header.schema_version)?;
        let summary = summary.ok_or_else(|| CliError::Record("missing summary line".into()))?;
        Ok(Self {
            schema_version: header.schema_version,
            config: header.config,
            rows,
            summary,
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        let sidecar = Sidecar {
            schema_version: self.schema_version,
            config: self.config.clone(),
            summary: self.summary.clone(),
        };
        let f = BufWriter::new(File::create(sidecar_path(path))?);
        serde_json::to_writer_pretty(f, &sidecar)?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<Row>, _>>()?;
        let sidecar: Sidecar =
            serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
        check_version(sidecar.schema_version)?;
        Ok(Self {
            schema_version: sidecar.schema_version,
            config: sidecar.config,
            rows,
            summary: sidecar.summary,
        })
    }

    pub fn save(&self, path: &Path, format: Format) -> Result<()> {
        match format {
            Format::Jsonl => {
                let mut w = BufWriter::new(File::create(path)?);
                self.write_jsonl(&mut w)?;
                w.flush()?;
                Ok(())
            }
            Format::Csv => self.write_csv(path),
        }
    }

    pub fn load(path: &Path, format: Format) -> Result<Self> {
        match format {
            Format::Jsonl => Self::read_jsonl(BufReader::new(File::open(path)?)),
            Format::Csv => Self::read_csv(path),
        }
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Record(format!("unsupported schema_version {v}")))
    }
}
