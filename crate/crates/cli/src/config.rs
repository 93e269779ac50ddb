use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use charsum_core::arith::FactorTable;
use charsum_core::coefficients::CoefficientFunction;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Which coefficient function a scan uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientSpec {
    One,
    PlusMinus { seed: u64 },
    Phases { path: PathBuf },
}

impl FromStr for CoefficientSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "one" {
            return Ok(Self::One);
        }
        if let Some(seed) = s.strip_prefix("pm:") {
            let seed = seed
                .parse()
                .map_err(|e| CliError::Usage(format!("bad seed {seed:?}: {e}")))?;
            return Ok(Self::PlusMinus { seed });
        }
        if let Some(path) = s.strip_prefix("phases:") {
            if !path.is_empty() {
                return Ok(Self::Phases { path: path.into() });
            }
        }
        Err(CliError::Usage(format!(
            "coefficient spec must be one | pm:SEED | phases:PATH, got {s:?}"
        )))
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => f.write_str("one"),
            Self::PlusMinus { seed } => write!(f, "pm:{seed}"),
            Self::Phases { path } => write!(f, "phases:{}", path.display()),
        }
    }
}

impl CoefficientSpec {
    pub fn build(&self, limit: u64) -> Result<CoefficientFunction> {
        Ok(match self {
            Self::One => CoefficientFunction::constant_one(limit),
            Self::PlusMinus { seed } => CoefficientFunction::pm_one(limit, *seed),
            Self::Phases { path } => CoefficientFunction::from_phase_file(path, limit)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

/// Upper end of the admissible `delta` range.
pub const DELTA_MAX: f64 = 0.01;

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub x: u64,
    pub n: u64,
    pub delta: f64,
    /// Defaults to `delta / 100`.
    pub eps: Option<f64>,
    pub coefficients: CoefficientSpec,
    /// Overrides `X^{1/2 - delta} / N^2`.
    pub y_override: Option<f64>,
    pub threads: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl ScanConfig {
    pub fn new(x: u64, n: u64, delta: f64, coefficients: CoefficientSpec) -> Self {
        Self {
            x,
            n,
            delta,
            eps: None,
            coefficients,
            y_override: None,
            threads: 1,
            output_path: None,
            format: Format::Jsonl,
        }
    }

    /// `X^{1/2 - delta} / N^2`.
    pub fn derived_y(&self) -> f64 {
        (self.x as f64).powf(0.5 - self.delta) / (self.n as f64).powi(2)
    }

    pub fn y(&self) -> f64 {
        self.y_override.unwrap_or_else(|| self.derived_y())
    }

    pub fn epsilon(&self) -> f64 {
        self.eps.unwrap_or(self.delta / 100.0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Usage(m));
        if self.x == 0 || self.n == 0 {
            return bad("X and N must be positive".into());
        }
        if !(self.delta > 0.0 && self.delta < DELTA_MAX) {
            return bad(format!(
                "delta must lie in (0, {DELTA_MAX}), got {}",
                self.delta
            ));
        }
        let eps = self.epsilon();
        if !(eps > 0.0 && eps <= self.delta / 100.0) {
            return bad(format!(
                "epsilon must lie in (0, delta/100 = {}], got {eps}",
                self.delta / 100.0
            ));
        }
        let y = self.y();
        if !y.is_finite() || y < 1.0 {
            return bad(format!(
                "resonator length Y = {y} is below 1 (X = {}, N = {}, delta = {})",
                self.x, self.n, self.delta
            ));
        }
        if self.threads == 0 {
            return bad("threads must be positive".into());
        }
        Ok(())
    }
}

/// A factor table covering `limit`, honouring the default memory budget.
pub fn factor_table(limit: u64) -> Result<FactorTable> {
    Ok(FactorTable::new(limit.max(2))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_specs() {
        assert_eq!(
            "one".parse::<CoefficientSpec>().unwrap(),
            CoefficientSpec::One
        );
        assert_eq!(
            "pm:42".parse::<CoefficientSpec>().unwrap(),
            CoefficientSpec::PlusMinus { seed: 42 }
        );
        assert_eq!(
            "phases:a/b.txt".parse::<CoefficientSpec>().unwrap(),
            CoefficientSpec::Phases {
                path: "a/b.txt".into()
            }
        );
        for bad in ["", "two", "pm:", "pm:x", "phases:"] {
            assert!(bad.parse::<CoefficientSpec>().is_err(), "{bad}");
        }
        assert_eq!(CoefficientSpec::PlusMinus { seed: 3 }.to_string(), "pm:3");
    }

    #[test]
    fn derived_length_rejections() {
        // 100^{0.491} / 2500 < 1
        let c = ScanConfig::new(100, 50, 0.009, CoefficientSpec::One);
        assert!(c.derived_y() < 1.0);
        assert!(matches!(c.validate(), Err(CliError::Usage(_))));
        let mut c = ScanConfig::new(2000, 30, 0.009, CoefficientSpec::One);
        assert!(c.validate().is_err());
        c.y_override = Some(1e6);
        c.validate().unwrap();
        let c = ScanConfig::new(10_000_000, 3, 0.009, CoefficientSpec::One);
        assert!(c.derived_y() > 16.0);
        c.validate().unwrap();
    }

    #[test]
    fn parameter_ranges() {
        let mut c = ScanConfig::new(1_000_000, 2, 0.009, CoefficientSpec::One);
        c.validate().unwrap();
        assert_eq!(c.epsilon(), 0.009 / 100.0);
        c.eps = Some(0.01);
        assert!(c.validate().is_err());
        c.eps = Some(0.00005);
        c.validate().unwrap();
        c.delta = 0.01;
        assert!(c.validate().is_err());
        c.delta = 0.0;
        assert!(c.validate().is_err());
    }
}
