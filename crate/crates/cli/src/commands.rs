use std::fmt::Write as _;
use std::time::Instant;

use charsum_core::engine::{certificate, family_average, FamilyAverageReport};
use charsum_core::resonator::{
    lemma_ratio, LemmaRatio, ResonatorSpec, ResonatorSupport, MIN_LENGTH,
};
use rayon::ThreadPool;

use crate::config::{factor_table, ScanConfig};
use crate::error::{CliError, Result};
use crate::record::{ConfigEcho, Row, RunRecord, Summary, SCHEMA_VERSION};

pub fn thread_pool(threads: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Resource(e.to_string()))
}

/// Resonator for a scan: the windowed construction when `Y >= 16`, else `{1 -> 1}`.
fn scan_resonator(y: f64) -> Result<(Option<ResonatorSpec>, ResonatorSupport)> {
    if y >= MIN_LENGTH {
        let spec = ResonatorSpec::new(y)?;
        let support = spec.build_support()?;
        Ok((Some(spec), support))
    } else {
        Ok((None, ResonatorSupport::trivial()))
    }
}

/// Scan `X < |d| <= 2X`, certify the weighted-mean bound and persist the record
/// when an output path is configured.
pub fn run_scan(config: &ScanConfig) -> Result<RunRecord> {
    config.validate()?;
    let y = config.y();
    let (spec, support) = scan_resonator(y)?;
    // support keys factor over window primes only
    let largest_prime = spec
        .as_ref()
        .and_then(|s| s.window_primes().last().copied())
        .unwrap_or(1);
    let table = factor_table(config.n.max(largest_prime))?.with_trial_fallback(true);
    let f = config.coefficients.build(table.limit())?;

    let pool = thread_pool(config.threads)?;
    let start = Instant::now();
    let (cert, rows) = pool.install(|| certificate(&table, &support, &f, config.n, config.x))?;
    let wall = start.elapsed().as_secs_f64();

    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            x: config.x,
            n: config.n,
            delta: config.delta,
            eps: config.epsilon(),
            coefficients: config.coefficients.to_string(),
            y,
            y_overridden: config.y_override.is_some(),
            lambda: spec.map(|s| s.lambda()),
            support_size: support.len(),
            threads: config.threads,
        },
        rows: rows.iter().map(Row::from).collect(),
        summary: Summary::from_certificate(&cert, wall),
    };
    if let Some(path) = &config.output_path {
        record.save(path, config.format)?;
    }
    Ok(record)
}

pub fn format_summary(r: &RunRecord) -> String {
    let c = &r.config;
    let s = &r.summary;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "X = {}  N = {}  delta = {}  eps = {:e}  f = {}",
        c.x, c.n, c.delta, c.eps, c.coefficients
    );
    let _ = writeln!(
        out,
        "Y = {:.6}{}  lambda = {}  support = {}",
        c.y,
        if c.y_overridden { " (override)" } else { "" },
        c.lambda.map_or("-".to_string(), |l| format!("{l:.6}")),
        c.support_size
    );
    let _ = writeln!(out, "{:<24}{}", "family size", s.family_size);
    let _ = writeln!(out, "{:<24}{:.12e}", "S1", s.s1);
    let _ = writeln!(out, "{:<24}{:.12e}", "S2", s.s2);
    let _ = writeln!(out, "{:<24}{:.12}", "S2/S1", s.ratio);
    let _ = writeln!(out, "{:<24}{:.12}", "sqrt(S2/S1)", s.certified_lower_bound);
    let _ = writeln!(
        out,
        "{:<24}{:.12} (d = {})",
        "max |D_N|", s.observed_max, s.argmax_d
    );
    let _ = writeln!(
        out,
        "{:<24}{}",
        "benchmark",
        s.benchmark
            .map_or("undefined (log log(X/N^4) <= 0)".to_string(), |b| format!(
                "{b:.6}"
            ))
    );
    let _ = writeln!(
        out,
        "{:<24}{}",
        "inequality",
        if s.inequality_holds {
            "holds"
        } else {
            "VIOLATED"
        }
    );
    let _ = writeln!(out, "{:<24}{:.3}", "wall time (s)", s.wall_time_seconds);
    out
}

pub struct LemmaCheck {
    pub reports: Vec<FamilyAverageReport>,
    pub threshold: f64,
}

impl LemmaCheck {
    /// Every square `n` has relative deviation below the threshold.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| {
            r.relative_deviation()
                .is_none_or(|dev| dev < self.threshold)
        })
    }
}

pub fn verify_lemma(
    ns: &[u64],
    x: u64,
    eps: f64,
    threshold: f64,
    include_unit: bool,
    threads: usize,
) -> Result<LemmaCheck> {
    if ns.is_empty() {
        return Err(CliError::Usage("at least one n is required".into()));
    }
    if x == 0 {
        return Err(CliError::Usage("X must be positive".into()));
    }
    let table = factor_table(*ns.iter().max().expect("non-empty"))?;
    let pool = thread_pool(threads)?;
    let reports = pool.install(|| {
        ns.iter()
            .map(|&n| family_average(&table, n, x, eps, include_unit))
            .collect::<charsum_core::Result<Vec<_>>>()
    })?;
    Ok(LemmaCheck { reports, threshold })
}

pub fn format_lemma(check: &LemmaCheck) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>10} {:>10} {:>14} {:>16} {:>12} {:>12} {:>16}  status",
        "n", "X", "exact_sum", "main_term", "deviation", "rel_dev", "grh_envelope"
    );
    for r in &check.reports {
        let (rel, status) = match r.relative_deviation() {
            Some(v) => (
                format!("{v:.6}"),
                if v < check.threshold { "ok" } else { "MISS" },
            ),
            None => ("-".into(), "non-square"),
        };
        let _ = writeln!(
            out,
            "{:>10} {:>10} {:>14} {:>16.4} {:>12.4} {:>12} {:>16.4}  {}",
            r.n, r.x, r.exact_sum, r.main_term, r.deviation, rel, r.grh_envelope, status
        );
    }
    out
}

pub struct ResonatorInfo {
    pub spec: ResonatorSpec,
    pub window_primes: Vec<u64>,
    pub support_size: usize,
    pub ratio: LemmaRatio,
    pub n: u64,
}

pub fn resonator_info(y: f64, n: u64) -> Result<ResonatorInfo> {
    if n == 0 {
        return Err(CliError::Usage("N must be positive".into()));
    }
    let spec = ResonatorSpec::new(y)?;
    let support = spec.build_support()?;
    Ok(ResonatorInfo {
        spec,
        window_primes: spec.window_primes(),
        support_size: support.len(),
        ratio: lemma_ratio(&spec, &support, n),
        n,
    })
}

pub fn format_resonator_info(info: &ResonatorInfo) -> String {
    let (lo, hi) = info.spec.window();
    let r = &info.ratio;
    let mut out = String::new();
    let _ = writeln!(out, "{:<22}{}", "Y", info.spec.y());
    let _ = writeln!(out, "{:<22}{:.6}", "lambda", info.spec.lambda());
    let _ = writeln!(out, "{:<22}[{lo:.6}, {hi:.6}]", "window");
    let _ = writeln!(out, "{:<22}{:?}", "window primes", info.window_primes);
    let _ = writeln!(out, "{:<22}{}", "support size", info.support_size);
    let _ = writeln!(out, "{:<22}{:.12}", "self energy", r.self_energy);
    let _ = writeln!(out, "{:<22}{:.12}", "correlation sum", r.correlation_sum);
    let _ = writeln!(out, "{:<22}{:.12}", "ratio", r.ratio);
    let _ = writeln!(out, "{:<22}{:.6}", "N exp(2 sqrt(..))", r.rhs_benchmark);
    let _ = writeln!(
        out,
        "{:<22}{} (N = {})",
        "condition met", r.condition_met, info.n
    );
    out
}
