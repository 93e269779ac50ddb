//! Completely multiplicative unimodular coefficient functions.
//!
//! A [`CoefficientFunction`] stores `f(p)` on primes only; values at
//! composites are always derived from the factorization, so complete
//! multiplicativity holds by construction.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to, FactorTable};
use crate::error::{Error, Result};

/// Rounding slack for `Re f(n) conj(f(m)) >= 0`.
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFunction {
    label: String,
    limit: u64,
    prime_values: BTreeMap<u64, Complex64>,
}

/// Outcome of a bounded scan of the square-product positivity condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFWitness {
    pub passed: bool,
    /// First violating `(m, n)` in lexicographic order, if any.
    pub counterexample: Option<(u64, u64)>,
    /// All `m, n <= bound` were examined.
    pub bound: u64,
    pub pairs_checked: u64,
    pub min_real_part: f64,
}

impl CoefficientFunction {
    fn from_fn(label: String, limit: u64, mut value: impl FnMut(u64) -> Complex64) -> Self {
        let prime_values = primes_up_to(limit)
            .into_iter()
            .map(|p| (p, value(p)))
            .collect();
        Self {
            label,
            limit,
            prime_values,
        }
    }

    /// `f = 1`.
    pub fn constant_one(limit: u64) -> Self {
        Self::from_fn("one".into(), limit, |_| Complex64::new(1.0, 0.0))
    }

    /// `f(p) = +-1`, drawn per prime in ascending order from a ChaCha8 stream.
    pub fn pm_one(limit: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(format!("pm:{seed}"), limit, |_| {
            let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            Complex64::new(s, 0.0)
        })
    }

    /// `f(p) = exp(i * angle_p)`; primes without a listed angle get angle 0.
    pub fn from_phases(
        phases: &BTreeMap<u64, f64>,
        limit: u64,
        label: impl Into<String>,
    ) -> Result<Self> {
        for (&p, &angle) in phases {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p > limit {
                return Err(Error::PrimeBeyondLimit { p, limit });
            }
            if !angle.is_finite() {
                return Err(Error::NonFinitePhase { p });
            }
        }
        Ok(Self::from_fn(label.into(), limit, |p| {
            Complex64::from_polar(1.0, phases.get(&p).copied().unwrap_or(0.0))
        }))
    }

    pub fn from_phase_file(path: &Path, limit: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::PhaseParse {
            line: 0,
            msg: e.to_string(),
        })?;
        let phases = parse_phases(&text)?;
        Self::from_phases(&phases, limit, format!("phases:{}", path.display()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn prime_values(&self) -> &BTreeMap<u64, Complex64> {
        &self.prime_values
    }

    pub fn prime_value(&self, p: u64) -> Result<Complex64> {
        self.prime_values
            .get(&p)
            .copied()
            .ok_or(Error::PrimeBeyondLimit {
                p,
                limit: self.limit,
            })
    }

    /// True when every `f(p)` is exactly `+1` or `-1`, so that `f(n)` is an
    /// integer and sums against `chi_d` can be accumulated exactly.
    pub fn is_real_sign(&self) -> bool {
        self.prime_values
            .values()
            .all(|z| z.im == 0.0 && z.re.abs() == 1.0)
    }

    /// `f(n) = prod_p f(p)^{v_p(n)}`.
    pub fn evaluate(&self, table: &FactorTable, n: u64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for (p, e) in table.factorize(n)? {
            acc *= self.prime_value(p)?.powu(e);
        }
        Ok(acc)
    }

    /// `[f(0), f(1), ..., f(upto)]` with `f(0) = 0`, via `f(n) = f(spf(n)) f(n / spf(n))`.
    pub fn values_up_to(&self, table: &FactorTable, upto: u64) -> Result<Vec<Complex64>> {
        if upto > table.limit() && upto >= 2 {
            return Err(Error::BeyondTable {
                n: upto,
                limit: table.limit(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); upto as usize + 1];
        if upto >= 1 {
            out[1] = Complex64::new(1.0, 0.0);
        }
        for n in 2..=upto {
            let p = table.smallest_prime_factor(n).expect("within table");
            out[n as usize] = self.prime_value(p)? * out[(n / p) as usize];
        }
        Ok(out)
    }

    /// Certify `Re f(n) conj(f(m)) >= 0` for all `m, n <= bound` with `mn` a square.
    ///
    /// `mn` is a square exactly when `m` and `n` share a squarefree part, so the
    /// scan runs over pairs within each squarefree class. Pairs are visited in
    /// lexicographic `(m, n)` order and the first violation is reported.
    pub fn check_class_f(&self, table: &FactorTable, bound: u64) -> Result<ClassFWitness> {
        let values = self.values_up_to(table, bound)?;
        let kernels: Vec<u64> = (1..=bound)
            .map(|n| table.squarefree_decompose(n).map(|s| s.n1))
            .collect::<Result<_>>()?;
        let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for n in 1..=bound {
            classes.entry(kernels[n as usize - 1]).or_default().push(n);
        }

        let mut pairs_checked = 0u64;
        let mut min_real_part = f64::INFINITY;
        for m in 1..=bound {
            let fm = values[m as usize].conj();
            for &n in &classes[&kernels[m as usize - 1]] {
                pairs_checked += 1;
                let re = (values[n as usize] * fm).re;
                min_real_part = min_real_part.min(re);
                if re < -POSITIVITY_TOLERANCE {
                    return Ok(ClassFWitness {
                        passed: false,
                        counterexample: Some((m, n)),
                        bound,
                        pairs_checked,
                        min_real_part,
                    });
                }
            }
        }
        Ok(ClassFWitness {
            passed: true,
            counterexample: None,
            bound,
            pairs_checked,
            min_real_part,
        })
    }
}

/// Parse `p angle` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_phases(text: &str) -> Result<BTreeMap<u64, f64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::PhaseParse { line: i + 1, msg };
        let mut fields = line.split_whitespace();
        let (Some(p), Some(a), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `p angle`, got {line:?}")));
        };
        let p: u64 = p
            .parse()
            .map_err(|e| err(format!("bad prime {p:?}: {e}")))?;
        let a: f64 = a
            .parse()
            .map_err(|e| err(format!("bad angle {a:?}: {e}")))?;
        if out.insert(p, a).is_some() {
            return Err(err(format!("duplicate prime {p}")));
        }
    }
    Ok(out)
}
