use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::dyadic_family;
use crate::arith::{kronecker, FactorTable, FundamentalDiscriminant};
use crate::coefficients::CoefficientFunction;
use crate::error::{Error, Result};
use crate::resonator::ResonatorSupport;
use crate::sum::CompensatedSum;

/// Relative slack allowed on `max |D_N| >= sqrt(S2 / S1)`.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharSumReport {
    pub d: FundamentalDiscriminant,
    /// `D_N(f, d) = sum_{n <= N} f(n) chi_d(n)`.
    pub d_n: Complex64,
    pub abs_d_n: f64,
    /// `R_d = sum_n f(n) r(n) chi_d(n)` over the resonator support.
    pub r_d: Complex64,
    /// `|R_d|^2`.
    pub weight: f64,
}

enum Coefficients {
    /// `f(n) in {-1, +1}`; sums stay in the integers.
    Sign(Vec<i8>),
    Complex(Vec<Complex64>),
}

/// Per-discriminant evaluator of `D_N(f, d)` and `R_d`.
///
/// Everything depending only on `f`, `N` and the support is computed once;
/// per-`d` work is pure, so a family can be scanned in parallel.
pub struct Scanner<'a> {
    table: &'a FactorTable,
    n: u64,
    coeffs: Coefficients,
    /// `(k, f(k) r(k))` over the support
    twisted: Vec<(u64, Complex64)>,
}

impl<'a> Scanner<'a> {
    pub fn new(
        table: &'a FactorTable,
        f: &CoefficientFunction,
        support: &ResonatorSupport,
        n: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let values = f.values_up_to(table, n)?;
        let coeffs = if f.is_real_sign() {
            Coefficients::Sign(values.iter().map(|z| z.re as i8).collect())
        } else {
            Coefficients::Complex(values)
        };
        let twisted = support
            .entries()
            .iter()
            .map(|&(k, w)| Ok((k, f.evaluate(table, k)? * w)))
            .collect::<Result<_>>()?;
        Ok(Self {
            table,
            n,
            coeffs,
            twisted,
        })
    }

    pub fn length(&self) -> u64 {
        self.n
    }

    /// `chi_d(1..=N)` from `chi_d` on primes and the smallest-prime-factor table.
    fn characters(&self, d: FundamentalDiscriminant) -> Vec<i8> {
        let n = self.n as usize;
        let mut chi = vec![0i8; n + 1];
        chi[1] = 1;
        for k in 2..=n {
            let p = self
                .table
                .smallest_prime_factor(k as u64)
                .expect("table covers N") as usize;
            chi[k] = if p == k {
                d.chi(k as u64)
            } else {
                chi[p] * chi[k / p]
            };
        }
        chi
    }

    pub fn char_sum(&self, d: FundamentalDiscriminant) -> Complex64 {
        let chi = self.characters(d);
        match &self.coeffs {
            Coefficients::Sign(f) => {
                let s: i64 = chi
                    .iter()
                    .zip(f)
                    .skip(1)
                    .map(|(&c, &v)| i64::from(c * v))
                    .sum();
                Complex64::new(s as f64, 0.0)
            }
            Coefficients::Complex(f) => {
                let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
                for (&c, v) in chi.iter().zip(f).skip(1) {
                    if c != 0 {
                        re += f64::from(c) * v.re;
                        im += f64::from(c) * v.im;
                    }
                }
                Complex64::new(re.value(), im.value())
            }
        }
    }

    pub fn resonator_value(&self, d: FundamentalDiscriminant) -> Complex64 {
        let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
        for &(k, w) in &self.twisted {
            let c = f64::from(kronecker(d.get(), k));
            if c != 0.0 {
                re += c * w.re;
                im += c * w.im;
            }
        }
        Complex64::new(re.value(), im.value())
    }

    pub fn report(&self, d: FundamentalDiscriminant) -> CharSumReport {
        let d_n = self.char_sum(d);
        let r_d = self.resonator_value(d);
        CharSumReport {
            d,
            d_n,
            abs_d_n: d_n.norm(),
            r_d,
            weight: r_d.norm_sqr(),
        }
    }

    /// Reports in family order, computed in parallel.
    pub fn scan(&self, family: &[FundamentalDiscriminant]) -> Vec<CharSumReport> {
        family.par_iter().map(|&d| self.report(d)).collect()
    }
}

/// `D_N(f, d)` for a single discriminant.
pub fn coeff_char_sum(
    table: &FactorTable,
    f: &CoefficientFunction,
    d: FundamentalDiscriminant,
    n: u64,
) -> Result<Complex64> {
    Ok(Scanner::new(table, f, &ResonatorSupport::trivial(), n)?.char_sum(d))
}

/// `S1 = sum_{x < |d| <= 2x} |R_d|^2`, by direct enumeration.
pub fn compute_s1(
    table: &FactorTable,
    support: &ResonatorSupport,
    f: &CoefficientFunction,
    x: u64,
) -> Result<f64> {
    let family = dyadic_family(x, false)?;
    let scanner = Scanner::new(table, f, support, 1)?;
    let w: Vec<f64> = family
        .par_iter()
        .map(|&d| scanner.resonator_value(d).norm_sqr())
        .collect();
    Ok(w.into_iter().sum::<CompensatedSum>().value())
}

/// `S2 = sum_{x < |d| <= 2x} |D_N(f, d)|^2 |R_d|^2`, by direct enumeration.
pub fn compute_s2(
    table: &FactorTable,
    support: &ResonatorSupport,
    f: &CoefficientFunction,
    n: u64,
    x: u64,
) -> Result<f64> {
    let family = dyadic_family(x, false)?;
    let rows = Scanner::new(table, f, support, n)?.scan(&family);
    Ok(rows
        .iter()
        .map(|r| r.d_n.norm_sqr() * r.weight)
        .sum::<CompensatedSum>()
        .value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub s1: f64,
    pub s2: f64,
    pub ratio: f64,
    /// `sqrt(S2 / S1)`.
    pub certified_lower_bound: f64,
    pub observed_max: f64,
    pub argmax_d: FundamentalDiscriminant,
    /// `sqrt(N) exp((sqrt 2 / 2) sqrt(log(X/N^4) / log log(X/N^4)))`, when defined.
    pub benchmark: Option<f64>,
    pub family_size: u64,
}

impl CertificateReport {
    /// `observed_max >= sqrt(S2 / S1)` up to [`CERTIFICATE_TOLERANCE`].
    pub fn holds(&self) -> bool {
        self.observed_max >= self.certified_lower_bound * (1.0 - CERTIFICATE_TOLERANCE)
    }
}

/// Extreme-value benchmark curve at `(X, N)`; `None` when `log log(X/N^4) <= 0`.
pub fn benchmark_curve(x: u64, n: u64) -> Option<f64> {
    let z = x as f64 / (n as f64).powi(4);
    let ll = z.ln().ln();
    (ll > 0.0)
        .then(|| (n as f64).sqrt() * (std::f64::consts::FRAC_1_SQRT_2 * (z.ln() / ll).sqrt()).exp())
}

/// Reduce `(d, D_N, |R_d|^2)` rows, in the given order, into a certificate.
///
/// The argmax keeps the first maximal row, so rows in family order give the
/// smallest `|d|` with positive `d` first on ties.
pub fn certify<I>(rows: I, n: u64, x: u64) -> Result<CertificateReport>
where
    I: IntoIterator<Item = (FundamentalDiscriminant, Complex64, f64)>,
{
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    let mut best: Option<(f64, FundamentalDiscriminant)> = None;
    let mut count = 0u64;
    for (d, d_n, w) in rows {
        count += 1;
        s1 += w;
        s2 += d_n.norm_sqr() * w;
        let a = d_n.norm();
        if best.is_none_or(|(m, _)| a > m) {
            best = Some((a, d));
        }
    }
    let Some((observed_max, argmax_d)) = best else {
        return Err(Error::EmptyFamily {
            lo: x + 1,
            hi: 2 * x,
        });
    };
    let (s1, s2) = (s1.value(), s2.value());
    let ratio = s2 / s1;
    Ok(CertificateReport {
        s1,
        s2,
        ratio,
        certified_lower_bound: ratio.sqrt(),
        observed_max,
        argmax_d,
        benchmark: benchmark_curve(x, n),
        family_size: count,
    })
}

/// Scan `x < |d| <= 2x` and certify `max |D_N| >= sqrt(S2 / S1)`.
pub fn certificate(
    table: &FactorTable,
    support: &ResonatorSupport,
    f: &CoefficientFunction,
    n: u64,
    x: u64,
) -> Result<(CertificateReport, Vec<CharSumReport>)> {
    let family = dyadic_family(x, false)?;
    let rows = Scanner::new(table, f, support, n)?.scan(&family);
    let cert = certify(rows.iter().map(|r| (r.d, r.d_n, r.weight)), n, x)?;
    Ok((cert, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::partial_char_sum;
    use crate::resonator::ResonatorSpec;
    use std::collections::BTreeMap;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    #[test]
    fn coeff_sum_examples() {
        let t = FactorTable::new(1000).unwrap();
        let one = CoefficientFunction::constant_one(1000);
        assert_eq!(
            coeff_char_sum(&t, &one, fd(5), 4).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let phases: BTreeMap<u64, f64> = [(2, 1.1), (3, 0.4)].into_iter().collect();
        let g = CoefficientFunction::from_phases(&phases, 1000, "g").unwrap();
        for f in [&one, &g] {
            for d in [5, -4, 8, -3] {
                assert_eq!(
                    coeff_char_sum(&t, f, fd(d), 1).unwrap(),
                    Complex64::new(1.0, 0.0)
                );
            }
        }
        let mut pm = BTreeMap::new();
        pm.insert(2, std::f64::consts::PI);
        let h = CoefficientFunction::from_phases(&pm, 1000, "f(2)=-1").unwrap();
        // 1 + f(2) chi_5(2) = 1 + (-1)(-1)
        let v = coeff_char_sum(&t, &h, fd(5), 2).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_one_matches_partial_sums() {
        let t = FactorTable::new(500).unwrap();
        let one = CoefficientFunction::constant_one(500);
        let s = Scanner::new(&t, &one, &ResonatorSupport::trivial(), 500).unwrap();
        for d in dyadic_family(150, false).unwrap() {
            let v = s.char_sum(d);
            assert_eq!(v.im, 0.0);
            assert_eq!(v.re, partial_char_sum(d, 500) as f64);
        }
    }

    #[test]
    fn s1_examples() {
        let t = FactorTable::new(1000).unwrap();
        let one = CoefficientFunction::constant_one(1000);
        let s1 = compute_s1(&t, &ResonatorSupport::trivial(), &one, 100).unwrap();
        assert_eq!(s1, 61.0);
        // sum_d (1 + chi_d(7))^2 over 100 < |d| <= 200
        let sup = ResonatorSupport::from_entries(vec![(1, 1.0), (7, 1.0)]).unwrap();
        assert_eq!(compute_s1(&t, &sup, &one, 100).unwrap(), 123.0);
        let oracle: f64 = dyadic_family(100, false)
            .unwrap()
            .iter()
            .map(|d| (1.0 + f64::from(kronecker(d.get(), 7))).powi(2))
            .sum();
        assert_eq!(oracle, 123.0);
        assert_eq!(
            compute_s1(&t, &sup, &one, 1).unwrap_err(),
            Error::EmptyFamily { lo: 2, hi: 2 }
        );
    }

    #[test]
    fn s2_examples() {
        let t = FactorTable::new(1000).unwrap();
        let one = CoefficientFunction::constant_one(1000);
        let triv = ResonatorSupport::trivial();
        // brute-force oracle value at X = 200, N = 20
        assert_eq!(compute_s2(&t, &triv, &one, 20, 200).unwrap(), 2585.0);
        let spec = ResonatorSpec::new(1e4).unwrap();
        let sup = spec.build_support().unwrap();
        let f = CoefficientFunction::pm_one(1000, 9);
        assert_eq!(
            compute_s2(&t, &sup, &f, 1, 300).unwrap(),
            compute_s1(&t, &sup, &f, 300).unwrap()
        );
    }

    #[test]
    fn certificate_small() {
        let t = FactorTable::new(1_000_000).unwrap();
        let spec = ResonatorSpec::new(1e6).unwrap();
        let sup = spec.build_support().unwrap();
        let one = CoefficientFunction::constant_one(1_000_000);
        let (c, rows) = certificate(&t, &sup, &one, 1, 500).unwrap();
        assert_eq!(c.certified_lower_bound, 1.0);
        assert_eq!(c.observed_max, 1.0);
        assert_eq!(rows.len() as u64, c.family_size);
        let (c, rows) = certificate(&t, &sup, &one, 30, 2000).unwrap();
        assert!(c.holds());
        let max2 = rows.iter().map(|r| r.d_n.norm_sqr()).fold(0.0, f64::max);
        assert!(c.s2 <= max2 * c.s1 * (1.0 + 1e-12));
        assert!(c.benchmark.is_none());
        // argmax is the first row attaining the max
        let first = rows.iter().find(|r| r.abs_d_n == c.observed_max).unwrap();
        assert_eq!(first.d, c.argmax_d);
    }

    #[test]
    fn benchmark_values() {
        // sqrt(10) exp((sqrt 2/2) sqrt(log 100 / log log 100))
        let b = benchmark_curve(1_000_000, 10).unwrap();
        assert!((b - 10.796175342848018).abs() < 1e-9);
        assert!(benchmark_curve(2000, 30).is_none());
    }
}
