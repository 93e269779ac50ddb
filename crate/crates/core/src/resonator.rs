//! Resonator weights and the `an = bm` correlation sum.
//!
//! For a length `Y` put `lambda = sqrt(log Y * log log Y)` and let
//! `r` be the multiplicative function supported on squarefree integers with
//!
//! ```text
//! r(p) = lambda / (sqrt(p) log p)   if lambda <= p <= exp((log lambda)^2),
//! r(p) = 0                          otherwise.
//! ```
//!
//! The support of `r` restricted to `n <= Y` is finite and small at desk
//! scale, so it is stored explicitly as sorted `(n, r(n))` pairs.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::sum::{compensated_sum, CompensatedSum};

pub const DEFAULT_SUPPORT_CAP: usize = 1 << 20;
pub const MIN_LENGTH: f64 = 16.0;

/// `sqrt(log y * log log y)`; real for `y >= e`.
pub fn resonance_lambda(y: f64) -> f64 {
    let log_y = y.ln();
    (log_y * log_y.ln()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorSpec {
    y: f64,
    lambda: f64,
    window_lo: f64,
    window_hi: f64,
}

impl ResonatorSpec {
    pub fn new(y: f64) -> Result<Self> {
        if !y.is_finite() || y < MIN_LENGTH {
            return Err(Error::ResonatorTooShort(y));
        }
        let lambda = resonance_lambda(y);
        let window_hi = lambda.ln().powi(2).exp();
        Ok(Self {
            y,
            lambda,
            window_lo: lambda,
            window_hi,
        })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Inclusive prime window `[lambda, exp((log lambda)^2)]`; may be empty.
    pub fn window(&self) -> (f64, f64) {
        (self.window_lo, self.window_hi)
    }

    fn in_window(&self, p: u64) -> bool {
        let x = p as f64;
        self.window_lo <= x && x <= self.window_hi
    }

    pub fn window_primes(&self) -> Vec<u64> {
        if self.window_hi < self.window_lo {
            return Vec::new();
        }
        primes_up_to(self.window_hi.floor() as u64)
            .into_iter()
            .filter(|&p| self.in_window(p))
            .collect()
    }

    /// `r(p)` for a prime `p`.
    pub fn r_coeff(&self, p: u64) -> f64 {
        if self.in_window(p) {
            let x = p as f64;
            self.lambda / (x.sqrt() * x.ln())
        } else {
            0.0
        }
    }

    pub fn build_support(&self) -> Result<ResonatorSupport> {
        self.build_support_capped(DEFAULT_SUPPORT_CAP)
    }

    /// All squarefree products of window primes that are `<= Y`, with `r(1) = 1`.
    pub fn build_support_capped(&self, cap: usize) -> Result<ResonatorSupport> {
        let primes = self.window_primes();
        if primes.len() > 64 {
            return Err(Error::TooManyWindowPrimes(primes.len()));
        }
        let weights: Vec<f64> = primes.iter().map(|&p| self.r_coeff(p)).collect();
        let max_key = if self.y >= u64::MAX as f64 {
            u64::MAX
        } else {
            self.y.floor() as u64
        };

        let mut entries = vec![(1u64, 1.0f64)];
        // depth-first over ascending primes; products only grow, so break early
        let mut stack: Vec<(usize, u64, f64)> = vec![(0, 1, 1.0)];
        while let Some((start, key, w)) = stack.pop() {
            for i in start..primes.len() {
                let Some(next) = key.checked_mul(primes[i]).filter(|&k| k <= max_key) else {
                    break;
                };
                if entries.len() >= cap {
                    return Err(Error::SupportTooLarge { cap });
                }
                let nw = w * weights[i];
                entries.push((next, nw));
                stack.push((i + 1, next, nw));
            }
        }
        entries.sort_unstable_by_key(|e| e.0);
        Ok(ResonatorSupport { entries })
    }

    /// `log N > 3 lambda log log lambda`.
    pub fn lemma_condition(&self, n: u64) -> bool {
        (n as f64).ln() > 3.0 * self.lambda * self.lambda.ln().ln()
    }

    /// `N exp(2 sqrt(log Y / log log Y))`, the leading-order size of the
    /// correlation ratio. Reported only; the true constant is `2 + o(1)`.
    pub fn ratio_benchmark(&self, n: u64) -> f64 {
        let l = self.y.ln();
        n as f64 * (2.0 * (l / l.ln()).sqrt()).exp()
    }
}

/// Explicit support of a resonator: sorted, distinct keys with weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonatorSupport {
    entries: Vec<(u64, f64)>,
}

impl ResonatorSupport {
    /// `{1 -> 1}`.
    pub fn trivial() -> Self {
        Self {
            entries: vec![(1, 1.0)],
        }
    }

    /// Arbitrary positive keys with finite nonnegative weights (for synthetic
    /// experiments and oracles). Keys are sorted; duplicates are rejected.
    pub fn from_entries(mut entries: Vec<(u64, f64)>) -> Result<Self> {
        entries.sort_unstable_by_key(|e| e.0);
        for (i, &(k, w)) in entries.iter().enumerate() {
            if k == 0 {
                return Err(Error::InvalidSupport {
                    key: k,
                    msg: "keys must be positive".into(),
                });
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidSupport {
                    key: k,
                    msg: format!("bad weight {w}"),
                });
            }
            if i > 0 && entries[i - 1].0 == k {
                return Err(Error::InvalidSupport {
                    key: k,
                    msg: "duplicate key".into(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn max_key(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.0)
    }

    pub fn weight(&self, n: u64) -> Option<f64> {
        self.entries
            .binary_search_by_key(&n, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// `sum_n r(n)^2`, compensated, ascending key order.
    pub fn self_energy(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|&(_, w)| w * w))
    }

    /// `sum_{a,b} sum_{m,n <= N, an = bm} r(a) r(b)`.
    ///
    /// Writing `a = g a'`, `b = g b'` with `gcd(a', b') = 1`, the solutions of
    /// `an = bm` are `n = k b'`, `m = k a'`, so there are
    /// `floor(N / max(a', b'))` of them. Rows are summed in parallel and
    /// reduced in key order, so the result does not depend on the thread count.
    pub fn correlation_sum(&self, n: u64) -> f64 {
        let rows: Vec<f64> = self
            .entries
            .par_iter()
            .map(|&(a, ra)| {
                let mut row = CompensatedSum::new();
                for &(b, rb) in &self.entries {
                    let c = pair_count(a, b, n);
                    if c > 0 {
                        row += ra * rb * c as f64;
                    }
                }
                row.value()
            })
            .collect();
        compensated_sum(rows)
    }

    /// Weights converted exactly to rationals (every `f64` is dyadic).
    pub fn to_rational(&self) -> Vec<(u64, BigRational)> {
        self.entries
            .iter()
            .map(|&(k, w)| (k, BigRational::from_float(w).expect("finite weight")))
            .collect()
    }
}

/// Number of `(m, n)` with `m, n <= bound` and `a n = b m`.
#[inline]
pub fn pair_count(a: u64, b: u64, bound: u64) -> u64 {
    let g = a.gcd(&b);
    bound / (a / g).max(b / g)
}

/// The gcd-reduced correlation sum over any exact or approximate weight type.
pub fn correlation_sum_with<T>(entries: &[(u64, T)], n: u64) -> T
where
    T: Clone + Zero + FromPrimitive + std::ops::Mul<Output = T>,
{
    let mut acc = T::zero();
    for (a, ra) in entries {
        for (b, rb) in entries {
            let c = pair_count(*a, *b, n);
            if c > 0 {
                acc = acc + ra.clone() * rb.clone() * T::from_u64(c).expect("count fits");
            }
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaRatio {
    pub correlation_sum: f64,
    pub self_energy: f64,
    pub ratio: f64,
    /// `N exp(2 sqrt(log Y / log log Y))`, informational.
    pub rhs_benchmark: f64,
    /// `log N > 3 lambda log log lambda`.
    pub condition_met: bool,
}

/// Correlation sum over self-energy, with the benchmark and the length condition.
pub fn lemma_ratio(spec: &ResonatorSpec, support: &ResonatorSupport, n: u64) -> LemmaRatio {
    let correlation_sum = support.correlation_sum(n);
    let self_energy = support.self_energy();
    LemmaRatio {
        correlation_sum,
        self_energy,
        ratio: correlation_sum / self_energy,
        rhs_benchmark: spec.ratio_benchmark(n),
        condition_met: spec.lemma_condition(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn spec_at_one_million() {
        let s = ResonatorSpec::new(1e6).unwrap();
        // sqrt(log 1e6 * log log 1e6)
        assert_relative_eq!(s.lambda(), 6.0230105360575745, max_relative = 1e-12);
        assert_relative_eq!(s.window().1, 25.13178743864708, max_relative = 1e-12);
        assert_eq!(s.window_primes(), vec![7, 11, 13, 17, 19, 23]);
        assert_relative_eq!(s.r_coeff(7), 1.1698813556706076, max_relative = 1e-12);
        assert_eq!(s.r_coeff(5), 0.0);
        assert_eq!(s.r_coeff(29), 0.0);
    }

    #[test]
    fn spec_small_lengths() {
        // e^e sits below the accepted lengths, but the formula still applies
        assert_relative_eq!(resonance_lambda(E.powf(E)), E.sqrt(), max_relative = 1e-12);
        assert!(ResonatorSpec::new(E.powf(E)).is_err());
        let s = ResonatorSpec::new(16.0).unwrap();
        assert_relative_eq!(s.lambda(), 1.681497701808041, max_relative = 1e-12);
        assert!(s.window_primes().is_empty());
        assert_eq!(s.build_support().unwrap(), ResonatorSupport::trivial());
        assert_eq!(
            ResonatorSpec::new(15.9).unwrap_err(),
            Error::ResonatorTooShort(15.9)
        );
        assert!(ResonatorSpec::new(f64::NAN).is_err());
    }

    #[test]
    fn support_at_one_million() {
        let s = ResonatorSpec::new(1e6).unwrap();
        let sup = s.build_support().unwrap();
        // subset oracle: 64 subsets of six primes, minus those whose product exceeds 1e6
        let ps = s.window_primes();
        let mut oracle: Vec<u64> = (0u32..64)
            .map(|mask| {
                (0..6)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ps[i])
                    .product()
            })
            .filter(|&k: &u64| k <= 1_000_000)
            .collect();
        oracle.sort_unstable();
        assert_eq!(sup.keys().collect::<Vec<_>>(), oracle);
        // 7*11*13*17*19*23 and 11*13*17*19*23 both exceed 1e6
        assert_eq!(sup.len(), 62);
        assert_eq!(sup.weight(1), Some(1.0));
        assert_relative_eq!(
            sup.weight(77).unwrap(),
            s.r_coeff(7) * s.r_coeff(11),
            max_relative = 1e-15
        );
        assert!(sup.max_key() <= 1_000_000);
    }

    #[test]
    fn self_energy_two_orders() {
        let s = ResonatorSpec::new(1e6).unwrap();
        let sup = s.build_support().unwrap();
        let ps = s.window_primes();
        let full: f64 = ps.iter().map(|&p| 1.0 + s.r_coeff(p).powi(2)).product();
        let excluded: f64 = (0u32..64)
            .filter_map(|mask| {
                let sel: Vec<u64> = (0..6)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ps[i])
                    .collect();
                (sel.iter().product::<u64>() > 1_000_000)
                    .then(|| sel.iter().map(|&p| s.r_coeff(p).powi(2)).product::<f64>())
            })
            .sum();
        assert_relative_eq!(sup.self_energy(), full - excluded, max_relative = 1e-9);
        assert_relative_eq!(sup.self_energy(), 9.508811245984553, max_relative = 1e-12);
        assert_eq!(ResonatorSupport::trivial().self_energy(), 1.0);
    }

    #[test]
    fn correlation_examples() {
        for n in [1, 2, 17, 1000] {
            assert_eq!(ResonatorSupport::trivial().correlation_sum(n), n as f64);
        }
        let r7 = 0.8125;
        let sup = ResonatorSupport::from_entries(vec![(7, r7), (1, 1.0)]).unwrap();
        assert_eq!(sup.self_energy(), 1.0 + r7 * r7);
        assert_relative_eq!(
            sup.correlation_sum(7),
            7.0 + 2.0 * r7 + 7.0 * r7 * r7,
            max_relative = 1e-15
        );
    }

    #[test]
    fn trivial_ratio_and_condition() {
        let s = ResonatorSpec::new(16.0).unwrap();
        let r = lemma_ratio(&s, &s.build_support().unwrap(), 10);
        assert_eq!(r.ratio, 10.0);
        let s = ResonatorSpec::new(1e6).unwrap();
        // 3 * 6.023 * log log 6.023 = 10.59, so N must exceed e^10.59
        assert!(!s.lemma_condition(1000));
        assert!(s.lemma_condition(40_000));
        assert!(!s.lemma_condition(39_000));
        assert_relative_eq!(
            s.ratio_benchmark(1000),
            98256.01011651022,
            max_relative = 1e-12
        );
    }

    #[test]
    fn support_cap() {
        let s = ResonatorSpec::new(1e8).unwrap();
        assert_eq!(
            s.build_support_capped(100).unwrap_err(),
            Error::SupportTooLarge { cap: 100 }
        );
        assert_eq!(s.build_support().unwrap().len(), 1078);
    }

    #[test]
    fn from_entries_validation() {
        assert!(ResonatorSupport::from_entries(vec![(0, 1.0)]).is_err());
        assert!(ResonatorSupport::from_entries(vec![(2, -1.0)]).is_err());
        assert!(ResonatorSupport::from_entries(vec![(2, 1.0), (2, 0.5)]).is_err());
    }
}
