use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default memory ceiling for a [`FactorTable`]: 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// Smallest-prime-factor table for `2..=limit`, built by a linear sieve.
///
/// Every multiplicative evaluation in the crate factors through this table.
/// It is immutable once built and can be shared freely between threads.
#[derive(Debug, Clone)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
    trial_fallback: bool,
}

/// `n = n1 * n2^2` with `n1` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    pub n1: u64,
    pub n2: u64,
}

impl FactorTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::TableTooSmall(limit));
        }
        let bytes = (limit + 1).saturating_mul(std::mem::size_of::<u32>() as u64);
        if bytes > budget || limit > u64::from(u32::MAX) {
            return Err(Error::TableTooLarge {
                limit,
                bytes,
                budget,
            });
        }

        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m >= len {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self {
            limit,
            spf,
            primes,
            trial_fallback: false,
        })
    }

    /// Allow factoring integers above `limit` by trial division.
    pub fn with_trial_fallback(mut self, enabled: bool) -> Self {
        self.trial_fallback = enabled;
        self
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n` for `2 <= n <= limit`.
    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(u64::from(self.spf[n as usize]))
        }
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            Err(Error::ZeroArgument)
        } else if n > self.limit && !self.trial_fallback {
            Err(Error::BeyondTable {
                n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Prime factorization as ascending `(p, exponent)` pairs; empty for `n = 1`.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        self.check(n)?;
        if n > self.limit {
            return Ok(trial_factorize(n));
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// Distinct prime divisors of `n`, ascending.
    pub fn distinct_primes(&self, n: u64) -> Result<Vec<u64>> {
        Ok(self.factorize(n)?.into_iter().map(|(p, _)| p).collect())
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        let f = self.factorize(n)?;
        if f.iter().any(|&(_, e)| e > 1) {
            Ok(0)
        } else if f.len() % 2 == 0 {
            Ok(1)
        } else {
            Ok(-1)
        }
    }

    pub fn radical(&self, n: u64) -> Result<u64> {
        Ok(self.distinct_primes(n)?.into_iter().product())
    }

    pub fn squarefree_decompose(&self, n: u64) -> Result<SquarefreeDecomposition> {
        let mut n1 = 1;
        let mut n2 = 1;
        for (p, e) in self.factorize(n)? {
            if e % 2 == 1 {
                n1 *= p;
            }
            n2 *= p.pow(e / 2);
        }
        Ok(SquarefreeDecomposition { n1, n2 })
    }
}

/// Factorization by trial division, ascending `(p, exponent)` pairs.
pub fn trial_factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while n.is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        push(&mut n, p);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && trial_factorize(n) == [(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && trial_factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let len = limit as usize + 1;
    let mut composite = vec![false; len];
    let mut out = Vec::new();
    for i in 2..len {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j < len {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_small() {
        let t = FactorTable::new(10).unwrap();
        let spf: Vec<u64> = (2..=10)
            .map(|n| t.smallest_prime_factor(n).unwrap())
            .collect();
        assert_eq!(spf, vec![2, 3, 2, 5, 2, 7, 2, 3, 2]);
        let t = FactorTable::new(2).unwrap();
        assert_eq!(t.smallest_prime_factor(2), Some(2));
        assert_eq!(t.smallest_prime_factor(3), None);
    }

    #[test]
    fn primes_to_thirty() {
        let t = FactorTable::new(30).unwrap();
        let p: Vec<u32> = t.primes().to_vec();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        // trial-division oracle
        let oracle: Vec<u32> = (2..=30u64)
            .filter(|&n| is_prime(n))
            .map(|n| n as u32)
            .collect();
        assert_eq!(p, oracle);
    }

    #[test]
    fn spf_invariants() {
        let t = FactorTable::new(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = t.smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert!(p * p <= n || p == n);
        }
        for &p in t.primes() {
            assert_eq!(t.smallest_prime_factor(u64::from(p)), Some(u64::from(p)));
        }
    }

    #[test]
    fn rejects_bad_limits() {
        assert_eq!(FactorTable::new(1).unwrap_err(), Error::TableTooSmall(1));
        assert!(matches!(
            FactorTable::with_budget(1_000_000, 1000),
            Err(Error::TableTooLarge { .. })
        ));
    }

    #[test]
    fn mobius_examples() {
        let t = FactorTable::new(100).unwrap();
        assert_eq!(t.mobius(1).unwrap(), 1);
        assert_eq!(t.mobius(12).unwrap(), 0);
        assert_eq!(t.mobius(30).unwrap(), -1);
        assert_eq!(t.mobius(0).unwrap_err(), Error::ZeroArgument);
        assert_eq!(
            t.mobius(101).unwrap_err(),
            Error::BeyondTable { n: 101, limit: 100 }
        );
    }

    #[test]
    fn decompose_examples() {
        let t = FactorTable::new(100).unwrap();
        let d = |n| {
            let s = t.squarefree_decompose(n).unwrap();
            (s.n1, s.n2)
        };
        assert_eq!(d(1), (1, 1));
        assert_eq!(d(12), (3, 2));
        assert_eq!(d(8), (2, 2));
    }

    #[test]
    fn decompose_round_trip() {
        let t = FactorTable::new(100_000).unwrap();
        for n in 1..=100_000u64 {
            let s = t.squarefree_decompose(n).unwrap();
            assert_eq!(s.n1 * s.n2 * s.n2, n);
            assert_ne!(t.mobius(s.n1).unwrap(), 0);
            assert_eq!(is_square(n), s.n1 == 1);
        }
    }

    #[test]
    fn trial_fallback() {
        let t = FactorTable::new(100).unwrap().with_trial_fallback(true);
        assert_eq!(
            t.factorize(1_000_003 * 4).unwrap(),
            vec![(2, 2), (1_000_003, 1)]
        );
        assert_eq!(t.mobius(1_000_003 * 6).unwrap(), -1);
        assert_eq!(t.mobius(1_000_003 * 4).unwrap(), 0);
    }

    #[test]
    fn squares() {
        assert!(is_square(0));
        assert!(is_square(1));
        assert!(is_square(36));
        assert!(!is_square(12));
        assert!(is_square(u64::from(u32::MAX).pow(2)));
        assert!(!is_square(u64::MAX));
    }
}
