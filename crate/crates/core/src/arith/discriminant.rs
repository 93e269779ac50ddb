use std::fmt;

use serde::{Deserialize, Serialize};

use super::kronecker::kronecker;
use super::sieve::{is_squarefree, primes_up_to};
use crate::error::{Error, Result};

/// A validated fundamental discriminant.
///
/// Either `d = 1 (mod 4)` with `d` squarefree, or `d = 4m` with
/// `m = 2, 3 (mod 4)` and `m` squarefree. `d = 1` is admitted as the unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_fundamental(d)? {
            Ok(Self(d))
        } else {
            Err(Error::NotFundamental(d))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn modulus(self) -> u64 {
        self.0.unsigned_abs()
    }

    pub fn is_unit(self) -> bool {
        self.0 == 1
    }

    /// `chi_d(n)`.
    #[inline]
    pub fn chi(self, n: u64) -> i8 {
        kronecker(self.0, n)
    }
}

impl TryFrom<i64> for FundamentalDiscriminant {
    type Error = Error;

    fn try_from(d: i64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<FundamentalDiscriminant> for i64 {
    fn from(d: FundamentalDiscriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_fundamental(d: i64) -> Result<bool> {
    if d == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    })
}

/// Squarefree flags for every integer in `lo..=hi` (`lo >= 1`).
///
/// Segmented: only primes up to `sqrt(hi)` are needed, and each one strikes
/// the multiples of `p^2` that land in the window.
pub fn squarefree_flags(lo: u64, hi: u64) -> Result<Vec<bool>> {
    if lo == 0 {
        return Err(Error::ZeroArgument);
    }
    if lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    let mut flags = vec![true; (hi - lo + 1) as usize];
    for p in primes_up_to(hi.isqrt()) {
        let q = p * p;
        let mut k = lo.div_ceil(q) * q;
        while k <= hi {
            flags[(k - lo) as usize] = false;
            k += q;
        }
    }
    Ok(flags)
}

/// Every fundamental discriminant with `lo <= |d| <= hi`, ascending in `|d|`,
/// positive before negative at equal `|d|`. `d = 1` only with `include_unit`.
pub fn enumerate_discriminants(
    lo: u64,
    hi: u64,
    include_unit: bool,
) -> Result<Vec<FundamentalDiscriminant>> {
    if lo == 0 {
        return Err(Error::ZeroArgument);
    }
    if lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    // covers both |d| and |d|/4
    let base = (lo / 4).max(1);
    let sf = squarefree_flags(base, hi)?;
    let squarefree = |k: u64| sf[(k - base) as usize];

    let mut out = Vec::with_capacity(((hi - lo + 1) as f64 * 0.62) as usize + 4);
    for a in lo..=hi {
        let d = a as i64;
        match a & 3 {
            1 => {
                if squarefree(a) && (a != 1 || include_unit) {
                    out.push(FundamentalDiscriminant(d));
                }
            }
            3 => {
                if squarefree(a) {
                    out.push(FundamentalDiscriminant(-d));
                }
            }
            0 => {
                let m = a / 4;
                if squarefree(m) {
                    match m & 3 {
                        // d = 4m, m = 2, 3 (mod 4); -d = 4(-m), -m = 2, 3 (mod 4)
                        2 => {
                            out.push(FundamentalDiscriminant(d));
                            out.push(FundamentalDiscriminant(-d));
                        }
                        3 => out.push(FundamentalDiscriminant(d)),
                        1 => out.push(FundamentalDiscriminant(-d)),
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(v: &[FundamentalDiscriminant]) -> Vec<i64> {
        v.iter().map(|d| d.get()).collect()
    }

    #[test]
    fn predicate_examples() {
        assert!(is_fundamental(5).unwrap());
        assert!(is_fundamental(8).unwrap());
        assert!(!is_fundamental(9).unwrap());
        assert!(is_fundamental(1).unwrap());
        assert!(is_fundamental(-4).unwrap());
        assert!(!is_fundamental(4).unwrap());
        assert!(!is_fundamental(-1).unwrap());
        assert_eq!(is_fundamental(0).unwrap_err(), Error::ZeroDiscriminant);
    }

    #[test]
    fn enumerate_examples() {
        let v = enumerate_discriminants(1, 8, false).unwrap();
        assert_eq!(ds(&v), vec![-3, -4, 5, -7, 8, -8]);
        let v = enumerate_discriminants(3, 3, false).unwrap();
        assert_eq!(ds(&v), vec![-3]);
        let v = enumerate_discriminants(1, 5, true).unwrap();
        assert_eq!(ds(&v), vec![1, -3, -4, 5]);
        // include_unit has no effect when lo > 1
        assert_eq!(
            enumerate_discriminants(2, 5, true).unwrap(),
            enumerate_discriminants(2, 5, false).unwrap()
        );
        assert!(enumerate_discriminants(5, 4, false).is_err());
        assert!(enumerate_discriminants(0, 4, false).is_err());
    }

    #[test]
    fn enumeration_matches_predicate() {
        for (lo, hi) in [(1, 3000), (777, 2345), (4000, 4100)] {
            let v = ds(&enumerate_discriminants(lo, hi, false).unwrap());
            let mut oracle = Vec::new();
            for a in lo..=hi {
                for d in [a as i64, -(a as i64)] {
                    if d != 1 && is_fundamental(d).unwrap() {
                        oracle.push(d);
                    }
                }
            }
            assert_eq!(v, oracle);
        }
    }

    #[test]
    fn squarefree_window() {
        let f = squarefree_flags(95, 110).unwrap();
        for (i, &b) in f.iter().enumerate() {
            assert_eq!(b, is_squarefree(95 + i as u64));
        }
    }

    #[test]
    fn typed_constructor() {
        assert_eq!(FundamentalDiscriminant::new(-7).unwrap().modulus(), 7);
        assert_eq!(
            FundamentalDiscriminant::new(16).unwrap_err(),
            Error::NotFundamental(16)
        );
        let d: FundamentalDiscriminant = serde_json::from_str("-8").unwrap();
        assert_eq!(d.get(), -8);
        assert!(serde_json::from_str::<FundamentalDiscriminant>("9").is_err());
    }
}
