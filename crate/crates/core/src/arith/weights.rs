use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::sieve::FactorTable;
use crate::error::{Error, Result};

/// `prod p/(p+1)` over the given distinct primes.
pub fn h_of_primes<I: IntoIterator<Item = u64>>(primes: I) -> f64 {
    primes
        .into_iter()
        .map(|p| p as f64 / (p as f64 + 1.0))
        .product()
}

/// Exact `prod p/(p+1)` over the given distinct primes.
pub fn h_of_primes_exact<I: IntoIterator<Item = u64>>(primes: I) -> BigRational {
    primes.into_iter().fold(BigRational::one(), |acc, p| {
        acc * BigRational::new(BigInt::from(p), BigInt::from(p + 1))
    })
}

impl FactorTable {
    /// `h(n) = prod_{p | n} p/(p+1)`, with `h(1) = 1`. Depends on the radical only.
    pub fn h_weight(&self, n: u64) -> Result<f64> {
        Ok(h_of_primes(self.distinct_primes(n)?))
    }

    pub fn h_weight_exact(&self, n: u64) -> Result<BigRational> {
        Ok(h_of_primes_exact(self.distinct_primes(n)?))
    }

    /// `g2(n2) = sum_{q | n2} mu(q)^2 q^{-(1/2+eps)} = prod_{p | n2} (1 + p^{-(1/2+eps)})`.
    pub fn g2_weight(&self, n2: u64, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::EpsilonOutOfRange(eps));
        }
        let s = 0.5 + eps;
        Ok(self
            .distinct_primes(n2)?
            .into_iter()
            .map(|p| 1.0 + (p as f64).powf(-s))
            .product())
    }
}

/// `g1(n1) = exp((log n1)^{1-eps})`, equal to 1 at `n1 = 1`.
///
/// Takes a real argument so that non-integer points (`n1 = e`) can be probed.
pub fn g1_weight(n1: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::EpsilonOutOfRange(eps));
    }
    if n1.is_nan() || n1 < 1.0 {
        return Err(Error::ZeroArgument);
    }
    Ok(n1.ln().powf(1.0 - eps).exp())
}
