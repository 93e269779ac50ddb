use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{h_of_primes, FactorTable};
use crate::coefficients::CoefficientFunction;
use crate::error::{Error, Result};
use crate::resonator::ResonatorSupport;
use crate::sum::CompensatedSum;

/// Relative slack on `Re(off_diagonal) >= 0` for square-positive `f`.
pub const MAIN_TERM_TOLERANCE: f64 = 1e-9;

/// Main term of the resonated second moment, split at `an = bm`.
///
/// ```text
/// M = sum_{a,b} sum_{m,n <= N, abmn square} f(an) conj(f(bm)) r(a) r(b) h(abmn)
///   = diagonal + 2 Re(off_diagonal)
/// ```
///
/// `diagonal` collects `an = bm` and involves no `f`; `off_diagonal` collects
/// the half `an > bm`, the other half being its complex conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermReport {
    pub diagonal: f64,
    pub off_diagonal: Complex64,
    pub total: f64,
}

impl MainTermReport {
    /// `total >= diagonal`, up to [`MAIN_TERM_TOLERANCE`] relative to the diagonal.
    pub fn positivity_holds(&self) -> bool {
        self.off_diagonal.re >= -MAIN_TERM_TOLERANCE * self.diagonal
    }
}

/// One `(a, n)` with `a` in the support and `n <= N`.
struct Term {
    value: u64,
    weight: f64,
    coeff: Complex64,
    primes: Vec<u64>,
}

fn union_h(a: &[u64], b: &[u64]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut h = 1.0;
    while i < a.len() || j < b.len() {
        let p = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        h *= p as f64 / (p as f64 + 1.0);
    }
    h
}

pub fn resonated_main_term(
    table: &FactorTable,
    support: &ResonatorSupport,
    f: &CoefficientFunction,
    n: u64,
) -> Result<MainTermReport> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let fvals = f.values_up_to(table, n)?;
    let mut terms = Vec::with_capacity(support.len() * n as usize);
    // squarefree kernel -> term indices
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    // exact value -> (sum of weights, primes)
    let mut diagonal_groups: BTreeMap<u64, (CompensatedSum, Vec<u64>)> = BTreeMap::new();

    for &(a, w) in support.entries() {
        let fa = f.evaluate(table, a)?;
        let fact_a = table.factorize(a)?;
        for m in 1..=n {
            let value = a.checked_mul(m).ok_or(Error::BeyondTable {
                n: a,
                limit: u64::MAX / m,
            })?;
            let mut exps: BTreeMap<u64, u32> = fact_a.iter().copied().collect();
            for (p, e) in table.factorize(m)? {
                *exps.entry(p).or_default() += e;
            }
            let kernel: u64 = exps
                .iter()
                .filter(|(_, &e)| e % 2 == 1)
                .map(|(&p, _)| p)
                .product();
            let primes: Vec<u64> = exps.into_keys().collect();

            let g = diagonal_groups
                .entry(value)
                .or_insert_with(|| (CompensatedSum::new(), primes.clone()));
            g.0 += w;
            classes.entry(kernel).or_default().push(terms.len());
            terms.push(Term {
                value,
                weight: w,
                coeff: fa * fvals[m as usize],
                primes,
            });
        }
    }

    let diagonal = diagonal_groups
        .values()
        .map(|(s, primes)| {
            let s = s.value();
            s * s * h_of_primes(primes.iter().copied())
        })
        .sum::<CompensatedSum>()
        .value();

    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for idx in classes.values() {
        for &i in idx {
            for &j in idx {
                let (p, q) = (&terms[i], &terms[j]);
                if p.value <= q.value {
                    continue;
                }
                let z = p.coeff
                    * q.coeff.conj()
                    * (p.weight * q.weight * union_h(&p.primes, &q.primes));
                re += z.re;
                im += z.im;
            }
        }
    }
    let off_diagonal = Complex64::new(re.value(), im.value());
    Ok(MainTermReport {
        diagonal,
        off_diagonal,
        total: diagonal + 2.0 * off_diagonal.re,
    })
}
