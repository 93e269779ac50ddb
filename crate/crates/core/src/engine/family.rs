use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    enumerate_discriminants, g1_weight, is_square, FactorTable, FundamentalDiscriminant,
};
use crate::error::{Error, Result};

/// `zeta(2) = pi^2 / 6`.
pub const ZETA_2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// Fundamental discriminants with `x < |d| <= 2x`.
pub fn dyadic_family(x: u64, include_unit: bool) -> Result<Vec<FundamentalDiscriminant>> {
    if x == 0 {
        return Err(Error::ZeroArgument);
    }
    let hi = x
        .checked_mul(2)
        .ok_or(Error::EmptyRange { lo: x + 1, hi: x })?;
    let fam = enumerate_discriminants(x + 1, hi, include_unit)?;
    if fam.is_empty() {
        return Err(Error::EmptyFamily { lo: x + 1, hi });
    }
    Ok(fam)
}

/// `sum_{n <= t} chi_d(n)`.
pub fn partial_char_sum(d: FundamentalDiscriminant, t: u64) -> i64 {
    (1..=t).map(|n| i64::from(d.chi(n))).sum()
}

/// `max_{t <= |d|} |sum_{n <= t} chi_d(n)|` and the first `t` attaining it.
///
/// One period suffices: the full-period sum vanishes for `d != 1`, so the
/// partial sums repeat with period `|d|`.
pub fn max_partial_sum(d: FundamentalDiscriminant) -> (u64, u64) {
    let mut s = 0i64;
    let mut best = (0u64, 1u64);
    for t in 1..=d.modulus() {
        s += i64::from(d.chi(t));
        if s.unsigned_abs() > best.0 {
            best = (s.unsigned_abs(), t);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyAverageReport {
    pub n: u64,
    pub x: u64,
    /// `sum_{|d| <= x} chi_d(n)` over fundamental `d`.
    pub exact_sum: i64,
    pub family_size: u64,
    /// `x / zeta(2) * h(n)` for square `n`, else 0.
    pub main_term: f64,
    pub deviation: f64,
    /// `x^{1/2+eps} g1(n1) g2(n2)`; the implied constant is unknown, so this
    /// is a scale reference only.
    pub grh_envelope: f64,
}

impl FamilyAverageReport {
    /// `deviation / main_term`, or `None` when the main term vanishes.
    pub fn relative_deviation(&self) -> Option<f64> {
        (self.main_term > 0.0).then(|| self.deviation / self.main_term)
    }
}

/// Exact family sum of `chi_d(n)` over `|d| <= x`, next to its expected main term.
pub fn family_average(
    table: &FactorTable,
    n: u64,
    x: u64,
    eps: f64,
    include_unit: bool,
) -> Result<FamilyAverageReport> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let sfd = table.squarefree_decompose(n)?;
    let h = table.h_weight(n)?;
    let g2 = table.g2_weight(sfd.n2, eps)?;
    let g1 = g1_weight(sfd.n1 as f64, eps)?;

    let fam = enumerate_discriminants(1, x.max(1), include_unit)?;
    let exact_sum: i64 = fam.par_iter().map(|d| i64::from(d.chi(n))).sum();
    let main_term = if is_square(n) {
        x as f64 / ZETA_2 * h
    } else {
        0.0
    };
    Ok(FamilyAverageReport {
        n,
        x,
        exact_sum,
        family_size: fam.len() as u64,
        main_term,
        deviation: (exact_sum as f64 - main_term).abs(),
        grh_envelope: (x as f64).powf(0.5 + eps) * g1 * g2,
    })
}
