//! Kronecker symbol `(d/n)` via the binary reciprocity chain.
//!
//! No factorization is needed: powers of two are shifted out of both
//! arguments, and reciprocity is applied on the odd parts with
//! subtract-and-shift steps. The cost is `O(log^2 n)` bit operations.

/// `(2/n)` for odd `n`.
#[inline]
fn two_over(n: u64) -> i8 {
    match n & 7 {
        1 | 7 => 1,
        _ => -1,
    }
}

/// Jacobi symbol `(a/n)` for odd `n`.
pub fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n & 1 == 1, "jacobi needs an odd modulus");
    let mut t = 1i8;
    if a >= n {
        a %= n;
    }
    while a != 0 {
        let s = a.trailing_zeros();
        a >>= s;
        if s & 1 == 1 {
            t *= two_over(n);
        }
        // both odd now
        if a < n {
            if a & 3 == 3 && n & 3 == 3 {
                t = -t;
            }
            std::mem::swap(&mut a, &mut n);
        }
        a -= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for any integer `d` and `n >= 0`.
///
/// Completely multiplicative in `n`. For a fundamental discriminant `d` this
/// is the real primitive character `chi_d`, periodic with period `|d|`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let s = n.trailing_zeros();
    let n = n >> s;
    let mut t = 1i8;
    if s > 0 {
        if d & 1 == 0 {
            return 0;
        }
        if s & 1 == 1 {
            // (d/2) depends on d mod 8 only
            t = match d.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            };
        }
    }
    if n == 1 {
        return t;
    }
    if d < 0 && n & 3 == 3 {
        t = -t;
    }
    t * jacobi(d.unsigned_abs() % n, n)
}
