//! Gaussian (q-binomial) coefficients in exact big-integer arithmetic.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The q-analog [m]_q = (q^m - 1)/(q - 1) = 1 + q + ... + q^(m-1).
pub fn gauss_bracket(m: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut acc = BigUint::zero();
    let mut pow = BigUint::one();
    for _ in 0..m {
        acc += &pow;
        pow *= &q;
    }
    acc
}

/// The Gaussian coefficient [n choose m]_q: the number of m-subspaces of
/// V(n, q). Zero when m < 0 or m > n. Computed by the q-factorial product
/// with exact division at every step, so every intermediate is an integer.
pub fn gaussian(n: i64, m: i64, q: u64) -> BigUint {
    if m < 0 || m > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 1..=m {
        acc *= gauss_bracket((n - i + 1) as u64, q);
        let den = gauss_bracket(i as u64, q);
        let (quot, rem) = num_integer::Integer::div_rem(&acc, &den);
        debug_assert!(rem.is_zero(), "Gaussian coefficients are integers");
        acc = quot;
    }
    acc
}

/// Exact check gaussian(n, m, q) <= cap, for enumeration budgets.
pub fn gaussian_within(n: i64, m: i64, q: u64, cap: u64) -> bool {
    gaussian(n, m, q) <= BigUint::from(cap)
}
