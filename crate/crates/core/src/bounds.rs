//! Exact counting bounds for s-sunflower-free families of k-spaces.
//!
//! All comparisons are exact: integer inequalities are checked on big
//! integers and the closed-form cap is kept as an exact rational. There is
//! no floating point here.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;

use crate::gaussian::gauss_bracket;

/// The product bound: an s-sunflower-free family of k-spaces has at most
/// prod_{i=1}^k [i(s-1)]_q members.
pub fn upper_bound(s: usize, k: usize, q: u64) -> BigUint {
    assert!(s >= 3 && k >= 1, "bounds need s >= 3 and k >= 1");
    (1..=k)
        .map(|i| gauss_bracket((i * (s - 1)) as u64, q))
        .product()
}

/// Exponent of the best known lower bound: (s-1) k(k+1)/2 - k for
/// s >= k+1, and (s-2) k(k+1)/2 + k (gcd(k, s-1) - 3)/2 for s <= k.
pub fn lower_bound_exponent(s: usize, k: usize) -> usize {
    let (si, ki) = (s as i64, k as i64);
    let e = if s > k {
        (si - 1) * ki * (ki + 1) / 2 - ki
    } else {
        let g = ki.gcd(&(si - 1));
        (si - 2) * ki * (ki + 1) / 2 + ki * (g - 3) / 2
    };
    debug_assert!(e >= 0);
    e as usize
}

/// q^lower_bound_exponent(s, k): the size some s-sunflower-free family of
/// k-spaces achieves.
pub fn lower_bound(s: usize, k: usize, q: u64) -> BigUint {
    BigUint::from(q).pow(lower_bound_exponent(s, k) as u32)
}

/// The sandwich lower <= product <= cap, all exact.
#[derive(Debug, Clone)]
pub struct Sandwich {
    pub lower: BigUint,
    pub product: BigUint,
    /// (q/(q-1))^k * q^((s-1) k(k+1)/2 - k) as an exact rational.
    pub cap: BigRational,
    /// The reference exponent E = (s-1) k(k+1)/2 - k of the cap.
    pub reference_exponent: usize,
    /// product / q^E, exact.
    pub product_ratio: BigRational,
    /// (q/(q-1))^k, the cap on that ratio.
    pub ratio_cap: BigRational,
}

/// Compute the sandwich for (s, k, q) and check the chain
/// lower <= product <= cap exactly (by cross-multiplied integer
/// comparisons). Panics if the chain fails, which cannot happen for
/// valid parameters.
pub fn bound_sandwich(s: usize, k: usize, q: u64) -> Sandwich {
    assert!(s >= 3 && k >= 2, "the sandwich needs s >= 3 and k >= 2");
    let lower = lower_bound(s, k, q);
    let product = upper_bound(s, k, q);
    let e = ((s - 1) * k * (k + 1) / 2 - k) as u32;
    let qe = BigUint::from(q).pow(e);
    let q_pow_k = BigUint::from(q).pow(k as u32);
    let qm1_pow_k = BigUint::from(q - 1).pow(k as u32);
    // cap = q^(e+k) / (q-1)^k
    let cap_num = &qe * &q_pow_k;
    assert!(lower <= product, "lower bound exceeds the product bound");
    assert!(
        &product * &qm1_pow_k <= cap_num,
        "product bound exceeds the closed-form cap"
    );
    let big = |x: &BigUint| BigInt::from(x.clone());
    Sandwich {
        lower,
        product: product.clone(),
        cap: BigRational::new(big(&cap_num), big(&qm1_pow_k)),
        reference_exponent: e as usize,
        product_ratio: BigRational::new(big(&product), big(&qe)),
        ratio_cap: BigRational::new(big(&q_pow_k), big(&qm1_pow_k)),
    }
}

/// Exact check of the bracket sandwich
/// (1 + 1/q) q^(m-1) <= [m]_q < (1 + 1/(q-1)) q^(m-1) for m >= 2,
/// via cross-multiplied integer comparisons.
pub fn bracket_sandwich_holds(m: u64, q: u64) -> bool {
    assert!(m >= 2 && q >= 2);
    let bracket = gauss_bracket(m, q);
    let lower = BigUint::from(q).pow(m as u32 - 1) + BigUint::from(q).pow(m as u32 - 2);
    // [m] < q^m / (q-1)  <=>  (q-1) [m] < q^m
    let upper_ok = (&bracket * BigUint::from(q - 1)) < BigUint::from(q).pow(m as u32);
    lower <= bracket && upper_ok
}

/// Direct sum sum_{kappa=1}^{nu-1} floor(kappa mu / nu), checked against
/// the closed form ((mu-1)(nu-1) + gcd(mu, nu) - 1) / 2.
pub fn floor_sum(mu: u64, nu: u64) -> u64 {
    assert!(mu >= 1 && nu >= 1);
    let direct: u64 = (1..nu).map(|kappa| kappa * mu / nu).sum();
    let closed = ((mu - 1) * (nu - 1) + mu.gcd(&nu) - 1) / 2;
    assert_eq!(direct, closed, "floor-sum identity failed for ({mu}, {nu})");
    direct
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn product_bound_values() {
        assert_eq!(upper_bound(3, 2, 2), BigUint::from(45u32));
        assert_eq!(upper_bound(3, 1, 2), BigUint::from(3u32));
        assert_eq!(upper_bound(3, 1, 5), BigUint::from(6u32));
        assert_eq!(upper_bound(4, 2, 3), BigUint::from(4732u32));
        assert_eq!(upper_bound(4, 3, 2), BigUint::from(225351u32));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(3, 2, 2), BigUint::from(16u32));
        assert_eq!(lower_bound(4, 3, 2), BigUint::from(1u32 << 15));
        assert_eq!(lower_bound(5, 2, 2), BigUint::from(1024u32));
        // gcd branch
        assert_eq!(lower_bound(3, 4, 2), BigUint::from(256u32));
        assert_eq!(lower_bound(3, 3, 2), BigUint::from(8u32));
    }

    #[test]
    fn sandwich_3_2_2() {
        let s = bound_sandwich(3, 2, 2);
        assert_eq!(s.lower, BigUint::from(16u32));
        assert_eq!(s.product, BigUint::from(45u32));
        assert_eq!(s.cap, BigRational::from_integer(64.into()));
        assert_eq!(s.reference_exponent, 4);
    }

    #[test]
    fn sandwich_4_3_2() {
        let s = bound_sandwich(4, 3, 2);
        assert_eq!(s.lower.to_u64(), Some(32768));
        assert_eq!(s.product.to_u64(), Some(225351));
        // cap = (q/(q-1))^k q^E with E = 3*6 - 3 = 15
        assert_eq!(s.reference_exponent, 15);
        assert_eq!(s.cap, BigRational::from_integer((1u64 << 18).into()));
    }

    #[test]
    fn sandwich_grid_holds() {
        for s in 3..=5 {
            for k in 2..=4 {
                for q in [2, 3, 4, 5] {
                    let sw = bound_sandwich(s, k, q);
                    assert!(sw.product_ratio <= sw.ratio_cap);
                    assert!(sw.lower <= sw.product);
                }
            }
        }
    }

    #[test]
    fn bracket_sandwich_grid() {
        for m in 2..=20 {
            for q in [2u64, 3, 4, 5, 7, 8, 9] {
                assert!(bracket_sandwich_holds(m, q), "m={m} q={q}");
            }
        }
    }

    #[test]
    fn floor_sum_examples() {
        assert_eq!(floor_sum(5, 3), 4);
        assert_eq!(floor_sum(1, 17), 0);
        for k in 1..=12u64 {
            assert_eq!(floor_sum(k, k), k * (k - 1) / 2);
        }
    }

    #[test]
    fn floor_sum_grid_against_direct() {
        for mu in 1..=30 {
            for nu in 1..=30 {
                let direct: u64 = (1..nu).map(|kappa| kappa * mu / nu).sum();
                assert_eq!(floor_sum(mu, nu), direct);
            }
        }
    }

    #[test]
    fn ratio_is_one_at_the_lower_bound_for_large_s() {
        // s >= k+1: lower = q^E exactly
        let s = bound_sandwich(5, 2, 3);
        assert_eq!(
            BigRational::new(
                BigInt::from(s.lower.clone()),
                BigInt::from(BigUint::from(3u32).pow(s.reference_exponent as u32))
            ),
            BigRational::one()
        );
    }
}
