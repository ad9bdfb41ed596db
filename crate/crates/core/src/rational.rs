//! Exact rationals and their canonical string form.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary precision rational number.
pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `numerator/denominator`, always with an explicit (positive) denominator.
pub fn to_fraction_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `a/b` or a bare integer.
pub fn parse_fraction(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// `base^exp` for small non-negative exponents.
pub(crate) fn pow_q(base: &Q, exp: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Binomial coefficient as a rational.
pub(crate) fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}
