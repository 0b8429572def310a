//! Exact rational scalars — the field of constants.
//!
//! Backed by arbitrary-precision rationals; values are always reduced and
//! carry a positive denominator, so structural equality is semantic equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact rational number. Always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `n/d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Generalized binomial coefficient `n choose k` for integer `n` (negative
/// allowed), computed as the falling factorial n(n-1)...(n-k+1) over k!.
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
    }
    if num.is_zero() {
        return Rational::zero();
    }
    BigRational::from_integer(num) / factorial(k)
}
