//! Exact big-integer combinatorial helpers shared by the closed-form
//! probability mass functions and the enumeration oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Double factorial n!! with the empty products 0!! = (-1)!! = 1.
///
/// Arguments are unsigned, so only 0!! stands in for the empty case; callers
/// pass `2m - 1` for odd products and even values for loop counts.
pub fn double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Falling factorial (n)_k = n (n-1) … (n-k+1); zero once k exceeds n.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
    }
    acc
}

/// Rising factorial x^{(k)} = x (x+1) … (x+k-1) for rational x.
pub fn rising_factorial(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= x + BigRational::from_integer(BigInt::from(j));
    }
    acc
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= n - j;
        den *= j + 1;
    }
    num / den
}

/// Rational from an integer pair, `p / q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Rational from an unsigned integer.
pub fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Round-to-nearest f64 view of a rational, exact when representable.
///
/// `Ratio<BigInt>::to_f64` can overflow to NaN for huge components, so the
/// fallback rescales numerator and denominator together first.
pub fn to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let bits_n = r.numer().bits() as i64;
    let bits_d = r.denom().bits() as i64;
    let shift = (bits_n.max(bits_d) - 900).max(0) as u64;
    let scaled = BigRational::new(r.numer() >> shift, r.denom() >> shift.min(bits_d as u64 - 1));
    scaled.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}
