//! Exact scalars, dense univariate polynomials over the rationals, rational
//! root extraction and a little exact linear algebra.

pub mod linalg;
mod roots;
mod unipoly;

pub use roots::{poly_from_linear_factors, rational_roots, RootList};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Least common multiple of the denominators and gcd of the numerators of a
/// list of rationals. Used to bring coefficient vectors to primitive integer form.
pub fn content_scale<'a, I>(values: I) -> Rational
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for v in values {
        lcm = lcm.lcm(v.denom());
        gcd = gcd.gcd(v.numer());
    }
    if gcd.is_zero() {
        return Rational::one();
    }
    // multiplying by lcm/gcd makes every entry an integer with content one
    Rational::new(lcm, gcd.abs())
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn pow(r: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}
