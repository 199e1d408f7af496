//! Exact rational scalars and the small integer sequences used throughout.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational with arbitrary-precision numerator and denominator.
///
/// `BigRational` keeps values reduced with a positive denominator, which is
/// exactly the invariant the rest of the crate relies on for equality tests.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_big(n: BigInt) -> Scalar {
    Scalar::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Scalar::new(num, den));
    }
    if let Some((whole, decimals)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), decimals);
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
        let den = num_traits::pow(BigInt::from(10), decimals.len());
        let value = Scalar::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    let num: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    Ok(Scalar::from_integer(num))
}

/// `p/q`, or just `p` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient with an arbitrary (possibly huge) upper index.
pub fn binomial_big(n: &BigInt, k: usize) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        let factor = n - BigInt::from(i);
        if factor.is_zero() {
            return BigInt::zero();
        }
        acc *= factor;
    }
    acc / factorial(k)
}

pub fn pow(x: &Scalar, e: usize) -> Scalar {
    num_traits::pow(x.clone(), e)
}

/// Catalan number by the convolution recurrence.
pub fn catalan(n: usize) -> BigInt {
    let mut c = vec![BigInt::one()];
    for m in 0..n {
        let next = (0..=m).map(|i| &c[i] * &c[m - i]).sum();
        c.push(next);
    }
    c.swap_remove(n)
}

/// `(2k-1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// Bernoulli numbers `B_0..=B_n` from `sum_{k<=m} C(m+1,k) B_k = 0`, so `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Scalar> {
    let mut b: Vec<Scalar> = Vec::with_capacity(n + 1);
    b.push(Scalar::one());
    for m in 1..=n {
        let acc: Scalar = (0..m)
            .map(|k| from_big(binomial(m + 1, k)) * &b[k])
            .sum();
        b.push(-acc / from_big(BigInt::from(m + 1)));
    }
    b
}
