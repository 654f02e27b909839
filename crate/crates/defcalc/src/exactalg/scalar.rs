use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .or_else(|_| invalid(format!("bad rational '{s}'")))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_int(b)?;
            if d.is_zero() {
                return invalid(format!("zero denominator in '{s}'"));
            }
            Ok(Q::new(parse_int(a)?, d))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn factorial(n: usize) -> Q {
    let mut f = Q::one();
    for k in 2..=n {
        f *= q(k as i64);
    }
    f
}

/// Bernoulli numbers B_0..B_n with B_1 = -1/2.
pub(crate) fn bernoulli(n: usize) -> Vec<Q> {
    let mut b = vec![Q::zero(); n + 1];
    b[0] = Q::one();
    for m in 1..=n {
        let mut s = Q::zero();
        let mut binom = Q::one();
        for k in 0..m {
            s += &binom * &b[k];
            binom = binom * q((m + 1 - k) as i64) / q((k + 1) as i64);
        }
        b[m] = -s / q((m + 1) as i64);
    }
    b
}
