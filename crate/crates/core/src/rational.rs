//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Field of coefficients for every computation in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `p/q`, `p` or `-p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::parse(0, format!("bad rational `{t}`")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::parse(0, format!("bad rational `{t}`")))?;
            if d.is_zero() {
                return Err(Error::parse(0, format!("zero denominator in `{t}`")));
            }
            Q::new(n, d)
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| Error::parse(0, format!("bad rational `{t}`")))?;
            Q::from_integer(n)
        }
    };
    Ok(parsed)
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -one()
    } else {
        one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_q("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse_q("-3").unwrap(), q(-3));
        assert_eq!(parse_q(" 4/6 ").unwrap(), frac(2, 3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), q(1));
        assert_eq!(factorial(5), q(120));
    }
}
