//! Exact rational arithmetic helpers.
//!
//! Every weight, cut-rate and probability in the crate is a [`Rational`].
//! Hot loops (max-flow, subset enumeration) work on integers obtained by
//! scaling a vector of rationals to a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_usize(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Formats as `p/q` in lowest terms with a positive denominator, even when
/// the denominator is one.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// A vector of rationals expressed as integer numerators over one shared
/// positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scaled {
    pub numerators: Vec<i128>,
    pub denominator: i128,
}

impl Scaled {
    pub fn new<'a, I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Rational>,
        I::IntoIter: Clone,
    {
        let values = values.into_iter();
        let lcm = values
            .clone()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let numerators = values
            .map(|v| {
                let scaled = v.numer() * (&lcm / v.denom());
                scaled.to_i128().ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        let denominator = lcm.to_i128().ok_or(Error::Overflow)?;
        Ok(Scaled {
            numerators,
            denominator,
        })
    }

    pub fn to_rational(&self, numerator: i128) -> Rational {
        Rational::new(BigInt::from(numerator), BigInt::from(self.denominator))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format(&ratio(6, 12)), "1/2");
        assert_eq!(format(&ratio(3, -9)), "-1/3");
        assert_eq!(format(&int(1)), "1/1");
        assert_eq!(format(&int(0)), "0/1");
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("2/4"), Some(ratio(1, 2)));
        assert_eq!(parse(" 3 "), Some(int(3)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x/2"), None);
    }

    #[test]
    fn scales_to_common_denominator() {
        let values = [ratio(1, 2), ratio(1, 3), int(0)];
        let scaled = Scaled::new(values.iter()).unwrap();
        assert_eq!(scaled.denominator, 6);
        assert_eq!(scaled.numerators, vec![3, 2, 0]);
        assert_eq!(scaled.to_rational(4), ratio(2, 3));
    }
}
