use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Field;
use super::ExactError;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` with an optional sign.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(text.to_string());
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(bad());
    }
    match trimmed.split_once('/') {
        None => BigInt::from_str(trimmed).map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Prints `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inv(&self) -> Result<Self, ExactError> {
        if Zero::is_zero(self) {
            Err(ExactError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(q: Rational) -> Self {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-4/6").unwrap(), Rational::new((-2).into(), 3.into()));
        assert_eq!(parse_rational("+7").unwrap(), Rational::from_integer(7.into()));
        assert_eq!(parse_rational(" 0 ").unwrap(), Rational::from_int(0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "x", "1.5", "1/2/3", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn normalizes_sign_into_numerator() {
        let q = parse_rational("3/-6").unwrap();
        assert_eq!(format_rational(&q), "-1/2");
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(n in -10_000i64..10_000, d in 1i64..500) {
            let q = Rational::new(n.into(), d.into());
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}
