//! Exact rational numbers for orbiconfiguration parameters.

use num_integer::Integer;

/// Always in lowest terms with a positive denominator.
pub type Rational = num_rational::Ratio<i64>;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Formats `3/2` or `2` (no denominator when integral).
pub fn display(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Returns the integer value when `value` is integral.
pub fn as_integer(value: &Rational) -> Option<i64> {
    value.is_integer().then(|| value.to_integer())
}

pub fn gcd_all<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, |acc, v| acc.gcd(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = frac(6, -4);
        assert_eq!(*r.numer(), -3);
        assert_eq!(*r.denom(), 2);
        assert_eq!(display(&(frac(1, 2) + frac(1, 1))), "3/2");
        assert_eq!(display(&frac(4, 2)), "2");
        assert_eq!(as_integer(&frac(3, 2)), None);
        assert_eq!(gcd_all([4, 6, 10]), 2);
        assert_eq!(gcd_all([2, 1]), 1);
    }
}
