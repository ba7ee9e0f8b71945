//! Exact ordered-field scalars.
//!
//! Every computation in this crate is exact. The geometry is written against
//! [`Scalar`], which is implemented for arbitrary-precision rationals
//! ([`BigRational`]) and for the fixed-width `Ratio<i64>` / `Ratio<i128>`.
//! The fixed-width variants are faster but panic on overflow; use them only
//! for small inputs.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, Zero};

/// An exact ordered field element.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static {
    /// Converts from an arbitrary-precision rational, `None` if out of range.
    fn from_rational(q: &BigRational) -> Option<Self>;

    fn to_rational(&self) -> BigRational;

    fn from_int(n: i64) -> Self;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;

    fn is_integer(&self) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn ceil(&self) -> Self {
        Ratio::ceil(self)
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }
}

macro_rules! impl_fixed_scalar {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_rational(q: &BigRational) -> Option<Self> {
                let n: $int = q.numer().try_into().ok()?;
                let d: $int = q.denom().try_into().ok()?;
                Some(Ratio::new(n, d))
            }

            fn to_rational(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_int(n: i64) -> Self {
                Ratio::from_integer(n as $int)
            }

            fn floor(&self) -> Self {
                Ratio::floor(self)
            }

            fn ceil(&self) -> Self {
                Ratio::ceil(self)
            }

            fn is_integer(&self) -> bool {
                Ratio::is_integer(self)
            }
        }
    };
}

impl_fixed_scalar!(i64);
impl_fixed_scalar!(i128);

/// Positive factor `f` such that `f * v` is a vector of coprime integers.
/// `None` when every entry is zero.
pub fn coprime_scale<S: Scalar>(values: &[S]) -> Option<S> {
    let mut lcm = BigInt::one();
    let mut any = false;
    for v in values.iter().filter(|v| !v.is_zero()) {
        any = true;
        lcm = lcm.lcm(v.to_rational().denom());
    }
    if !any {
        return None;
    }
    let mut gcd = BigInt::zero();
    for v in values.iter().filter(|v| !v.is_zero()) {
        let q = v.to_rational();
        let scaled = q.numer() * (&lcm / q.denom());
        gcd = gcd.gcd(&scaled);
    }
    S::from_rational(&BigRational::new(lcm, gcd))
}

/// Renders a scalar as `p` or `p/q`.
pub fn render<S: Scalar>(v: &S) -> String {
    let q = v.to_rational();
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (with optional leading `-`).
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() || den.is_negative() {
        return None;
    }
    S::from_rational(&BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn coprime_scale_clears_denominators() {
        let v = [q(1, 2), q(-3, 4), q(0, 1)];
        let f = coprime_scale(&v).unwrap();
        let scaled: Vec<Q> = v.iter().map(|x| x * &f).collect();
        assert_eq!(scaled, vec![q(2, 1), q(-3, 1), q(0, 1)]);
    }

    #[test]
    fn coprime_scale_divides_common_factor() {
        let v = [q(4, 1), q(6, 1)];
        assert_eq!(coprime_scale(&v), Some(q(1, 2)));
        assert_eq!(coprime_scale::<Q>(&[q(0, 1)]), None);
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_scalar::<Q>("-3/2"), Some(q(-3, 2)));
        assert_eq!(parse_scalar::<Q>("6/4"), Some(q(3, 2)));
        assert_eq!(parse_scalar::<Q>("1/0"), None);
        assert_eq!(parse_scalar::<Q>("1/-2"), None);
        assert_eq!(render(&q(-3, 2)), "-3/2");
        assert_eq!(render(&q(4, 1)), "4");
    }

    #[test]
    fn fixed_width_round_trip() {
        let big = q(-7, 3);
        let small = Ratio::<i64>::from_rational(&big).unwrap();
        assert_eq!(small.to_rational(), big);
        assert_eq!(Scalar::floor(&small), Ratio::from_integer(-3));
        assert_eq!(Scalar::ceil(&small), Ratio::from_integer(-2));
    }
}
