use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative tolerance used by floating-point scalars when deciding zero-ness.
pub const FLOAT_TOL: f64 = 1e-8;

/// A commutative ring with identity, used for matrix and polynomial entries.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
}

/// Coefficient field. Implemented by exact rationals, Gaussian rationals, and
/// double-precision complex numbers.
pub trait Field: Ring + Div<Output = Self> + 'static {
    /// Whether equality and zero tests are exact.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;
    fn to_complex(&self) -> Complex64;
    fn conj(&self) -> Self;

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Zero test: exact for exact fields, `|x| <= tol * max(scale, 1)` otherwise.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale.max(1.0)
        }
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: Zero::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_i64(re), BigRational::from_i64(im))
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.is_real() && o.is_real() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        assert!(!Ring::is_zero(o), "division by zero Gaussian rational");
        if o.is_real() {
            return GaussianRational::new(&self.re / &o.re, &self.im / &o.re);
        }
        let d = o.norm_sqr();
        let num = self * &o.conj();
        GaussianRational::new(num.re / &d, num.im / d)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_i64(v: i64) -> Self {
        Self::real(BigRational::from_i64(v))
    }
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        Self::real(q.clone())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

/// Render a rational as `"p/q"`. The denominator is always written.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if Zero::is_zero(&den) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Shorthand for building small rationals in code and tests.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_and_reduction() {
        let q = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn gaussian_field_ops() {
        let a = GaussianRational::from_ints(1, 2);
        let b = GaussianRational::from_ints(3, -1);
        let p = &a * &b;
        assert_eq!(p, GaussianRational::from_ints(5, 5));
        assert_eq!(&p / &b, a);
        assert_eq!(a.conj(), GaussianRational::from_ints(1, -2));
        assert_eq!(a.norm_sqr(), rat(5, 1));
        assert_eq!(format!("{}", a), "1+2i");
    }

    #[test]
    fn negligible_is_exact_for_rationals() {
        assert!(!rat(1, 1_000_000_000).is_negligible(1.0, 1e-3));
        assert!(Complex64::new(1e-12, 0.0).is_negligible(1.0, 1e-8));
    }
}
