//! Gaussian rationals: exact complex numbers `a + b·i` with `a, b ∈ ℚ`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element of ℚ(i). Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(re)), im: BigRational::from_integer(BigInt::from(im)) }
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Self::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Square root inside ℚ(i), if one exists. The root with non-negative real
    /// part (and non-negative imaginary part when the real part is zero) is returned.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_real() {
            return if self.re.is_positive() {
                rational_sqrt(&self.re).map(Self::from_rational)
            } else {
                rational_sqrt(&-self.re.clone()).map(|r| Scalar { re: BigRational::zero(), im: r })
            };
        }
        // (x + iy)² = a + bi  ⇔  x² − y² = a, 2xy = b
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / (&two * &x);
        let root = Scalar { re: x, im: y };
        debug_assert!(&(&root * &root) == self);
        Some(root)
    }

    /// Deterministic total order used for canonical output (real part, then imaginary part).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Parse an exact rational literal `p`, `-p`, or `p/q`. Decimal points and
    /// exponents are rejected.
    pub fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseScalarError::Malformed(s.to_string()));
        }
        if t.contains(['.', 'e', 'E']) {
            return Err(ParseScalarError::Inexact(s.to_string()));
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        let den = BigInt::from_str(den).map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        Ok(BigRational::new(num, den))
    }

    /// Inverse of [`Scalar::parse_rational`].
    pub fn format_rational(r: &BigRational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("inexact literal `{0}`: only integers and p/q fractions are accepted")]
    Inexact(String),
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = Scalar::format_rational(&self.re);
        if self.im.is_zero() {
            return f.write_str(&re);
        }
        let im_abs = Scalar::format_rational(&self.im.abs());
        let im_part = if self.im.abs().is_one() { "i".to_string() } else { format!("{im_abs}i") };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                f.write_str(&im_part)
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "({re}{sign}{im_part})")
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::from_rational(&self.re + &rhs.re);
        }
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::from_rational(&self.re - &rhs.re);
        }
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() {
            if rhs.im.is_zero() {
                return Scalar::from_rational(&self.re * &rhs.re);
            }
            return Scalar { re: &self.re * &rhs.re, im: &self.re * &rhs.im };
        }
        if rhs.im.is_zero() {
            return Scalar { re: &self.re * &rhs.re, im: &self.im * &rhs.re };
        }
        Scalar { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero scalar");
            return Scalar { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut a, b| {
            a += &b;
            a
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| &a * &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::gaussian(1, 2);
        let b = Scalar::from_frac(3, 4);
        assert_eq!(&(&a * &a.inv().unwrap()), &Scalar::one());
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(Scalar::i().pow(2), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::from_frac(9, 4).sqrt(), Some(Scalar::from_frac(3, 2)));
        assert_eq!(Scalar::from_int(-4).sqrt(), Some(Scalar::gaussian(0, 2)));
        assert_eq!(Scalar::from_int(2).sqrt(), None);
        // (1 + 2i)² = −3 + 4i
        assert_eq!(Scalar::gaussian(-3, 4).sqrt(), Some(Scalar::gaussian(1, 2)));
        assert_eq!(Scalar::gaussian(0, 2).sqrt(), Some(Scalar::gaussian(1, 1)));
        assert_eq!(Scalar::gaussian(1, 1).sqrt(), None);
    }

    #[test]
    fn parsing_rejects_floats() {
        assert!(matches!(Scalar::parse_rational("0.5"), Err(ParseScalarError::Inexact(_))));
        assert!(matches!(Scalar::parse_rational("1e3"), Err(ParseScalarError::Inexact(_))));
        assert_eq!(Scalar::parse_rational("-6/4").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(Scalar::parse_rational("1/0").is_err());
        assert!(Scalar::parse_rational("abc").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::from_frac(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::gaussian(0, -1).to_string(), "-i");
        assert_eq!(Scalar::gaussian(2, 3).to_string(), "(2+3i)");
    }
}
