//! Exact arithmetic in the Gaussian rationals, the field of numbers
//! `a + b·i` with `a` and `b` rational.
//!
//! Values are always stored in reduced form (the rational parts are kept
//! normalized by [`num_rational`]), so equality and hashing are structural.
//! The total order compares the real part first and the imaginary part
//! second; it carries no algebraic meaning and only exists to make sorted
//! output deterministic.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational with positive denominator in lowest terms.
pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a real scalar. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: Rational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: Rational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`, exact.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `conj(z) / norm(z)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident, $assign:ident, $assign_method:ident) => {
        impl $imp<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $imp<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }

        impl $assign<&GaussianRational> for GaussianRational {
            fn $assign_method(&mut self, rhs: &GaussianRational) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = self.re.is_zero();
        let im_zero = self.im.is_zero();
        if im_zero {
            return write!(f, "{}", self.re);
        }
        if !re_zero {
            write!(f, "{}", self.re)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.im.is_one() {
            f.write_str("i")
        } else if (-&self.im).is_one() {
            f.write_str("-i")
        } else {
            write!(f, "{}i", self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn int(&mut self) -> Result<Option<BigInt>> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        // digits only, so this cannot fail
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(Some(text.parse().expect("ascii digits")))
    }

    fn rat(&mut self) -> Result<Option<Rational>> {
        let Some(num) = self.int()? else {
            return Ok(None);
        };
        if self.peek() != Some(b'/') {
            return Ok(Some(Rational::from_integer(num)));
        }
        self.pos += 1;
        let den_pos = self.pos;
        match self.int()? {
            Some(den) if den.is_zero() => Err(Error::Parse {
                position: den_pos,
                message: "zero denominator".into(),
            }),
            Some(den) => Ok(Some(Rational::new(num, den))),
            None => self.err("expected denominator digits"),
        }
    }

    /// `sign? rat? "i"?`; returns the value and whether an `i` was read.
    fn term(&mut self, require_sign: bool) -> Result<(Rational, bool)> {
        let negative = match self.sign() {
            Some(neg) => neg,
            None if require_sign => return self.err("expected '+' or '-'"),
            None => false,
        };
        let coeff = self.rat()?;
        let imaginary = self.peek() == Some(b'i');
        if imaginary {
            self.pos += 1;
        }
        let value = match (coeff, imaginary) {
            (Some(r), _) => r,
            (None, true) => Rational::one(),
            (None, false) => return self.err("expected a number or 'i'"),
        };
        Ok((if negative { -value } else { value }, imaginary))
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        };
        if s.is_empty() {
            return cur.err("empty scalar");
        }
        let (first, first_imag) = cur.term(false)?;
        let value = if first_imag {
            GaussianRational::new(Rational::zero(), first)
        } else if cur.peek().is_none() {
            GaussianRational::real(first)
        } else {
            let (second, second_imag) = cur.term(true)?;
            if !second_imag {
                return cur.err("expected 'i' after imaginary coefficient");
            }
            GaussianRational::new(first, second)
        };
        if cur.peek().is_some() {
            return cur.err("unexpected trailing input");
        }
        Ok(value)
    }
}

/// Parse a scalar string such as `"3/2-1/4i"`.
pub fn parse(s: &str) -> Result<GaussianRational> {
    s.parse()
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
