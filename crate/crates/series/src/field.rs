//! Exact scalar fields.
//!
//! Every numeric computation in the workspace is generic over [`Field`]. The
//! concrete choices are big rationals, reduced rational functions in the
//! equivariant parameters, and a large prime field for randomized checks.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::SeriesError;

/// Values that can be stored in a sparse series.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn is_zero_coeff(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Whether two values live in the same algebra (same basis, same ring).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
    /// Multiplicative inverse, when the value is a unit.
    fn try_inverse(&self) -> Option<Self>;

    fn sub_assign_ref(&mut self, other: &Self) {
        self.add_assign_ref(&other.neg_ref());
    }
}

/// Coefficient types that are vector spaces over the scalar field `F`.
pub trait Module<F>: Coeff {
    fn scale(&self, c: &F) -> Self;
}

/// An exact field, usable as the scalar type of every series.
pub trait Field:
    Coeff
    + Module<Self>
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;

    fn inverse(&self) -> Option<Self>;

    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self, SeriesError>;

    /// The rational value, when the element is a rational constant.
    fn as_rational(&self) -> Option<BigRational>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn plus(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }

    fn minus(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }

    fn times(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }

    fn over(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|inv| self.times(&inv))
    }

    fn powu(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    fn powi(&self, e: i32) -> Option<Self> {
        if e >= 0 {
            Some(self.powu(e as u32))
        } else {
            self.inverse().map(|inv| inv.powu(e.unsigned_abs()))
        }
    }
}

macro_rules! field_coeff {
    ($t:ty) => {
        impl Coeff for $t {
            fn is_zero_coeff(&self) -> bool {
                Zero::is_zero(self)
            }
            fn add_assign_ref(&mut self, other: &Self) {
                *self = Field::plus(self, other);
            }
            fn neg_ref(&self) -> Self {
                -self.clone()
            }
            fn mul_ref(&self, other: &Self) -> Self {
                Field::times(self, other)
            }
            fn try_inverse(&self) -> Option<Self> {
                Field::inverse(self)
            }
        }
        impl Module<$t> for $t {
            fn scale(&self, c: &$t) -> Self {
                Field::times(self, c)
            }
        }
    };
}
pub(crate) use field_coeff;

field_coeff!(BigRational);

impl Field for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(rational_to_string(self))
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, SeriesError> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|i| BigRational::from_integer(BigInt::from(i)))
                .ok_or_else(|| SeriesError::Parse(format!("not an exact integer: {n}"))),
            other => Err(SeriesError::Parse(format!("expected rational string, got {other}"))),
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn plus(&self, o: &Self) -> Self {
        self + o
    }

    fn minus(&self, o: &Self) -> Self {
        self - o
    }

    fn times(&self, o: &Self) -> Self {
        self * o
    }
}

/// Canonical `p/q` rendering; integers print without a denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, SeriesError> {
    let s = s.trim();
    let bad = || SeriesError::Parse(format!("malformed rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(SeriesError::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n`.
pub fn binomial(n: i64, k: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_negative(r: &BigRational) -> bool {
    r.is_negative()
}
