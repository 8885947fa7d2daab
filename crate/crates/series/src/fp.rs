//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used for randomized equality: a rational-function identity is checked by
//! evaluating both sides at random parameter values in this field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::SeriesError;
use crate::field::{field_coeff, Coeff, Field, Module};

pub const MODULUS: u64 = (1u64 << 61) - 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mul_raw(a: u64, b: u64) -> u64 {
        let p = (a as u128) * (b as u128);
        let lo = (p as u64) & MODULUS;
        let hi = (p >> 61) as u64;
        let s = lo + hi;
        if s >= MODULUS {
            s - MODULUS
        } else {
            s
        }
    }

    fn pow_raw(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, b);
            }
            b = Self::mul_raw(b, b);
            e >>= 1;
        }
        acc
    }

    fn from_bigint(n: &BigInt) -> Fp {
        let m = BigInt::from(MODULUS);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("reduced residue fits"))
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + MODULUS - o.0 })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(Fp::mul_raw(self.0, o.0))
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, o: Fp) -> Fp {
        self * o.inverse().expect("division by zero in Fp")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
}

field_coeff!(Fp);

impl Field for Fp {
    fn from_rational(r: &BigRational) -> Self {
        let n = Fp::from_bigint(r.numer());
        let d = Fp::from_bigint(r.denom());
        n / d
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Fp(Fp::pow_raw(self.0, MODULUS - 2)))
        }
    }

    fn to_json(&self) -> Value {
        Value::String(self.0.to_string())
    }

    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let r = BigRational::from_json(v)?;
        Ok(Fp::from_rational(&r))
    }

    fn as_rational(&self) -> Option<BigRational> {
        None
    }

    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }

    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }

    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^61-1)", self.0)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fp({})", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_rational_embedding() {
        let a = Fp::new(123456789);
        assert_eq!(a * a.inverse().unwrap(), Fp::one());
        let third = Fp::from_frac(1, 3);
        assert_eq!(third * Fp::from_i64(3), Fp::one());
        assert_eq!(Fp::from_i64(-1) + Fp::one(), Fp::zero());
    }
}
