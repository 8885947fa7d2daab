//! Reduced rational functions in the equivariant parameters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::SeriesError;
use crate::field::{field_coeff, parse_rational, rational_to_string, Coeff, Field, Module};
use crate::poly::{gcd, Poly};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// The parameter `λ_{i+1}`.
    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, SeriesError> {
        if den.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        if let Some(c) = den.constant_value() {
            return RatFunc { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let s = lc.recip();
            RatFunc { num: num.scale(&s), den: den.scale(&s) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Evaluates at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    fn add_impl(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = gcd(&self.den, &o.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        let den = g.mul(&a).mul(&b);
        Self::reduce(num, den)
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: Poly::one() };
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff();
        let s = lc.recip();
        RatFunc { num: num.scale(&s), den: den.scale(&s) }
    }

    fn inv_impl(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let lc = self.num.leading_coeff().recip();
        Some(RatFunc { num: self.den.scale(&lc), den: self.num.scale(&lc) })
    }

    /// Substitutes every parameter by a rational function.
    pub fn substitute(&self, values: &[RatFunc]) -> Option<RatFunc> {
        let ev = |p: &Poly| -> RatFunc {
            let mut acc = RatFunc::zero();
            for (e, c) in p.terms() {
                let mut t = RatFunc::from_rational(c);
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        let x = values.get(i).cloned().unwrap_or_else(|| RatFunc::var(i));
                        t = t.mul_impl(&Field::powu(&x, k));
                    }
                }
                acc = acc.add_impl(&t);
            }
            acc
        };
        ev(&self.num).over(&ev(&self.den))
    }
}

fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!({"exponents": e, "coeff": rational_to_string(c)})).collect())
}

fn poly_from_json(v: &Value) -> Result<Poly, SeriesError> {
    let arr = v.as_array().ok_or_else(|| SeriesError::Parse("polynomial must be a list".into()))?;
    let mut terms = Vec::new();
    for t in arr {
        let e = t
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| SeriesError::Parse("term missing exponents".into()))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| SeriesError::Parse("bad exponent".into()))?;
        let c =
            t.get("coeff").and_then(Value::as_str).ok_or_else(|| SeriesError::Parse("term missing coeff".into()))?;
        terms.push((e, parse_rational(c)?));
    }
    Ok(Poly::from_terms(terms))
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        self.add_impl(&o)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self.add_impl(&-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        self.mul_impl(&o)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        self.mul_impl(&o.inv_impl().expect("division by zero rational function"))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den }
    }
}

field_coeff!(RatFunc);

impl Field for RatFunc {
    fn from_rational(r: &BigRational) -> Self {
        RatFunc { num: Poly::constant(r.clone()), den: Poly::one() }
    }

    fn inverse(&self) -> Option<Self> {
        self.inv_impl()
    }

    fn to_json(&self) -> Value {
        json!({"num": poly_to_json(&self.num), "den": poly_to_json(&self.den)})
    }

    fn from_json(v: &Value) -> Result<Self, SeriesError> {
        if let Value::String(_) = v {
            return BigRational::from_json(v).map(|r| RatFunc::from_rational(&r));
        }
        let num = poly_from_json(v.get("num").ok_or_else(|| SeriesError::Parse("missing num".into()))?)?;
        let den = poly_from_json(v.get("den").ok_or_else(|| SeriesError::Parse("missing den".into()))?)?;
        RatFunc::new(num, den)
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.num.constant_value()? / self.den.constant_value()?)
        } else {
            None
        }
    }

    fn plus(&self, o: &Self) -> Self {
        self.add_impl(o)
    }

    fn minus(&self, o: &Self) -> Self {
        self.add_impl(&o.neg_ref())
    }

    fn times(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: usize) -> RatFunc {
        RatFunc::var(i)
    }

    #[test]
    fn partial_fraction_identity() {
        let a = l(0) - l(1);
        let b = l(1) - l(2);
        let lhs = RatFunc::one() / (a.clone() * (a.clone() + b.clone()));
        let rhs = (RatFunc::one() / a.clone() - RatFunc::one() / (a.clone() + b.clone())) / b.clone();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trip() {
        let x = (l(0) * l(0) + RatFunc::from_i64(3)) / (l(1) - l(0));
        assert_eq!(x.clone() * x.inverse().unwrap(), RatFunc::one());
    }

    #[test]
    fn cancellation_to_constant() {
        let x = (l(0) - l(1)) / (l(1) - l(0));
        assert_eq!(x, RatFunc::from_i64(-1));
        assert_eq!(x.as_rational(), Some(BigRational::from_integer((-1).into())));
    }

    #[test]
    fn json_round_trip() {
        let x = (l(0) * l(2) + RatFunc::from_frac(1, 3)) / (l(1) + RatFunc::from_i64(2));
        let back = RatFunc::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
    }
}
