//! Rational functions of `z` kept in partial-fraction normal form.
//!
//! A value is a Laurent polynomial in `z` plus principal parts at finitely
//! many nonzero points:
//! `sum_k c_k z^k + sum_a sum_m r_{a,m} / (z - a)^m`.
//! Poles at `z = 0` are the negative powers of the Laurent part, so
//! regularity at the origin is read off directly. Expansions at infinity
//! (series in `1/z`) and at the origin (series in `z`) are both available.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::SeriesError;
use crate::field::{binomial, Coeff, Field, Module};

#[derive(Clone)]
pub struct Pole<F> {
    pub at: F,
    /// `orders[m]` multiplies `(z - at)^{-(m+1)}`.
    pub orders: Vec<F>,
}

#[derive(Clone)]
pub struct ZFrac<F> {
    laurent: BTreeMap<i32, F>,
    poles: Vec<Pole<F>>,
}

fn bin<F: Field>(n: i64, k: u32) -> F {
    F::from_rational(&binomial(n, k))
}

impl<F: Field> ZFrac<F> {
    pub fn zero() -> Self {
        ZFrac { laurent: BTreeMap::new(), poles: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// `c z^k`.
    pub fn monomial(k: i32, c: F) -> Self {
        let mut z = Self::zero();
        z.add_laurent(k, c);
        z
    }

    /// `c / (z - a)^m`; a pole at the origin becomes `c z^{-m}`.
    pub fn pole(a: F, m: usize, c: F) -> Self {
        if a.is_zero() {
            return Self::monomial(-(m as i32), c);
        }
        let mut z = Self::zero();
        z.add_pole(&a, m, c);
        z
    }

    /// `1 / (s z + b)` for a nonzero slope `s`.
    pub fn inverse_linear(s: &F, b: &F) -> Result<Self, SeriesError> {
        let si = s.inverse().ok_or(SeriesError::DivisionByZero)?;
        let a = -(b.times(&si));
        Ok(Self::pole(a, 1, si))
    }

    /// `s z + b`.
    pub fn linear(s: F, b: F) -> Self {
        let mut z = Self::monomial(1, s);
        z.add_laurent(0, b);
        z
    }

    fn add_laurent(&mut self, k: i32, c: F) {
        if c.is_zero() {
            return;
        }
        match self.laurent.get_mut(&k) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.laurent.remove(&k);
                }
            }
            None => {
                self.laurent.insert(k, c);
            }
        }
    }

    fn add_pole(&mut self, a: &F, m: usize, c: F) {
        if c.is_zero() {
            return;
        }
        if a.is_zero() {
            self.add_laurent(-(m as i32), c);
            return;
        }
        let idx = match self.poles.iter().position(|p| &p.at == a) {
            Some(i) => i,
            None => {
                self.poles.push(Pole { at: a.clone(), orders: Vec::new() });
                self.poles.len() - 1
            }
        };
        let p = &mut self.poles[idx];
        if p.orders.len() < m {
            p.orders.resize(m, F::zero());
        }
        p.orders[m - 1] = p.orders[m - 1].plus(&c);
        while p.orders.last().is_some_and(|x| x.is_zero()) {
            p.orders.pop();
        }
        if p.orders.is_empty() {
            self.poles.remove(idx);
        }
    }

    pub fn laurent(&self) -> &BTreeMap<i32, F> {
        &self.laurent
    }

    pub fn poles(&self) -> &[Pole<F>] {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.laurent.is_empty() && self.poles.is_empty()
    }

    /// True when the function has no pole at the origin.
    pub fn is_regular_at_zero(&self) -> bool {
        self.laurent.keys().all(|&k| k >= 0)
    }

    /// True for a polynomial in `z`.
    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty() && self.is_regular_at_zero()
    }

    /// True for a polynomial in `1/z` (no poles away from the origin and no positive powers).
    pub fn is_inverse_polynomial(&self) -> bool {
        self.poles.is_empty() && self.laurent.keys().all(|&k| k <= 0)
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.poles.is_empty() && self.laurent.keys().all(|&k| k == 0) {
            Some(self.laurent.get(&0).cloned().unwrap_or_else(F::zero))
        } else {
            None
        }
    }

    /// Coefficients of negative powers of `z` in the expansion at the origin.
    pub fn polar_part_at_zero(&self) -> BTreeMap<i32, F> {
        self.laurent.range(..0).map(|(k, v)| (*k, v.clone())).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.laurent {
            out.add_laurent(*k, c.clone());
        }
        for p in &o.poles {
            for (m, c) in p.orders.iter().enumerate() {
                out.add_pole(&p.at, m + 1, c.clone());
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ZFrac {
            laurent: self.laurent.iter().map(|(k, v)| (*k, v.times(c))).collect(),
            poles: self
                .poles
                .iter()
                .map(|p| Pole { at: p.at.clone(), orders: p.orders.iter().map(|x| x.times(c)).collect() })
                .collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut out =
            ZFrac { laurent: self.laurent.iter().map(|(e, v)| (e + k, v.clone())).collect(), poles: Vec::new() };
        for p in &self.poles {
            for (m, c) in p.orders.iter().enumerate() {
                out = out.add(&mono_pole(k, &p.at, m + 1).scale(c));
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.laurent {
            for (kb, cb) in &o.laurent {
                out.add_laurent(ka + kb, ca.times(cb));
            }
        }
        for (ka, ca) in &self.laurent {
            for p in &o.poles {
                for (m, c) in p.orders.iter().enumerate() {
                    out = out.add(&mono_pole(*ka, &p.at, m + 1).scale(&ca.times(c)));
                }
            }
        }
        for p in &self.poles {
            for (m, c) in p.orders.iter().enumerate() {
                for (kb, cb) in &o.laurent {
                    out = out.add(&mono_pole(*kb, &p.at, m + 1).scale(&c.times(cb)));
                }
                for q in &o.poles {
                    for (n, d) in q.orders.iter().enumerate() {
                        out = out.add(&pole_pole(&p.at, m + 1, &q.at, n + 1).scale(&c.times(d)));
                    }
                }
            }
        }
        out
    }

    /// The function `z -> f(-z)`.
    pub fn negate_z(&self) -> Self {
        let mut out = ZFrac {
            laurent: self.laurent.iter().map(|(k, v)| (*k, if k % 2 == 0 { v.clone() } else { v.neg_ref() })).collect(),
            poles: Vec::new(),
        };
        for p in &self.poles {
            let at = p.at.neg_ref();
            for (m, c) in p.orders.iter().enumerate() {
                let c = if (m + 1) % 2 == 0 { c.clone() } else { c.neg_ref() };
                out.add_pole(&at, m + 1, c);
            }
        }
        out
    }

    /// Value at a point that is not a pole.
    pub fn eval(&self, z: &F) -> Result<F, SeriesError> {
        let mut acc = F::zero();
        for (k, c) in &self.laurent {
            let p = z.powi(*k).ok_or_else(|| SeriesError::Pole("z = 0".into()))?;
            acc = acc.plus(&c.times(&p));
        }
        for p in &self.poles {
            let d = z.minus(&p.at);
            let di = d.inverse().ok_or_else(|| SeriesError::Pole(format!("z = {}", p.at)))?;
            let mut pw = di.clone();
            for c in &p.orders {
                acc = acc.plus(&c.times(&pw));
                pw = pw.times(&di);
            }
        }
        Ok(acc)
    }

    /// Expansion at infinity: coefficients of `z^e` for `e >= z_min`.
    pub fn expand_at_infinity(&self, z_min: i32) -> BTreeMap<i32, F> {
        let mut out: BTreeMap<i32, F> = BTreeMap::new();
        let mut put = |e: i32, c: F| {
            if c.is_zero() {
                return;
            }
            let v = out.entry(e).or_insert_with(F::zero);
            *v = v.plus(&c);
        };
        for (k, c) in &self.laurent {
            if *k >= z_min {
                put(*k, c.clone());
            }
        }
        for p in &self.poles {
            for (m, c) in p.orders.iter().enumerate() {
                let m = m as i64 + 1;
                // (z-a)^{-m} = sum_j C(m+j-1, j) a^j z^{-m-j}
                let mut j = 0i64;
                let mut apow = F::one();
                while -(m + j) >= z_min as i64 {
                    put(-(m + j) as i32, c.times(&bin::<F>(m + j - 1, j as u32)).times(&apow));
                    apow = apow.times(&p.at);
                    j += 1;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Expansion at the origin: coefficients of `z^e` for `e <= z_max`.
    pub fn expand_at_zero(&self, z_max: i32) -> BTreeMap<i32, F> {
        let mut out: BTreeMap<i32, F> = BTreeMap::new();
        for (k, c) in &self.laurent {
            if *k <= z_max {
                out.insert(*k, c.clone());
            }
        }
        for p in &self.poles {
            let ai = p.at.inverse().expect("poles are away from the origin");
            let neg_ai = ai.neg_ref();
            for (m, c) in p.orders.iter().enumerate() {
                let m = m as i64 + 1;
                // (z-a)^{-m} = (-a)^{-m} sum_j C(m+j-1, j) a^{-j} z^j
                let lead = c.times(&neg_ai.powu(m as u32));
                let mut apow = F::one();
                for j in 0..=(z_max.max(-1) as i64) {
                    let t = lead.times(&bin::<F>(m + j - 1, j as u32)).times(&apow);
                    let v = out.entry(j as i32).or_insert_with(F::zero);
                    *v = v.plus(&t);
                    apow = apow.times(&ai);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> ZFrac<G> {
        let mut out = ZFrac::<G>::zero();
        for (k, c) in &self.laurent {
            out.add_laurent(*k, f(c));
        }
        for p in &self.poles {
            let at = f(&p.at);
            for (m, c) in p.orders.iter().enumerate() {
                out.add_pole(&at, m + 1, f(c));
            }
        }
        out
    }
}

/// `z^k (z - a)^{-m}` in normal form, `a != 0`.
fn mono_pole<F: Field>(k: i32, a: &F, m: usize) -> ZFrac<F> {
    let mut out = ZFrac::zero();
    let mi = m as i64;
    if k >= 0 {
        // z^k = sum_j C(k, j) a^{k-j} (z - a)^j
        for j in 0..=(k as i64) {
            let c = bin::<F>(k as i64, j as u32).times(&a.powu((k as i64 - j) as u32));
            if j < mi {
                out.add_pole(a, (mi - j) as usize, c);
            } else {
                let e = j - mi;
                // (z - a)^e = sum_r C(e, r) z^r (-a)^{e-r}
                for r in 0..=e {
                    let t = c.times(&bin::<F>(e, r as u32)).times(&a.neg_ref().powu((e - r) as u32));
                    out.add_laurent(r as i32, t);
                }
            }
        }
    } else {
        let p = -(k as i64);
        let ai = a.inverse().expect("nonzero pole");
        // principal part at a: z^{-p} = sum_j C(-p, j) a^{-p-j} (z - a)^j
        for j in 0..mi {
            let c = bin::<F>(-p, j as u32).times(&ai.powu((p + j) as u32));
            out.add_pole(a, (mi - j) as usize, c);
        }
        // principal part at 0: (z - a)^{-m} = (-a)^{-m} sum_j C(m+j-1, j) a^{-j} z^j
        let lead = ai.neg_ref().powu(m as u32);
        for j in 0..p {
            let c = lead.times(&bin::<F>(mi + j - 1, j as u32)).times(&ai.powu(j as u32));
            out.add_laurent((j - p) as i32, c);
        }
    }
    out
}

/// `(z - a)^{-m} (z - b)^{-n}` in normal form.
fn pole_pole<F: Field>(a: &F, m: usize, b: &F, n: usize) -> ZFrac<F> {
    if a == b {
        return ZFrac::pole(a.clone(), m + n, F::one());
    }
    let mut out = ZFrac::zero();
    let mut principal = |x: &F, mx: usize, y: &F, ny: usize| {
        // (z - y)^{-ny} = sum_j C(-ny, j) (x - y)^{-ny-j} (z - x)^j
        let di = x.minus(y).inverse().expect("distinct poles");
        for j in 0..mx as i64 {
            let c = bin::<F>(-(ny as i64), j as u32).times(&di.powu((ny as i64 + j) as u32));
            out.add_pole(x, (mx as i64 - j) as usize, c);
        }
    };
    principal(a, m, b, n);
    principal(b, n, a, m);
    out
}

impl<F: Field> PartialEq for ZFrac<F> {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl<F: Field> fmt::Debug for ZFrac<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for ZFrac<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.laurent.iter().rev() {
            parts.push(match k {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{k}"),
            });
        }
        for p in &self.poles {
            for (m, c) in p.orders.iter().enumerate() {
                parts.push(format!("({c})/(z - ({}))^{}", p.at, m + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<F: Field> Coeff for ZFrac<F> {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add(other);
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn try_inverse(&self) -> Option<Self> {
        if !self.poles.is_empty() || self.laurent.len() != 1 {
            return None;
        }
        let (k, c) = self.laurent.iter().next()?;
        Some(Self::monomial(-k, c.inverse()?))
    }
}

impl<F: Field> Module<F> for ZFrac<F> {
    fn scale(&self, c: &F) -> Self {
        ZFrac::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Z = ZFrac<BigRational>;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn check_eval(f: &Z, g: impl Fn(&BigRational) -> BigRational) {
        for x in [3, -5, 7, 11, -13] {
            let x = BigRational::new(x.into(), 2.into());
            assert_eq!(f.eval(&x).unwrap(), g(&x), "at z = {x}");
        }
    }

    #[test]
    fn product_of_poles_matches_pointwise() {
        let a = Z::pole(r(2), 1, r(1));
        let b = Z::pole(r(-3), 2, r(5));
        let c = Z::monomial(-2, r(7)).add(&Z::monomial(1, r(1)));
        let prod = a.mul(&b).mul(&c);
        check_eval(&prod, |z| {
            let zz = z.clone();
            (r(1) / (zz.clone() - r(2)))
                * (r(5) / ((zz.clone() + r(3)) * (zz.clone() + r(3))))
                * (r(7) / (zz.clone() * zz.clone()) + zz.clone())
        });
    }

    #[test]
    fn negate_and_shift() {
        let a = Z::pole(r(2), 2, r(3)).add(&Z::monomial(-1, r(1)));
        let n = a.negate_z();
        check_eval(&n, |z| a.eval(&-z.clone()).unwrap());
        let s = a.shift(3);
        check_eval(&s, |z| a.eval(z).unwrap() * z * z * z);
        let s = a.shift(-2);
        check_eval(&s, |z| a.eval(z).unwrap() / (z * z));
    }

    #[test]
    fn expansions() {
        // 1/(z - 2) = 1/z + 2/z^2 + 4/z^3 + ...
        let a = Z::pole(r(2), 1, r(1));
        let inf = a.expand_at_infinity(-3);
        assert_eq!(inf.get(&-1), Some(&r(1)));
        assert_eq!(inf.get(&-3), Some(&r(4)));
        // at zero: -1/2 - z/4 - ...
        let zero = a.expand_at_zero(1);
        assert_eq!(zero.get(&0), Some(&BigRational::new((-1).into(), 2.into())));
        assert_eq!(zero.get(&1), Some(&BigRational::new((-1).into(), 4.into())));
    }

    #[test]
    fn regularity() {
        let a = Z::monomial(-1, r(1)).add(&Z::monomial(-1, r(-1)));
        assert!(a.is_regular_at_zero());
        assert!(!Z::monomial(-1, r(1)).is_regular_at_zero());
    }
}
