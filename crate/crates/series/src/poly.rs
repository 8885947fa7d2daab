//! Sparse multivariate polynomials over the rationals.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so the derived
//! ordering on `Vec<u32>` is the lexicographic monomial order with
//! `x1 > x2 > ...`. The gcd is a recursive primitive remainder sequence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::rational_to_string;

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigRational>,
}

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn mono_mul(a: &[u32], b: &[u32]) -> Exponents {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0));
    }
    out
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Exponents> {
    if b.len() > a.len() && b[a.len()..].iter().any(|&x| x > 0) {
        return None;
    }
    let mut out = a.to_vec();
    for (i, &bi) in b.iter().enumerate() {
        if i >= out.len() {
            break;
        }
        if out[i] < bi {
            return None;
        }
        out[i] -= bi;
    }
    Some(trim(out))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The variable `x_i` (zero-based).
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(e: Exponents, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(e), c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, BigRational)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(trim(e), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.get(&Vec::new()).cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(|c| c.is_one())
    }

    /// Number of variables that occur (one past the largest index used).
    pub fn n_vars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(mono_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so that the lexicographically leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (ld, lc) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((er, cr)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let m = mono_div(&er, &ld)?;
            let c = cr / &lc;
            let t = Poly::monomial(m.clone(), c.clone());
            q.add_term(m, c);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Coefficients with respect to variable `v`, index = power of `x_v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.get(v).copied().unwrap_or(0) as usize;
            let mut e2 = e.clone();
            if v < e2.len() {
                e2[v] = 0;
            }
            out[k].add_term(trim(e2), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Self {
        let mut out = Poly::zero();
        for (k, p) in coeffs.iter().enumerate() {
            for (e, c) in &p.terms {
                let mut e2 = e.clone();
                if e2.len() <= v {
                    e2.resize(v + 1, 0);
                }
                e2[v] += k as u32;
                out.add_term(trim(e2), c.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                    t *= num_traits::pow(x, k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i -> values[i]` for every variable.
    pub fn substitute(&self, values: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let x = values.get(i).cloned().unwrap_or_else(|| Poly::var(i));
                    t = t.mul(&x.pow(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Least common multiple of denominators times gcd-normalisation helper.
    fn integer_content(&self) -> (BigInt, BigInt) {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        (g, l)
    }

    /// Rescales to integer coefficients with unit content and positive lead.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let (g, l) = self.integer_content();
        let mut s = BigRational::new(l, g);
        if self.leading_coeff().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }
}

fn min_monomial(p: &Poly) -> Exponents {
    let n = p.n_vars();
    let mut m: Option<Exponents> = None;
    for e in p.terms.keys() {
        let mut full = e.clone();
        full.resize(n, 0);
        m = Some(match m {
            None => full,
            Some(prev) => prev.iter().zip(full.iter()).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    trim(m.unwrap_or_default())
}

/// Pseudo-remainder of `a` by `b` as polynomials in `x_v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v);
        if dr < db {
            return r;
        }
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let mut shift = vec![0u32; v + 1];
        shift[v] = dr - db;
        let xs = Poly::monomial(shift, BigRational::one());
        r = r.mul(&lb).sub(&lr.mul(&xs).mul(b));
    }
}

fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    let c = p.content_in(v);
    if c.is_constant() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides polynomial")
    }
}

/// Greatest common divisor, normalised to be monic (zero if both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.n_terms() == 1 || b.n_terms() == 1 {
        let ma = min_monomial(a);
        let mb = min_monomial(b);
        let n = ma.len().max(mb.len());
        let m: Exponents =
            (0..n).map(|i| ma.get(i).copied().unwrap_or(0).min(mb.get(i).copied().unwrap_or(0))).collect();
        return Poly::monomial(m, BigRational::one());
    }
    let v = a.n_vars().max(b.n_vars()) - 1;
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    let ca = if da == 0 { a.clone() } else { a.content_in(v) };
    let cb = if db == 0 { b.clone() } else { b.content_in(v) };
    let c = gcd(&ca, &cb);
    if da == 0 || db == 0 {
        return c.monic();
    }
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut r = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < r.degree_in(v) {
        std::mem::swap(&mut p, &mut r);
    }
    loop {
        let rem = prem(&p, &r, v);
        if rem.is_zero() {
            break;
        }
        if rem.degree_in(v) == 0 {
            r = Poly::one();
            break;
        }
        p = r;
        r = primitive_part_in(&rem.primitive_integer(), v);
    }
    let g = primitive_part_in(&r, v);
    c.mul(&g).monic()
}

pub fn var_name(i: usize) -> String {
    format!("l{}", i + 1)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { var_name(i) } else { format!("{}^{}", var_name(i), k) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if !first {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", rational_to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_to_string(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn gcd_of_products() {
        let a = x(0).add(&x(1)).mul(&x(0).sub(&Poly::constant(q(2))));
        let b = x(0).add(&x(1)).mul(&x(2).add(&Poly::one()));
        assert_eq!(gcd(&a, &b), x(0).add(&x(1)));
    }

    #[test]
    fn gcd_coprime() {
        let a = x(0).add(&x(1));
        let b = x(0).sub(&x(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_three_vars() {
        let f = x(0).mul(&x(1)).sub(&x(2).pow(2));
        let a = f.mul(&x(0).add(&x(2))).scale(&q(3));
        let b = f.pow(2).mul(&x(1).sub(&Poly::one()));
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&x(1));
        let b = a.mul(&x(0).sub(&x(2)));
        assert_eq!(b.div_exact(&a), Some(x(0).sub(&x(2))));
        assert_eq!(x(0).div_exact(&x(1)), None);
    }
}
