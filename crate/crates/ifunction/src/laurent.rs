//! Finite Laurent polynomials in `z` with values in a nilpotent cohomology ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use wallx_series::{Coeff, CohClass, CohRing, Field, Module, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct ClassLaurent {
    ring: Arc<CohRing<Q>>,
    terms: BTreeMap<i32, CohClass<Q>>,
}

impl ClassLaurent {
    pub fn zero(ring: &Arc<CohRing<Q>>) -> Self {
        ClassLaurent { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<CohRing<Q>>) -> Self {
        Self::monomial(0, CohClass::unit(ring))
    }

    pub fn monomial(e: i32, c: CohClass<Q>) -> Self {
        let ring = c.ring().clone();
        let mut s = Self::zero(&ring);
        s.add_term(e, c);
        s
    }

    /// `x + m z`.
    pub fn linear(x: &CohClass<Q>, m: i64) -> Self {
        let mut s = Self::monomial(0, x.clone());
        s.add_term(1, CohClass::unit(x.ring()).scale(&Q::from_i64(m)));
        s
    }

    /// `1 / (x + m z)` for nilpotent `x` and `m != 0`, as a finite sum.
    pub fn inverse_linear(x: &CohClass<Q>, m: i64) -> Self {
        assert!(m != 0, "inverse of a nilpotent class");
        let ring = x.ring().clone();
        let mut s = Self::zero(&ring);
        let mz = Q::from_i64(m);
        let neg = x.scale(&Q::from_i64(-1));
        let mut pw = CohClass::unit(&ring);
        let mut k = 0i32;
        while !pw.is_zero() {
            s.add_term(-k - 1, pw.scale(&mz.powi(-k - 1).expect("nonzero")));
            pw = pw.mul(&neg);
            k += 1;
            if k as usize > ring.dim() + 1 {
                panic!("class is not nilpotent");
            }
        }
        s
    }

    pub fn add_term(&mut self, e: i32, c: CohClass<Q>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<i32, CohClass<Q>> {
        &self.terms
    }

    pub fn get(&self, e: i32) -> Option<&CohClass<Q>> {
        self.terms.get(&e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &o.terms {
            s.add_term(*e, c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Q::from_i64(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut s = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            s.add_term(*e, v.scale(c));
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero(&self.ring);
        for (ea, a) in &self.terms {
            for (eb, b) in &o.terms {
                s.add_term(ea + eb, a.mul(b));
            }
        }
        s
    }
}
