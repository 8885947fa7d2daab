//! Truncated multivariate Novikov series and their Laurent-in-`z` extension.
//!
//! A [`NovikovSeries`] is a sparse map from monomials `q^β t^k` to values.
//! Truncation is by θ-degree `β·θ` and total `t`-degree. A [`ZSeries`] stores,
//! for every Novikov monomial, a finite Laurent row in `z` clipped to a window.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::SeriesError;
use crate::field::{Coeff, Field, Module};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub max_theta_degree: u32,
    pub max_t_degree: u32,
    pub z_min: i32,
    pub z_max: i32,
}

impl Truncation {
    pub fn new(max_theta_degree: u32, max_t_degree: u32, z_min: i32, z_max: i32) -> Result<Self, SeriesError> {
        if z_min > z_max {
            return Err(SeriesError::InvalidTransformation(format!("empty z window [{z_min}, {z_max}]")));
        }
        Ok(Truncation { max_theta_degree, max_t_degree, z_min, z_max })
    }

    /// θ-degree bound only; no `t`-variables and a wide `z` window.
    pub fn theta(d: u32) -> Self {
        Truncation { max_theta_degree: d, max_t_degree: 0, z_min: -64, z_max: 64 }
    }

    pub fn with_t(mut self, m: u32) -> Self {
        self.max_t_degree = m;
        self
    }

    pub fn with_z(mut self, z_min: i32, z_max: i32) -> Self {
        self.z_min = z_min;
        self.z_max = z_max;
        self
    }

    pub fn meet(&self, o: &Self) -> Self {
        Truncation {
            max_theta_degree: self.max_theta_degree.min(o.max_theta_degree),
            max_t_degree: self.max_t_degree.min(o.max_t_degree),
            z_min: self.z_min.max(o.z_min),
            z_max: self.z_max.min(o.z_max),
        }
    }
}

/// The monomial `q^β t^k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub beta: Vec<i64>,
    pub t: Vec<u32>,
}

impl Mono {
    pub fn one(rank: usize, n_t: usize) -> Self {
        Mono { beta: vec![0; rank], t: vec![0; n_t] }
    }

    pub fn q(beta: Vec<i64>, n_t: usize) -> Self {
        Mono { beta, t: vec![0; n_t] }
    }

    pub fn theta_degree(&self, theta: &[i64]) -> i64 {
        self.beta.iter().zip(theta).map(|(b, t)| b * t).sum()
    }

    pub fn t_degree(&self) -> u32 {
        self.t.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.beta.iter().all(|&b| b == 0) && self.t.iter().all(|&k| k == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono {
            beta: self.beta.iter().zip(&o.beta).map(|(a, b)| a + b).collect(),
            t: self.t.iter().zip(&o.t).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / o` when `o` divides `self` in the `t`-variables.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let t: Option<Vec<u32>> = self.t.iter().zip(&o.t).map(|(a, b)| a.checked_sub(*b)).collect();
        Some(Mono { beta: self.beta.iter().zip(&o.beta).map(|(a, b)| a - b).collect(), t: t? })
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{:?}", self.beta)?;
        if self.t.iter().any(|&k| k > 0) {
            write!(f, " t^{:?}", self.t)?;
        }
        Ok(())
    }
}

/// Sparse truncated power series in `q` and `t` with values in `V`.
#[derive(Clone)]
pub struct NovikovSeries<V> {
    theta: Vec<i64>,
    n_t: usize,
    trunc: Truncation,
    terms: BTreeMap<Mono, V>,
}

impl<V: Coeff> PartialEq for NovikovSeries<V> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<V: Coeff> fmt::Debug for NovikovSeries<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, v) in &self.terms {
            m.entry(&format!("{k}"), v);
        }
        m.finish()
    }
}

impl<V: Coeff> NovikovSeries<V> {
    pub fn new(theta: Vec<i64>, n_t: usize, trunc: Truncation) -> Self {
        NovikovSeries { theta, n_t, trunc, terms: BTreeMap::new() }
    }

    /// Empty series with the same grading and truncation.
    pub fn empty_like(&self) -> Self {
        Self::new(self.theta.clone(), self.n_t, self.trunc)
    }

    pub fn with_terms<I: IntoIterator<Item = (Mono, V)>>(
        theta: Vec<i64>,
        n_t: usize,
        trunc: Truncation,
        it: I,
    ) -> Self {
        let mut s = Self::new(theta, n_t, trunc);
        for (m, v) in it {
            s.add_term(m, v);
        }
        s
    }

    pub fn constant(theta: Vec<i64>, n_t: usize, trunc: Truncation, v: V) -> Self {
        let rank = theta.len();
        Self::with_terms(theta, n_t, trunc, [(Mono::one(rank, n_t), v)])
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.theta.len()
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn in_range(&self, m: &Mono) -> bool {
        let d = m.theta_degree(&self.theta);
        d >= 0 && d <= self.trunc.max_theta_degree as i64 && m.t_degree() <= self.trunc.max_t_degree
    }

    /// Adds `v` at `m`, dropping it if outside the truncation.
    pub fn add_term(&mut self, m: Mono, v: V) {
        if v.is_zero_coeff() || !self.in_range(&m) {
            return;
        }
        debug_assert_eq!(m.beta.len(), self.theta.len());
        debug_assert_eq!(m.t.len(), self.n_t);
        match self.terms.get_mut(&m) {
            Some(old) => {
                old.add_assign_ref(&v);
                if old.is_zero_coeff() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, v);
            }
        }
    }

    pub fn get(&self, m: &Mono) -> Option<&V> {
        self.terms.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &V)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Mono, V> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^β t^0`.
    pub fn coeff_q(&self, beta: &[i64]) -> Option<&V> {
        self.terms.get(&Mono::q(beta.to_vec(), self.n_t))
    }

    /// The constant coefficient `q^0 t^0`.
    pub fn leading(&self) -> Option<&V> {
        self.terms.get(&Mono::one(self.rank(), self.n_t))
    }

    fn check_compatible(&self, o: &Self) -> Result<(), SeriesError> {
        if self.theta != o.theta || self.n_t != o.n_t {
            return Err(SeriesError::Incompatible(format!(
                "grading {:?}/{} vs {:?}/{}",
                self.theta, self.n_t, o.theta, o.n_t
            )));
        }
        if let (Some((_, a)), Some((_, b))) = (self.terms.iter().next(), o.terms.iter().next()) {
            if !a.compatible(b) {
                return Err(SeriesError::Incompatible("values live in different algebras".into()));
            }
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        out.trunc = self.trunc.meet(&o.trunc);
        out.terms.retain(|m, _| {
            let d = m.theta_degree(&self.theta);
            d <= out.trunc.max_theta_degree as i64 && m.t_degree() <= out.trunc.max_t_degree
        });
        for (m, v) in &o.terms {
            out.add_term(m.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("compatible operands")
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg_ref())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn map<W: Coeff>(&self, f: impl Fn(&V) -> W) -> NovikovSeries<W> {
        let mut out = NovikovSeries::new(self.theta.clone(), self.n_t, self.trunc);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), f(v));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Self {
        let mut out = self.empty_like();
        for (m, v) in &self.terms {
            if keep(m) {
                out.terms.insert(m.clone(), v.clone());
            }
        }
        out
    }

    /// Re-truncates to a (typically smaller) truncation.
    pub fn truncate(&self, trunc: Truncation) -> Self {
        let mut out = NovikovSeries::new(self.theta.clone(), self.n_t, trunc);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(o)?;
        let mut out = NovikovSeries::new(self.theta.clone(), self.n_t, self.trunc.meet(&o.trunc));
        for (ma, va) in &self.terms {
            for (mb, vb) in &o.terms {
                let m = ma.mul(mb);
                if out.in_range(&m) {
                    out.add_term(m, va.mul_ref(vb));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("compatible operands")
    }

    /// All monomials reachable as products of monomials of `self`, within range.
    fn closure_support(&self) -> Vec<Mono> {
        let gens: Vec<&Mono> = self.terms.keys().filter(|m| !m.is_one()).collect();
        let mut seen: BTreeSet<Mono> = BTreeSet::new();
        let mut frontier = vec![Mono::one(self.rank(), self.n_t)];
        seen.insert(frontier[0].clone());
        while let Some(m) = frontier.pop() {
            for g in &gens {
                let p = m.mul(g);
                if self.in_range(&p) && seen.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
        let mut v: Vec<Mono> = seen.into_iter().collect();
        v.sort_by_key(|m| (m.theta_degree(&self.theta) + m.t_degree() as i64, m.clone()));
        v
    }

    /// Multiplicative inverse; the constant coefficient must be a unit.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let a0 = self.leading().ok_or(SeriesError::NotInvertible)?;
        let a0i = a0.try_inverse().ok_or(SeriesError::NotInvertible)?;
        let support = self.closure_support();
        let mut out: BTreeMap<Mono, V> = BTreeMap::new();
        let one = Mono::one(self.rank(), self.n_t);
        out.insert(one.clone(), a0i.clone());
        for m in support.iter().skip(1) {
            let mut acc: Option<V> = None;
            for (ma, va) in &self.terms {
                if ma.is_one() {
                    continue;
                }
                let Some(rest) = m.div(ma) else { continue };
                if let Some(vb) = out.get(&rest) {
                    let t = va.mul_ref(vb);
                    match &mut acc {
                        Some(x) => x.add_assign_ref(&t),
                        None => acc = Some(t),
                    }
                }
            }
            if let Some(acc) = acc {
                let v = a0i.mul_ref(&acc).neg_ref();
                if !v.is_zero_coeff() {
                    out.insert(m.clone(), v);
                }
            }
        }
        let mut s = self.empty_like();
        s.terms = out;
        Ok(s)
    }

    /// Drops coefficients of θ-degree above `d`.
    pub fn truncate_theta(&self, d: i64) -> Self {
        self.filter(|m| m.theta_degree(&self.theta) <= d)
    }

    /// Part of exact θ-degree `d` and `t`-degree `m`.
    pub fn bidegree_part(&self, m: u32, d: i64) -> Self {
        self.filter(|x| x.t_degree() == m && x.theta_degree(&self.theta) == d)
    }

    /// Sets all `t`-variables to zero.
    pub fn at_t_zero(&self) -> Self {
        self.filter(|m| m.t_degree() == 0)
    }
}

impl<V: Coeff> NovikovSeries<V> {
    /// Multiplies by a scalar series.
    pub fn mul_scalar_series<F: Field>(&self, s: &NovikovSeries<F>) -> Self
    where
        V: Module<F>,
    {
        let mut out = NovikovSeries::new(self.theta.clone(), self.n_t, self.trunc.meet(&s.trunc));
        for (ma, va) in &self.terms {
            for (mb, c) in &s.terms {
                let m = ma.mul(mb);
                if out.in_range(&m) {
                    out.add_term(m, va.scale(c));
                }
            }
        }
        out
    }

    pub fn scale<F: Field>(&self, c: &F) -> Self
    where
        V: Module<F>,
    {
        self.map(|v| v.scale(c))
    }
}

impl<F: Field> NovikovSeries<F> {
    pub fn one(theta: Vec<i64>, n_t: usize, trunc: Truncation) -> Self {
        Self::constant(theta, n_t, trunc, F::one())
    }

    /// The monomial `c q^β t^k`.
    pub fn monomial(theta: Vec<i64>, n_t: usize, trunc: Truncation, m: Mono, c: F) -> Self {
        Self::with_terms(theta, n_t, trunc, [(m, c)])
    }

    /// The variable `t_i`.
    pub fn t_var(theta: Vec<i64>, n_t: usize, trunc: Truncation, i: usize) -> Self {
        let mut m = Mono::one(theta.len(), n_t);
        m.t[i] = 1;
        Self::monomial(theta, n_t, trunc, m, F::one())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.theta.clone(), self.n_t, self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.leading().is_some() {
            return Err(SeriesError::InvalidTransformation("exp of a series with constant term".into()));
        }
        let mut acc = Self::one(self.theta.clone(), self.n_t, self.trunc);
        let mut term = acc.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(self).scale(&F::from_frac(1, k));
            if term.is_empty() {
                break;
            }
            acc = acc.add(&term);
            k += 1;
        }
        Ok(acc)
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.leading() != Some(&F::one()) {
            return Err(SeriesError::InvalidTransformation("log needs constant term 1".into()));
        }
        let one = Self::one(self.theta.clone(), self.n_t, self.trunc);
        let x = self.sub(&one);
        let mut acc = self.empty_like();
        let mut pw = one;
        let mut k = 1i64;
        loop {
            pw = pw.mul(&x);
            if pw.is_empty() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pw.scale(&F::from_frac(sign, k)));
            k += 1;
        }
        Ok(acc)
    }
}

/// Substitutes `t_i -> s_i` where each `s_i` has no constant term.
///
/// A `t`-free term of positive degree in some `s_i` lowers `t`-degree, so
/// coefficients of `a` beyond its `t` truncation leak into the result. The
/// output `t` truncation is lowered until every kept coefficient is exact.
pub fn compose_t<F: Field, V: Module<F>>(
    a: &NovikovSeries<V>,
    s: &[NovikovSeries<F>],
) -> Result<NovikovSeries<V>, SeriesError> {
    if s.len() != a.n_t() {
        return Err(SeriesError::InvalidTransformation(format!("expected {} substitutions, got {}", a.n_t(), s.len())));
    }
    for (i, si) in s.iter().enumerate() {
        if si.leading().is_some() {
            return Err(SeriesError::InvalidTransformation(format!(
                "substitution for t_{} has a constant term",
                i + 1
            )));
        }
    }
    let n_t_out = s.first().map(|x| x.n_t()).unwrap_or(a.n_t());
    let mut trunc = s.iter().fold(a.truncation(), |t, x| t.meet(&x.truncation()));
    let theta = a.theta().to_vec();
    let lowering = s
        .iter()
        .flat_map(|x| x.iter())
        .filter(|(m, _)| m.t_degree() == 0 && m.theta_degree(&theta) <= trunc.max_theta_degree as i64)
        .map(|(m, _)| m.theta_degree(&theta))
        .min();
    if let Some(v) = lowering {
        if v <= 0 {
            return Err(SeriesError::InvalidTransformation("t-free term of non-positive degree".into()));
        }
        // Output q^β t^k is exact when θ·β < v (N + 1 - k), N the input t order.
        let need = (trunc.max_theta_degree as i64 + 1 + v - 1) / v;
        let exact = a.truncation().max_t_degree as i64 + 1 - need;
        if exact < 0 {
            return Err(SeriesError::InvalidTransformation(format!(
                "t order {} is too low to substitute a t-free term of degree {v} through degree {}",
                a.truncation().max_t_degree,
                trunc.max_theta_degree
            )));
        }
        trunc.max_t_degree = trunc.max_t_degree.min(exact as u32);
    }
    let mut powers: Vec<Vec<NovikovSeries<F>>> =
        s.iter().map(|x| vec![NovikovSeries::one(theta.clone(), n_t_out, trunc), x.truncate(trunc)]).collect();
    let mut out = NovikovSeries::new(theta.clone(), n_t_out, trunc);
    let mut cache: HashMap<Vec<u32>, NovikovSeries<F>> = HashMap::new();
    for (m, v) in a.iter() {
        let prod = match cache.get(&m.t) {
            Some(p) => p.clone(),
            None => {
                let mut p = NovikovSeries::one(theta.clone(), n_t_out, trunc);
                for (i, &k) in m.t.iter().enumerate() {
                    while powers[i].len() <= k as usize {
                        let next = powers[i].last().unwrap().mul(&powers[i][1]);
                        powers[i].push(next);
                    }
                    p = p.mul(&powers[i][k as usize]);
                }
                cache.insert(m.t.clone(), p.clone());
                p
            }
        };
        for (pm, c) in prod.iter() {
            let mut mm = pm.clone();
            for (x, b) in mm.beta.iter_mut().zip(&m.beta) {
                *x += b;
            }
            out.add_term(mm, v.scale(c));
        }
    }
    Ok(out)
}

fn check_transformation<F: Field>(tau: &[NovikovSeries<F>]) -> Result<(), SeriesError> {
    for (i, ti) in tau.iter().enumerate() {
        if ti.n_t() != tau.len() {
            return Err(SeriesError::InvalidTransformation("t-variable count mismatch".into()));
        }
        for (m, c) in ti.iter() {
            if m.beta.iter().all(|&b| b == 0) {
                let mut expect = vec![0; ti.n_t()];
                expect[i] = 1;
                if m.t != expect || !c.is_one() {
                    return Err(SeriesError::InvalidTransformation(format!(
                        "component {} is not t_{} + O(q)",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        let mut lin = Mono::one(ti.rank(), ti.n_t());
        lin.t[i] = 1;
        if ti.get(&lin).is_none() {
            return Err(SeriesError::InvalidTransformation(format!("component {} lacks t_{}", i + 1, i + 1)));
        }
    }
    Ok(())
}

/// Formal composition `a(τ(t))` for a transformation `τ_i = t_i + O(q)`.
pub fn substitute_t<F: Field, V: Module<F>>(
    a: &NovikovSeries<V>,
    tau: &[NovikovSeries<F>],
) -> Result<NovikovSeries<V>, SeriesError> {
    check_transformation(tau)?;
    compose_t(a, tau)
}

/// The functional inverse of a transformation `τ_i = t_i + O(q)`.
pub fn invert_transformation<F: Field>(tau: &[NovikovSeries<F>]) -> Result<Vec<NovikovSeries<F>>, SeriesError> {
    check_transformation(tau)?;
    let n = tau.len();
    let theta = tau[0].theta().to_vec();
    let trunc = tau[0].truncation();
    let ident: Vec<NovikovSeries<F>> = (0..n).map(|i| NovikovSeries::t_var(theta.clone(), n, trunc, i)).collect();
    let h: Vec<NovikovSeries<F>> = tau.iter().zip(&ident).map(|(t, x)| t.sub(x)).collect();
    let mut sigma = ident.clone();
    for _ in 0..=trunc.max_theta_degree {
        let next: Result<Vec<_>, _> =
            h.iter().zip(&ident).map(|(hi, xi)| compose_t(hi, &sigma).map(|c| xi.sub(&c))).collect();
        let next = next?;
        if next == sigma {
            break;
        }
        sigma = next;
    }
    Ok(sigma)
}

/// Replaces `q^β` by `q^β exp(Σ_j g_j β_j)`.
pub fn substitute_novikov<F: Field, V: Module<F>>(
    a: &NovikovSeries<V>,
    g: &[NovikovSeries<F>],
) -> Result<NovikovSeries<V>, SeriesError> {
    if g.len() != a.rank() {
        return Err(SeriesError::UnsupportedTarget(format!(
            "need {} divisor coordinates for curve classes, got {}",
            a.rank(),
            g.len()
        )));
    }
    for gi in g {
        if gi.iter().any(|(m, _)| m.beta.iter().all(|&b| b == 0)) {
            return Err(SeriesError::InvalidTransformation("g must be O(q)".into()));
        }
    }
    let mut out = a.empty_like();
    let mut cache: HashMap<Vec<i64>, NovikovSeries<F>> = HashMap::new();
    for (m, v) in a.iter() {
        let e = match cache.get(&m.beta) {
            Some(e) => e.clone(),
            None => {
                let mut arg = NovikovSeries::new(a.theta().to_vec(), a.n_t(), a.truncation());
                for (gi, &b) in g.iter().zip(&m.beta) {
                    if b != 0 {
                        arg = arg.add(&gi.scale(&F::from_i64(b)));
                    }
                }
                let e = arg.exp()?;
                cache.insert(m.beta.clone(), e.clone());
                e
            }
        };
        for (em, c) in e.iter() {
            out.add_term(m.mul(em), v.scale(c));
        }
    }
    Ok(out)
}

/// Given `Q^β = q^β exp(Σ g_j β_j)`, returns `h` with `q^β = Q^β exp(Σ h_j β_j)`.
pub fn invert_novikov_map<F: Field>(g: &[NovikovSeries<F>]) -> Result<Vec<NovikovSeries<F>>, SeriesError> {
    let mut h: Vec<NovikovSeries<F>> = g.iter().map(|x| x.empty_like()).collect();
    let d = g.first().map(|x| x.truncation().max_theta_degree).unwrap_or(0);
    for _ in 0..=d + 1 {
        let next: Result<Vec<_>, _> = g.iter().map(|gi| substitute_novikov(gi, &h).map(|s| s.neg())).collect();
        let next = next?;
        if next == h {
            break;
        }
        h = next;
    }
    Ok(h)
}

/// A Laurent polynomial in `z` clipped to a window.
#[derive(Clone, PartialEq)]
pub struct ZRow<V> {
    pub z_min: i32,
    pub z_max: i32,
    pub c: BTreeMap<i32, V>,
}

impl<V: Coeff> fmt::Debug for ZRow<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.c.iter().map(|(k, v)| (format!("z^{k}"), v))).finish()
    }
}

impl<V: Coeff> ZRow<V> {
    pub fn new(z_min: i32, z_max: i32) -> Self {
        ZRow { z_min, z_max, c: BTreeMap::new() }
    }

    pub fn add_at(&mut self, e: i32, v: V) {
        if e < self.z_min || e > self.z_max || v.is_zero_coeff() {
            return;
        }
        match self.c.get_mut(&e) {
            Some(old) => {
                old.add_assign_ref(&v);
                if old.is_zero_coeff() {
                    self.c.remove(&e);
                }
            }
            None => {
                self.c.insert(e, v);
            }
        }
    }
}

impl<V: Coeff> Coeff for ZRow<V> {
    fn is_zero_coeff(&self) -> bool {
        self.c.is_empty()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.z_min = self.z_min.max(other.z_min);
        self.z_max = self.z_max.min(other.z_max);
        let (lo, hi) = (self.z_min, self.z_max);
        self.c.retain(|e, _| *e >= lo && *e <= hi);
        for (e, v) in &other.c {
            self.add_at(*e, v.clone());
        }
    }

    fn neg_ref(&self) -> Self {
        ZRow { z_min: self.z_min, z_max: self.z_max, c: self.c.iter().map(|(e, v)| (*e, v.neg_ref())).collect() }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let mut out = ZRow::new(self.z_min.max(o.z_min), self.z_max.min(o.z_max));
        for (ea, va) in &self.c {
            for (eb, vb) in &o.c {
                out.add_at(ea + eb, va.mul_ref(vb));
            }
        }
        out
    }

    fn compatible(&self, o: &Self) -> bool {
        match (self.c.values().next(), o.c.values().next()) {
            (Some(a), Some(b)) => a.compatible(b),
            _ => true,
        }
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.c.len() != 1 {
            return None;
        }
        let (e, v) = self.c.iter().next()?;
        let mut out = ZRow::new(self.z_min, self.z_max);
        out.add_at(-e, v.try_inverse()?);
        Some(out)
    }
}

impl<F: Field, V: Module<F>> Module<F> for ZRow<V> {
    fn scale(&self, c: &F) -> Self {
        let mut out = ZRow::new(self.z_min, self.z_max);
        for (e, v) in &self.c {
            out.add_at(*e, v.scale(c));
        }
        out
    }
}

/// Laurent series in `z` whose coefficients are Novikov series.
#[derive(Clone)]
pub struct ZSeries<V> {
    inner: NovikovSeries<ZRow<V>>,
}

impl<V: Coeff> PartialEq for ZSeries<V> {
    fn eq(&self, o: &Self) -> bool {
        self.inner == o.inner
    }
}

impl<V: Coeff> fmt::Debug for ZSeries<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// A `(β, k)` key with offending negative `z`-exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleReport {
    pub mono: Mono,
    pub z_exponents: Vec<i32>,
}

impl<V: Coeff> ZSeries<V> {
    pub fn new(theta: Vec<i64>, n_t: usize, trunc: Truncation) -> Self {
        ZSeries { inner: NovikovSeries::new(theta, n_t, trunc) }
    }

    pub fn empty_like(&self) -> Self {
        ZSeries { inner: self.inner.empty_like() }
    }

    pub fn from_rows(inner: NovikovSeries<ZRow<V>>) -> Self {
        ZSeries { inner }
    }

    pub fn rows(&self) -> &NovikovSeries<ZRow<V>> {
        &self.inner
    }

    pub fn theta(&self) -> &[i64] {
        self.inner.theta()
    }

    pub fn n_t(&self) -> usize {
        self.inner.n_t()
    }

    pub fn truncation(&self) -> Truncation {
        self.inner.truncation()
    }

    /// Adds `v q^β t^k z^e`.
    pub fn add_term(&mut self, m: Mono, e: i32, v: V) {
        let t = self.inner.truncation();
        let mut row = ZRow::new(t.z_min, t.z_max);
        row.add_at(e, v);
        self.inner.add_term(m, row);
    }

    pub fn get(&self, m: &Mono, e: i32) -> Option<&V> {
        self.inner.get(m).and_then(|r| r.c.get(&e))
    }

    pub fn row(&self, m: &Mono) -> Option<&ZRow<V>> {
        self.inner.get(m)
    }

    /// All nonzero `(β, k, e, value)` entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&Mono, i32, &V)> {
        self.inner.iter().flat_map(|(m, r)| r.c.iter().map(move |(e, v)| (m, *e, v)))
    }

    pub fn from_z_map(theta: Vec<i64>, n_t: usize, trunc: Truncation, map: &BTreeMap<i32, NovikovSeries<V>>) -> Self {
        let mut out = Self::new(theta, n_t, trunc);
        for (e, s) in map {
            for (m, v) in s.iter() {
                out.add_term(m.clone(), *e, v.clone());
            }
        }
        out
    }

    /// The coefficient of `z^e`.
    pub fn z_coefficient(&self, e: i32) -> NovikovSeries<V> {
        let mut out = NovikovSeries::new(self.theta().to_vec(), self.n_t(), self.truncation());
        for (m, r) in self.inner.iter() {
            if let Some(v) = r.c.get(&e) {
                out.add_term(m.clone(), v.clone());
            }
        }
        out
    }

    pub fn z_exponents(&self) -> BTreeSet<i32> {
        self.inner.iter().flat_map(|(_, r)| r.c.keys().copied()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        ZSeries { inner: self.inner.add(&o.inner) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ZSeries { inner: self.inner.sub(&o.inner) }
    }

    pub fn neg(&self) -> Self {
        ZSeries { inner: self.inner.neg() }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, SeriesError> {
        Ok(ZSeries { inner: self.inner.try_mul(&o.inner)? })
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("compatible operands")
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        Ok(ZSeries { inner: self.inner.invert()? })
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn map<W: Coeff>(&self, f: impl Fn(&V) -> W) -> ZSeries<W> {
        ZSeries {
            inner: self.inner.map(|r| {
                let mut out = ZRow::new(r.z_min, r.z_max);
                for (e, v) in &r.c {
                    out.add_at(*e, f(v));
                }
                out
            }),
        }
    }

    pub fn filter_entries(&self, keep: impl Fn(&Mono, i32) -> bool) -> Self {
        let mut out = self.empty_like();
        for (m, e, v) in self.entries() {
            if keep(m, e) {
                out.add_term(m.clone(), e, v.clone());
            }
        }
        out
    }

    /// Keys carrying a nonzero coefficient at a negative power of `z`.
    pub fn z_regular_check(&self) -> Vec<PoleReport> {
        self.inner
            .iter()
            .filter_map(|(m, r)| {
                let neg: Vec<i32> = r.c.keys().copied().filter(|&e| e < 0).collect();
                (!neg.is_empty()).then(|| PoleReport { mono: m.clone(), z_exponents: neg })
            })
            .collect()
    }

    /// Reduction modulo `1/z^power`: keeps exponents `>= 1 - power`.
    pub fn z_truncate_mod(&self, power: u32) -> Self {
        let lo = 1 - power as i32;
        self.filter_entries(|_, e| e >= lo)
    }

    /// Multiplication by `z^k`.
    pub fn shift_z(&self, k: i32) -> Self {
        let mut out = self.empty_like();
        for (m, e, v) in self.entries() {
            out.add_term(m.clone(), e + k, v.clone());
        }
        out
    }

    /// Drops coefficients of θ-degree above `d`.
    pub fn truncate_theta(&self, d: i64) -> Self {
        ZSeries { inner: self.inner.truncate_theta(d) }
    }
}

impl<F: Field> ZSeries<F> {
    pub fn one(theta: Vec<i64>, n_t: usize, trunc: Truncation) -> Self {
        let mut s = Self::new(theta.clone(), n_t, trunc);
        s.add_term(Mono::one(theta.len(), n_t), 0, F::one());
        s
    }
}

impl<V: Coeff> ZSeries<V> {
    pub fn mul_scalar_series<F: Field>(&self, s: &NovikovSeries<F>) -> Self
    where
        V: Module<F>,
    {
        ZSeries { inner: self.inner.mul_scalar_series(s) }
    }

    pub fn scale<F: Field>(&self, c: &F) -> Self
    where
        V: Module<F>,
    {
        ZSeries { inner: self.inner.scale(c) }
    }

    /// Multiplies by a scalar Laurent series in `z`.
    pub fn mul_scalar_z<F: Field>(&self, s: &ZSeries<F>) -> Self
    where
        V: Module<F>,
    {
        let mut out = ZSeries::new(self.theta().to_vec(), self.n_t(), self.truncation().meet(&s.truncation()));
        for (ma, ea, va) in self.entries() {
            for (mb, eb, c) in s.entries() {
                out.add_term(ma.mul(mb), ea + eb, va.scale(c));
            }
        }
        out
    }

    pub fn substitute_t<F: Field>(&self, tau: &[NovikovSeries<F>]) -> Result<Self, SeriesError>
    where
        V: Module<F>,
    {
        Ok(ZSeries { inner: substitute_t(&self.inner, tau)? })
    }

    pub fn compose_t<F: Field>(&self, s: &[NovikovSeries<F>]) -> Result<Self, SeriesError>
    where
        V: Module<F>,
    {
        Ok(ZSeries { inner: compose_t(&self.inner, s)? })
    }

    pub fn substitute_novikov<F: Field>(&self, g: &[NovikovSeries<F>]) -> Result<Self, SeriesError>
    where
        V: Module<F>,
    {
        Ok(ZSeries { inner: substitute_novikov(&self.inner, g)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};
    use num_rational::BigRational;

    type S = NovikovSeries<BigRational>;

    fn tr(d: u32) -> Truncation {
        Truncation::theta(d)
    }

    fn qpoly(coeffs: &[i64], d: u32) -> S {
        S::with_terms(vec![1], 0, tr(d), coeffs.iter().enumerate().map(|(i, c)| (Mono::q(vec![i as i64], 0), q(*c))))
    }

    #[test]
    fn difference_of_squares() {
        let a = qpoly(&[1, 1], 4);
        let b = qpoly(&[1, -1], 4);
        assert_eq!(a.mul(&b), qpoly(&[1, 0, -1], 4));
    }

    #[test]
    fn geometric_series() {
        let a = qpoly(&[1, -1], 5);
        assert_eq!(a.invert().unwrap(), qpoly(&[1, 1, 1, 1, 1, 1], 5));
        let one = qpoly(&[1], 5);
        assert_eq!(one.invert().unwrap(), one);
    }

    #[test]
    fn quintic_leading_inverse() {
        let a = qpoly(&[1, 120, 113400], 2);
        let inv = a.invert().unwrap();
        assert_eq!(inv.coeff_q(&[1]), Some(&q(-120)));
        assert_eq!(inv.coeff_q(&[2]), Some(&q(120 * 120 - 113400)));
        assert_eq!(a.mul(&inv), qpoly(&[1], 2));
    }

    #[test]
    fn non_unit_is_rejected() {
        let a = qpoly(&[0, 1], 3);
        assert_eq!(a.invert(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn exp_inverse_exponentials() {
        let trunc = Truncation::theta(0).with_t(3).with_z(-6, 6);
        let mut e_plus = ZSeries::<BigRational>::new(vec![1], 1, trunc);
        let mut e_minus = e_plus.clone();
        let mut fact = q(1);
        for k in 0..=3u32 {
            if k > 0 {
                fact *= q(k as i64);
            }
            let m = Mono { beta: vec![0], t: vec![k] };
            e_plus.add_term(m.clone(), -(k as i32), fact.recip());
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            e_minus.add_term(m, -(k as i32), sign / fact.clone());
        }
        assert_eq!(e_plus.mul(&e_minus), ZSeries::one(vec![1], 1, trunc));
    }

    #[test]
    fn linear_substitution() {
        let trunc = Truncation::theta(3).with_t(5);
        let exact = Truncation::theta(3).with_t(2);
        let t1 = S::t_var(vec![1], 1, trunc, 0);
        let qq = S::monomial(vec![1], 1, trunc, Mono { beta: vec![1], t: vec![0] }, q(1));
        let tau = t1.add(&qq);
        assert_eq!(substitute_t(&t1, std::slice::from_ref(&tau)).unwrap(), tau.truncate(exact));
        assert_eq!(substitute_t(&tau, std::slice::from_ref(&t1)).unwrap(), tau);
        assert!(substitute_t(&t1, &[qq]).is_err());
        // Unknown t^4, t^5 coefficients would reach q^3 t^0 through (t + q)^k.
        let shallow = Truncation::theta(3).with_t(2);
        assert!(substitute_t(&t1.truncate(shallow), &[tau.truncate(shallow)]).is_err());
    }

    #[test]
    fn functional_inverse() {
        let trunc = Truncation::theta(3).with_t(9);
        let t1 = S::t_var(vec![1], 1, trunc, 0);
        let qm = |b: i64, t: u32, c: BigRational| S::monomial(vec![1], 1, trunc, Mono { beta: vec![b], t: vec![t] }, c);
        let tau = t1.add(&qm(1, 0, q(2))).add(&qm(1, 2, qf(1, 3))).add(&qm(2, 1, q(-5)));
        let inv = invert_transformation(std::slice::from_ref(&tau)).unwrap();
        assert_eq!(inv[0].truncation().max_t_degree, 6);
        let there = substitute_t(&tau, &inv).unwrap();
        assert_eq!(there, t1.truncate(there.truncation()));
        let back = substitute_t(&inv[0], &[tau]).unwrap();
        assert_eq!(back.truncation().max_t_degree, 3);
        assert_eq!(back, t1.truncate(back.truncation()));
    }

    #[test]
    fn novikov_substitution() {
        let trunc = Truncation::theta(3);
        let a = qpoly(&[0, 1], 3);
        let g = qpoly(&[0, 7], 3);
        let out = substitute_novikov(&a, std::slice::from_ref(&g)).unwrap();
        assert_eq!(out.coeff_q(&[2]), Some(&q(7)));
        assert_eq!(out.coeff_q(&[3]), Some(&qf(49, 2)));
        let zero = S::new(vec![1], 0, trunc);
        assert_eq!(substitute_novikov(&a, &[zero]).unwrap(), a);
        let h = invert_novikov_map(std::slice::from_ref(&g)).unwrap();
        let back = substitute_novikov(&out, &h).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn regularity_and_mod() {
        let trunc = Truncation::theta(2).with_z(-4, 4);
        let mut a = ZSeries::<BigRational>::one(vec![1], 0, trunc);
        a.add_term(Mono::q(vec![1], 0), 1, q(1));
        assert!(a.z_regular_check().is_empty());
        a.add_term(Mono::q(vec![1], 0), -1, q(1));
        let rep = a.z_regular_check();
        assert_eq!(rep.len(), 1);
        assert_eq!(rep[0].mono.beta, vec![1]);
        assert_eq!(rep[0].z_exponents, vec![-1]);
        let mut b = ZSeries::<BigRational>::one(vec![1], 0, trunc);
        b.add_term(Mono::q(vec![0], 0), -2, q(3));
        b.add_term(Mono::q(vec![0], 0), 3, q(1));
        let m = b.z_truncate_mod(2);
        assert_eq!(m.get(&Mono::q(vec![0], 0), -2), None);
        assert_eq!(m.get(&Mono::q(vec![0], 0), 3), Some(&q(1)));
    }
}
