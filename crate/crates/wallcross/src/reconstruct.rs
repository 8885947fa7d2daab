//! Reconstruction of the fixed-point components of `S(1)` at `t = 0` from their
//! `mod 1/z²` data, the edge recursion and regularity of `S_μ(z) S_μ(-z)`-type products.
//!
//! With symbolic torus parameters every coefficient is also checked to be
//! homogeneous, with `z` and the parameters of degree 1 and `q^β` of degree
//! equal to the twisted index of `β`.

use std::collections::BTreeMap;

use wallx_oracle::Localizer;
use wallx_series::{Field, Fp, Mono, NovikovSeries, Poly, RatFunc, Truncation, ZFrac, Q};
use wallx_target::ToricTarget;

use crate::error::WallError;

/// A torus-invariant cover leaving fixed point `μ`: it contributes
/// `coeff · S_to(-pole) / (z + pole)` in class `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursionEdge<F> {
    pub to: usize,
    pub beta: Vec<i64>,
    pub pole: F,
    pub coeff: F,
}

/// Edge data for every fixed point, through θ-degree `d`.
pub fn recursion_data<F: Field>(loc: &Localizer<F>, d: u32) -> Result<Vec<Vec<RecursionEdge<F>>>, WallError> {
    let t = loc.target();
    let mut out = Vec::with_capacity(loc.n_fixed());
    for mu in 0..loc.n_fixed() {
        let mut edges = Vec::new();
        for o in t.neighbors(mu) {
            let l = t.ltheta(&o.beta);
            if l <= 0 {
                return Err(WallError::InvalidParameter(format!("orbit {mu}-{} has degree {l}", o.to)));
            }
            let mut n = 1u32;
            while n as i64 * l <= d as i64 {
                let pole = loc.flag_weight(mu, o.to, n)?;
                let coeff = loc
                    .edge(mu, o.to, n)?
                    .over(&loc.pairing_weight(mu))
                    .ok_or_else(|| WallError::InvalidParameter(format!("zero pairing weight at {mu}")))?;
                edges.push(RecursionEdge {
                    to: o.to,
                    beta: o.beta.iter().map(|b| b * n as i64).collect(),
                    pole,
                    coeff,
                });
                n += 1;
            }
        }
        out.push(edges);
    }
    Ok(out)
}

/// Scalars that may carry a degree in the torus parameters.
pub trait Graded: Field {
    /// The degree of a nonzero homogeneous element, `None` if it is not homogeneous.
    /// Ungraded scalars report `Some(0)` for everything and skip the check.
    fn degree(&self) -> Option<i64>;

    fn is_graded() -> bool;
}

impl Graded for Q {
    fn degree(&self) -> Option<i64> {
        Some(0)
    }

    fn is_graded() -> bool {
        false
    }
}

impl Graded for Fp {
    fn degree(&self) -> Option<i64> {
        Some(0)
    }

    fn is_graded() -> bool {
        false
    }
}

fn poly_degree(p: &Poly) -> Option<i64> {
    let mut degs = p.terms().map(|(e, _)| e.iter().map(|&x| x as i64).sum::<i64>());
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
}

impl Graded for RatFunc {
    fn degree(&self) -> Option<i64> {
        Some(poly_degree(self.numer())? - poly_degree(self.denom())?)
    }

    fn is_graded() -> bool {
        true
    }
}

/// The first z-exponent of `v` whose coefficient breaks homogeneity of degree `k`.
/// Pole contributions are reported at the exponent of their leading term at infinity.
fn homogeneity_defect<F: Graded>(v: &ZFrac<F>, k: i64) -> Option<i32> {
    for (&e, c) in v.laurent() {
        if !c.is_zero() && c.degree() != Some(k - e as i64) {
            return Some(e);
        }
    }
    for pole in v.poles() {
        let at_ok = pole.at.degree() == Some(1);
        for (m, c) in pole.orders.iter().enumerate() {
            let e = -(m as i32) - 1;
            if !c.is_zero() && (!at_ok || c.degree() != Some(k - e as i64)) {
                return Some(e);
            }
        }
    }
    None
}

fn class_minus(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The `y^j` coefficient of `S(q,z) S(q e^{-zyL_θ}, -z)` in class `beta`.
fn product_coefficient<F: Field>(s: &BTreeMap<Vec<i64>, ZFrac<F>>, theta: &[i64], beta: &[i64], j: usize) -> ZFrac<F> {
    let fact = (1..=j as i64).fold(F::one(), |acc, x| acc.times(&F::from_i64(x)));
    let inv = fact.inverse().expect("nonzero factorial");
    let mut acc = ZFrac::zero();
    for (b1, v1) in s {
        let b2 = class_minus(beta, b1);
        let Some(v2) = s.get(&b2) else { continue };
        let d2: i64 = b2.iter().zip(theta).map(|(x, t)| x * t).sum();
        let c = F::from_i64(-d2).powu(j as u32).times(&inv);
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&v1.mul(&v2.negate_z().shift(j as i32)).scale(&c));
    }
    acc
}

/// Rebuilds `S_μ(1)` at `t = 0` for every fixed point through θ-degree `d`,
/// checking regularity of the `y^0 … y^{y_order}` products.
pub fn uniqueness_reconstruct<F: Graded>(
    t: &ToricTarget,
    initial: &[NovikovSeries<ZFrac<F>>],
    edges: &[Vec<RecursionEdge<F>>],
    d: u32,
    y_order: usize,
) -> Result<Vec<NovikovSeries<ZFrac<F>>>, WallError> {
    if initial.len() != edges.len() {
        return Err(WallError::InvalidParameter(format!(
            "{} initial series for {} fixed points",
            initial.len(),
            edges.len()
        )));
    }
    if initial.iter().any(|s| s.n_t() != 0) {
        return Err(WallError::Unsupported("reconstruction is implemented at t = 0".into()));
    }
    let theta = t.theta().to_vec();
    let rank = t.rank();
    let zero_class = vec![0; rank];
    let mut classes: Vec<Vec<i64>> = t.effective_classes(d).into_iter().filter(|b| t.ltheta(b) > 0).collect();
    classes.sort_by_key(|b| t.ltheta(b));
    let mut s: Vec<BTreeMap<Vec<i64>, ZFrac<F>>> = Vec::with_capacity(initial.len());
    let mut s00 = Vec::with_capacity(initial.len());
    for (mu, init) in initial.iter().enumerate() {
        let lead = init.coeff_q(&zero_class).and_then(|v| v.constant_value()).filter(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Err(WallError::InvalidParameter(format!(
                "initial data at fixed point {mu} must start with a nonzero constant"
            )));
        };
        s.push(BTreeMap::from([(zero_class.clone(), ZFrac::constant(lead.clone()))]));
        s00.push(lead);
    }
    for beta in &classes {
        let deg = t.ltheta(beta);
        for mu in 0..initial.len() {
            let mut known = ZFrac::zero();
            let mut residue_sum = F::zero();
            for e in &edges[mu] {
                let rest = class_minus(beta, &e.beta);
                let Some(sub) = s[e.to].get(&rest) else { continue };
                let value = sub.eval(&e.pole.neg_ref())?;
                let c = e.coeff.times(&value);
                residue_sum = residue_sum.plus(&c);
                known = known.add(&ZFrac::inverse_linear(&F::one(), &e.pole)?.scale(&c));
            }
            let init = initial[mu].coeff_q(beta).map(|v| v.expand_at_infinity(-1)).unwrap_or_default();
            let c0 = init.get(&0).cloned().unwrap_or_else(F::zero);
            let c1 = init.get(&-1).cloned().unwrap_or_else(F::zero);
            known = known.add(&ZFrac::constant(c0)).add(&ZFrac::monomial(-1, c1.minus(&residue_sum)));
            s[mu].insert(beta.clone(), known.clone());
            let l1 = product_coefficient(&s[mu], &theta, beta, 1);
            let denom = F::from_i64(deg).times(&s00[mu]);
            let mut fixed = known;
            for (e, v) in l1.polar_part_at_zero() {
                let k = 1 - e;
                let sign = if k % 2 == 0 { F::one() } else { F::from_i64(-1) };
                let r = v.over(&denom.times(&sign)).expect("nonzero degree and leading term");
                fixed = fixed.add(&ZFrac::monomial(-k, r));
            }
            if F::is_graded() {
                if let Some(e) = homogeneity_defect(&fixed, -t.grading(beta).twisted_index) {
                    return Err(WallError::Inhomogeneous {
                        fixed_point: mu,
                        key: format!("{}", Mono::q(beta.clone(), 0)),
                        z_exp: e,
                        degree: -t.grading(beta).twisted_index - e as i64,
                    });
                }
            }
            s[mu].insert(beta.clone(), fixed);
            for j in 0..=y_order {
                let dj = product_coefficient(&s[mu], &theta, beta, j);
                if let Some((&e, v)) = dj.polar_part_at_zero().iter().next() {
                    return Err(WallError::NoSolution {
                        fixed_point: mu,
                        key: format!("{}", Mono::q(beta.clone(), 0)),
                        y_power: j,
                        z_exp: e,
                        value: v.to_json().to_string(),
                    });
                }
            }
        }
    }
    let trunc = Truncation::theta(d);
    Ok(s.into_iter()
        .map(|m| NovikovSeries::with_terms(theta.clone(), 0, trunc, m.into_iter().map(|(b, v)| (Mono::q(b, 0), v))))
        .collect())
}

/// Edge recursion from a localizer followed by [`uniqueness_reconstruct`].
pub fn recursion_reconstruct<F: Graded>(
    loc: &Localizer<F>,
    initial: &[NovikovSeries<ZFrac<F>>],
    d: u32,
    y_order: usize,
) -> Result<Vec<NovikovSeries<ZFrac<F>>>, WallError> {
    let edges = recursion_data(loc, d)?;
    uniqueness_reconstruct(loc.target(), initial, &edges, d, y_order)
}
