//! Quantum differential operators annihilating a one-parameter series.

use std::collections::BTreeMap;

use num_traits::Zero;
use wallx_series::linalg::solve;
use wallx_series::{CohClass, Mono, SeriesError, ZSeries, Q};

use crate::error::WallError;

/// `Dⁿ + Σ_{k<n} a_k(q,z) Dᵏ` with `D = p + z q d/dq`.
#[derive(Clone, Debug, PartialEq)]
pub struct QdeOperator {
    pub order: usize,
    /// `a_0, …, a_{n-1}`, each a polynomial in `q` and `z`.
    pub coeffs: Vec<ZSeries<Q>>,
}

/// `D F = p·F + z q dF/dq`.
pub fn apply_d(f: &ZSeries<CohClass<Q>>, p: &CohClass<Q>) -> ZSeries<CohClass<Q>> {
    let mut out = f.empty_like();
    for (m, e, c) in f.entries() {
        out.add_term(m.clone(), e, p.mul(c));
        if m.beta[0] != 0 {
            out.add_term(m.clone(), e + 1, c.map_scalars(|x| x * Q::from_integer(m.beta[0].into())));
        }
    }
    out
}

/// Finds the monic order-`n` operator annihilating `j` through its truncation.
///
/// Coefficients are taken homogeneous: `a_k` is a combination of `q^d z^e`
/// with `c1·d + e = n - k`, where `c1` is the degree of `q`.
pub fn qde_find(j: &ZSeries<CohClass<Q>>, p: &CohClass<Q>, c1: i64, n: usize) -> Result<QdeOperator, WallError> {
    if j.theta().len() != 1 || j.n_t() != 0 {
        return Err(WallError::Unsupported("operators are found for one Novikov variable without t".into()));
    }
    let dmax = j.truncation().max_theta_degree as i64 / j.theta()[0].max(1);
    let mut powers = vec![j.clone()];
    for k in 1..=n {
        let next = apply_d(&powers[k - 1], p);
        powers.push(next);
    }
    let mut unknowns: Vec<(usize, i64, i32)> = Vec::new();
    for k in 0..n {
        for d in 0..=dmax {
            let e = n as i64 - k as i64 - c1 * d;
            if e >= 0 {
                unknowns.push((k, d, e as i32));
            }
        }
    }
    // Rows: (q-degree, z-exponent, basis coordinate).
    let mut rows: BTreeMap<(i64, i32, usize), Vec<Q>> = BTreeMap::new();
    let mut rhs: BTreeMap<(i64, i32, usize), Q> = BTreeMap::new();
    let cols = unknowns.len();
    for (m, e, c) in powers[n].entries() {
        for (i, x) in c.coords().iter().enumerate() {
            if !x.is_zero() {
                *rhs.entry((m.beta[0], e, i)).or_insert_with(Q::zero) -= x;
                rows.entry((m.beta[0], e, i)).or_insert_with(|| vec![Q::zero(); cols]);
            }
        }
    }
    for (u, &(k, d, ez)) in unknowns.iter().enumerate() {
        for (m, e, c) in powers[k].entries() {
            let deg = m.beta[0] + d;
            if deg > dmax {
                continue;
            }
            for (i, x) in c.coords().iter().enumerate() {
                if !x.is_zero() {
                    let row = rows.entry((deg, e + ez, i)).or_insert_with(|| vec![Q::zero(); cols]);
                    row[u] += x;
                }
            }
        }
    }
    let keys: Vec<_> = rows.keys().copied().collect();
    let a: Vec<Vec<Q>> = keys.iter().map(|k| rows[k].clone()).collect();
    let b: Vec<Q> = keys.iter().map(|k| rhs.get(k).cloned().unwrap_or_else(Q::zero)).collect();
    let x = match solve(&a, &b, cols) {
        Ok(x) => x,
        Err(SeriesError::NoSolution) => return Err(WallError::NotFound(n)),
        Err(SeriesError::NotUnique(k)) => {
            return Err(WallError::NonUnique(format!("{k} free parameters in the order-{n} operator")))
        }
        Err(e) => return Err(e.into()),
    };
    let mut coeffs: Vec<ZSeries<Q>> = (0..n).map(|_| ZSeries::new(j.theta().to_vec(), 0, j.truncation())).collect();
    for ((k, d, e), v) in unknowns.into_iter().zip(x) {
        coeffs[k].add_term(Mono::q(vec![d], 0), e, v);
    }
    Ok(QdeOperator { order: n, coeffs })
}

/// `L J` for an operator with the given coefficients.
pub fn apply_operator(op: &QdeOperator, j: &ZSeries<CohClass<Q>>, p: &CohClass<Q>) -> ZSeries<CohClass<Q>> {
    let mut power = j.clone();
    let mut acc = j.empty_like();
    for k in 0..=op.order {
        if k == op.order {
            acc = acc.add(&power);
        } else {
            acc = acc.add(&power.mul_scalar_z(&op.coeffs[k]));
            power = apply_d(&power, p);
        }
    }
    acc
}
