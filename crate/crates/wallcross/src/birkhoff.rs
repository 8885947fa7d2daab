//! Degree-by-degree factorization `J = S_τ(P)` of a small J-type series.

use std::collections::HashMap;

use num_traits::Zero;
use wallx_series::{CohClass, Mono, NovikovSeries, Truncation, ZSeries, Q};

use crate::error::WallError;
use crate::provider::InvariantProvider;
use crate::s_operator::{build_s_matrix, SOperator};
use crate::theory::Theory;

#[derive(Clone, Debug)]
pub struct BirkhoffData {
    /// `τ(0)` components in the state-space basis; each is `O(q)`.
    pub tau: Vec<NovikovSeries<Q>>,
    /// The power series `P = 1 + O(q)`.
    pub p: ZSeries<CohClass<Q>>,
    /// Coefficients of `S_τ(P) - J`; empty when `J` is reproduced exactly.
    pub residual: Vec<(Mono, i32, CohClass<Q>)>,
}

impl BirkhoffData {
    pub fn agrees(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Re-expresses an ambient class-valued series in the state-space basis.
pub fn project_series(theory: &Theory, s: &ZSeries<CohClass<Q>>) -> Result<ZSeries<CohClass<Q>>, WallError> {
    let mut out = ZSeries::new(s.theta().to_vec(), s.n_t(), s.truncation());
    for (m, e, c) in s.entries() {
        out.add_term(m.clone(), e, theory.project(c)?);
    }
    Ok(out)
}

fn valuation(theory: &Theory, tau: &[NovikovSeries<Q>]) -> Option<i64> {
    tau.iter().flat_map(|c| c.iter().map(|(m, _)| theory.ltheta(&m.beta))).min()
}

/// Finds `τ = O(q)` and `P` with `S_τ*(-z) J = P` a power series in `z`,
/// through θ-degree `d`, using `S` from the provider.
pub fn birkhoff_induction(
    provider: &dyn InvariantProvider,
    j: &ZSeries<CohClass<Q>>,
    d: u32,
) -> Result<BirkhoffData, WallError> {
    let theory = provider.theory();
    let n = theory.dim();
    if j.n_t() != 0 {
        return Err(WallError::InvalidParameter("birkhoff_induction takes a t-free series".into()));
    }
    let one = Mono::one(theory.rank(), 0);
    let lead: Vec<(i32, &CohClass<Q>)> =
        j.row(&one).map(|r| r.c.iter().map(|(e, c)| (*e, c)).collect()).unwrap_or_default();
    let unit = CohClass::unit(theory.ring());
    if lead.len() != 1 || lead[0].0 != 0 || *lead[0].1 != unit {
        return Err(WallError::InvalidParameter("J must equal 1 at q⁰".into()));
    }
    let j = j.truncate_theta(d as i64);
    let trunc = Truncation::theta(d);
    let mut tau: Vec<NovikovSeries<Q>> =
        (0..n).map(|_| NovikovSeries::new(theory.theta().to_vec(), 0, trunc)).collect();
    let mut cache: HashMap<u32, SOperator> = HashMap::new();
    let mut s_at = |tau: &[NovikovSeries<Q>]| -> Result<SOperator, WallError> {
        let m = valuation(theory, tau).map(|v| (d as i64 / v) as u32).unwrap_or(0);
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(m) {
            e.insert(build_s_matrix(provider, m, d)?);
        }
        cache[&m].at(tau)
    };
    for deg in 1..=d as i64 {
        let s = s_at(&tau)?;
        let x = s.adjoint_neg_z(&j)?;
        for (m, e, c) in x.entries() {
            if e == -1 && theory.ltheta(&m.beta) == deg {
                for (i, v) in c.coords().iter().enumerate() {
                    if !v.is_zero() {
                        tau[i].add_term(m.clone(), v.clone());
                    }
                }
            }
        }
    }
    let s = s_at(&tau)?;
    let x = s.adjoint_neg_z(&j)?;
    let p = x.filter_entries(|_, e| e >= 0);
    let rebuilt = apply_z(&s, &p)?;
    let residual = rebuilt.sub(&j).entries().map(|(m, e, c)| (m.clone(), e, c.clone())).collect();
    Ok(BirkhoffData { tau, p, residual })
}

/// `S(z)` applied to a `z`-dependent series, coefficient by coefficient.
pub fn apply_z(s: &SOperator, p: &ZSeries<CohClass<Q>>) -> Result<ZSeries<CohClass<Q>>, WallError> {
    let mut out: Option<ZSeries<CohClass<Q>>> = None;
    for (j, col) in s.columns().iter().enumerate() {
        let coord = crate::util::coordinate(p, j);
        let term = crate::util::bilinear(col, &coord, wallx_series::Module::scale);
        out = Some(match out {
            Some(acc) => acc.add(&term),
            None => term,
        });
    }
    out.ok_or_else(|| WallError::Internal("empty basis".into()))
}
