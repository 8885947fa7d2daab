//! Differential operators on I-functions and the passage to non-equivariant classes.

use wallx_series::linalg::inverse;
use wallx_series::{CohClass, Field, Module, Mono, RatFunc, ZSeries, Q};
use wallx_target::equivariant::{symbolic_params, tangent_euler};
use wallx_target::{AmbientCohomology, ToricTarget};

use crate::error::IError;

/// `p_k + z q_k ∂/∂q_k`, applied coefficient-wise.
pub fn apply_divisor_derivative(s: &ZSeries<CohClass<Q>>, k: usize, p: &CohClass<Q>) -> ZSeries<CohClass<Q>> {
    let mut out = s.empty_like();
    for (m, e, c) in s.entries() {
        out.add_term(m.clone(), e, p.mul(c));
        let d = m.beta[k];
        if d != 0 {
            out.add_term(m.clone(), e + 1, c.scale(&Q::from_i64(d)));
        }
    }
    out
}

/// Multiplies by the Novikov monomial `q^β`.
pub fn shift_q(s: &ZSeries<CohClass<Q>>, beta: &[i64]) -> ZSeries<CohClass<Q>> {
    let shift = Mono::q(beta.to_vec(), s.n_t());
    let mut out = s.empty_like();
    for (m, e, c) in s.entries() {
        out.add_term(m.mul(&shift), e, c.clone());
    }
    out
}

/// Maps an equivariant series in the fixed-point basis to ambient coordinates
/// and sets every equivariant parameter to zero.
pub fn nonequivariant_limit(
    t: &ToricTarget,
    coh: &AmbientCohomology,
    s: &ZSeries<CohClass<RatFunc>>,
) -> Result<ZSeries<CohClass<Q>>, IError> {
    let lam = symbolic_params(t);
    let n_fixed = t.fixed_points()?.len();
    let exps = coh.basis_exponents();
    // weight[σ][j] = b_j|σ / e(T_σ)
    let mut weight = Vec::with_capacity(n_fixed);
    for fp in 0..n_fixed {
        let p: Vec<RatFunc> = (0..t.rank()).map(|k| t.p_restriction(fp, k).eval(&lam)).collect();
        let e = tangent_euler(t, fp, &lam);
        let row: Vec<RatFunc> = exps
            .iter()
            .map(|ex| {
                let b = ex.iter().enumerate().fold(RatFunc::from_i64(1), |acc, (k, &n)| acc.times(&p[k].powu(n)));
                b.over(&e).expect("isolated fixed point")
            })
            .collect();
        weight.push(row);
    }
    let ginv = inverse(coh.ring().pairing())?;
    let zero = vec![Q::from_i64(0); lam.len()];
    let mut out = ZSeries::new(s.theta().to_vec(), s.n_t(), s.truncation());
    for (m, e, c) in s.entries() {
        let mut pairings = Vec::with_capacity(exps.len());
        for j in 0..exps.len() {
            let mut acc = RatFunc::from_i64(0);
            for (fp, w) in weight.iter().enumerate() {
                acc = acc.plus(&c.coord(fp).times(&w[j]));
            }
            let v = acc.eval(&zero).ok_or_else(|| IError::SingularLimit(format!("{m} z^{e}")))?;
            pairings.push(v);
        }
        let coords: Vec<Q> = (0..exps.len())
            .map(|i| (0..exps.len()).fold(Q::from_i64(0), |a, j| a + &pairings[j] * &ginv[j][i]))
            .collect();
        out.add_term(m.clone(), e, CohClass::new(coh.ring().clone(), coords)?);
    }
    Ok(out)
}
