//! The small J-function assembled from one-point descendant invariants.

use num_traits::Zero;
use wallx_series::linalg::inverse;
use wallx_series::{CohClass, Field, Mono, NovikovSeries, Truncation, ZFrac, ZSeries, Q};

use crate::error::OracleError;
use crate::graph_sum::Localizer;
use crate::invariant::GraphSumOracle;

/// `1 + Σ_{0 < β·θ ≤ d} q^β Σ_i γ_i Σ_a ⟨γ^i ψ^a⟩_{0,1,β} z^{-a-2}` in the state-space basis.
pub fn oracle_small_j(oracle: &GraphSumOracle, d_max: u32) -> Result<ZSeries<CohClass<Q>>, OracleError> {
    let t = oracle.target();
    let space = oracle.space();
    let ring = space.ring();
    let n = space.dim();
    let ginv = inverse(ring.pairing())?;
    let vdim_max = (space.target_dim() + 2).max(0) as i32;
    let trunc = Truncation::theta(d_max).with_z(-vdim_max - 2 - d_max as i32 * 8, 0);
    let mut out = ZSeries::new(t.theta().to_vec(), 0, trunc);
    out.add_term(Mono::one(t.rank(), 0), 0, CohClass::unit(ring));
    for beta in t.effective_classes(d_max) {
        if t.ltheta(&beta) == 0 {
            continue;
        }
        let vdim = oracle.virtual_dim(&beta, 1);
        let mut by_power: Vec<Vec<Q>> = Vec::new();
        for j in 0..n {
            let a = vdim - space.degree(j) as i64;
            if a < 0 {
                continue;
            }
            let v = oracle.invariant(&[(j, a as u32)], &beta)?;
            if v.is_zero() {
                continue;
            }
            let a = a as usize;
            if by_power.len() <= a {
                by_power.resize(a + 1, vec![Q::zero(); n]);
            }
            for (i, row) in ginv.iter().enumerate() {
                by_power[a][i] += &row[j] * &v;
            }
        }
        for (a, coords) in by_power.into_iter().enumerate() {
            if coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            out.add_term(Mono::q(beta.clone(), 0), -(a as i32) - 2, CohClass::new(ring.clone(), coords)?);
        }
    }
    Ok(out)
}

/// Restrictions of the equivariant small J-function to each fixed point, as rational functions of `z`.
pub fn equivariant_small_j<F: Field>(
    loc: &Localizer<F>,
    d_max: u32,
) -> Result<Vec<NovikovSeries<ZFrac<F>>>, OracleError> {
    let t = loc.target();
    let trunc = Truncation::theta(d_max);
    let mut out = Vec::with_capacity(loc.n_fixed());
    for fp in 0..loc.n_fixed() {
        let mut s = NovikovSeries::new(t.theta().to_vec(), 0, trunc);
        s.add_term(Mono::one(t.rank(), 0), ZFrac::one());
        for beta in t.effective_classes(d_max) {
            if t.ltheta(&beta) == 0 {
                continue;
            }
            let c = loc.j_restriction(fp, &beta)?;
            s.add_term(Mono::q(beta, 0), c);
        }
        out.push(s);
    }
    Ok(out)
}
