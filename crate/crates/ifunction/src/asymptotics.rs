//! Leading `1/z` asymptotics of the small I-function and their chamber truncations.

use num_traits::Zero;
use wallx_series::{CohClass, Field, NovikovSeries, Q};
use wallx_target::{chamber_truncate, AmbientCohomology, Epsilon, ToricTarget};

use crate::error::IError;
use crate::small_i::SmallIFunction;

/// `I = I0 + I1/z + O(1/z²)`, with `I1 = f0·1 + Σ_k f_k p_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct IAsymptotics {
    pub i0: NovikovSeries<Q>,
    pub i1: NovikovSeries<CohClass<Q>>,
    pub f0: NovikovSeries<Q>,
    /// One series per divisor generator `p_k`.
    pub f: Vec<NovikovSeries<Q>>,
}

/// Extracts `I0` and `I1` from a non-equivariant small I-function.
///
/// For semi-positive targets the positive `z` powers must vanish, the `z⁰`
/// part must be scalar and `I1` must live in degree at most 2.
pub fn i0_i1(t: &ToricTarget, coh: &AmbientCohomology, i: &SmallIFunction<Q>) -> Result<IAsymptotics, IError> {
    let ring = coh.ring();
    let exps = coh.basis_exponents();
    let unit = exps.iter().position(|e| e.iter().all(|&x| x == 0)).expect("unit in basis");
    let semi = t.is_semi_positive();
    let trunc = i.series.truncation();
    let theta = t.theta().to_vec();
    let mut i0 = NovikovSeries::new(theta.clone(), 0, trunc);
    let mut i1 = NovikovSeries::new(theta.clone(), 0, trunc);
    let mut f0 = NovikovSeries::new(theta.clone(), 0, trunc);
    let mut f = vec![NovikovSeries::new(theta, 0, trunc); t.rank()];
    for (m, e, c) in i.series.entries() {
        if e > 0 && semi {
            return Err(IError::Shape(format!("positive power z^{e} at {m}")));
        }
        if e == 0 {
            if semi && c.unit_multiple().is_none() {
                return Err(IError::Shape(format!("non-scalar z^0 coefficient at {m}")));
            }
            i0.add_term(m.clone(), c.coord(unit).clone());
        }
        if e == -1 {
            i1.add_term(m.clone(), c.clone());
            for (j, x) in c.coords().iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let deg: u32 = exps[j].iter().sum();
                match deg {
                    0 => f0.add_term(m.clone(), x.clone()),
                    1 => {
                        let k = exps[j].iter().position(|&v| v == 1).expect("linear monomial");
                        f[k].add_term(m.clone(), x.clone());
                    }
                    _ if semi => {
                        return Err(IError::Shape(format!("I1 has a component on {} at {m}", ring.names()[j])));
                    }
                    _ => {}
                }
            }
        }
    }
    if i0.get(&wallx_series::Mono::one(t.rank(), 0)) != Some(&Q::from_i64(1)) {
        return Err(IError::Shape("I0 does not start with 1".into()));
    }
    Ok(IAsymptotics { i0, i1, f0, f })
}

/// Chamber truncations `(J0^ε, J1^ε)` of `I0` and `I1`.
pub fn epsilon_j0_j1(asym: &IAsymptotics, eps: &Epsilon) -> (NovikovSeries<Q>, NovikovSeries<CohClass<Q>>) {
    (chamber_truncate(&asym.i0, eps), chamber_truncate(&asym.i1, eps))
}
