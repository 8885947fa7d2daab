//! Mirror maps, the mirror transform of a small I-function and string transformations.

use num_traits::Zero;
use wallx_ifunction::{epsilon_j0_j1, IAsymptotics, SmallIFunction};
use wallx_series::linalg::inverse;
use wallx_series::{
    invert_novikov_map, invert_transformation, substitute_t, CohClass, Module, Mono, NovikovSeries, Truncation,
    ZSeries, Q,
};
use wallx_target::{chamber_truncate, AmbientCohomology, Epsilon, ToricTarget};

use crate::error::WallError;
use crate::provider::InvariantProvider;
use crate::theory::Theory;
use crate::util::{multi_factorial, multi_indices};

/// `τ^ε(0) = g0·1 + Σ_k g_k p_k` with `g = f^ε / J0^ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub epsilon: Epsilon,
    pub g0: NovikovSeries<Q>,
    pub g: Vec<NovikovSeries<Q>>,
}

impl MirrorMap {
    /// The map as a class-valued series in the state space.
    pub fn as_class(&self, theory: &Theory, coh: &AmbientCohomology) -> Result<NovikovSeries<CohClass<Q>>, WallError> {
        let mut out = NovikovSeries::new(self.g0.theta().to_vec(), 0, self.g0.truncation());
        let unit = CohClass::unit(theory.ring());
        for (m, c) in self.g0.iter() {
            out.add_term(m.clone(), unit.scale(c));
        }
        for (k, gk) in self.g.iter().enumerate() {
            let p = theory.project(&coh.p(k))?;
            for (m, c) in gk.iter() {
                out.add_term(m.clone(), p.scale(c));
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.g0.is_empty() && self.g.iter().all(|x| x.is_empty())
    }
}

/// The small mirror map of a semi-positive target in the chamber `ε`.
pub fn mirror_map_small(t: &ToricTarget, asym: &IAsymptotics, eps: &Epsilon) -> Result<MirrorMap, WallError> {
    if !t.is_semi_positive() {
        return Err(WallError::Unsupported(
            "the closed mirror map needs a semi-positive target; use birkhoff_induction instead".into(),
        ));
    }
    let (j0, _) = epsilon_j0_j1(asym, eps);
    let inv = j0.invert()?;
    let g0 = chamber_truncate(&asym.f0, eps).mul(&inv);
    let g = asym.f.iter().map(|f| chamber_truncate(f, eps).mul(&inv)).collect();
    Ok(MirrorMap { epsilon: eps.clone(), g0, g })
}

/// The small J-function in the variable `Q` together with the inverse mirror map.
#[derive(Clone, Debug)]
pub struct MirrorTransform {
    pub mirror: MirrorMap,
    /// `h` with `q^β = Q^β exp(Σ_k h_k β_k)`.
    pub q_of_q: Vec<NovikovSeries<Q>>,
    pub small_j: ZSeries<CohClass<Q>>,
}

/// `J(Q) = exp(-(g0 + Σ g_k p_k)/z) · I/I0`, rewritten in `Q^β = q^β e^{g·β}`.
pub fn mirror_transform(
    t: &ToricTarget,
    coh: &AmbientCohomology,
    i: &SmallIFunction<Q>,
    asym: &IAsymptotics,
) -> Result<MirrorTransform, WallError> {
    if i.equivariant {
        return Err(WallError::InvalidParameter("the mirror transform acts on a non-equivariant I-function".into()));
    }
    if asym.f.len() != t.rank() {
        return Err(WallError::InvalidParameter(format!(
            "{} divisor components for {} Novikov variables",
            asym.f.len(),
            t.rank()
        )));
    }
    let mirror = mirror_map_small(t, asym, &Epsilon::ZeroPlus)?;
    let ring = coh.ring();
    let trunc = i.series.truncation();
    let theta = t.theta().to_vec();
    let mut x = NovikovSeries::new(theta.clone(), 0, trunc);
    for (m, c) in mirror.g0.iter() {
        x.add_term(m.clone(), CohClass::unit(ring).scale(&-c.clone()));
    }
    for (k, gk) in mirror.g.iter().enumerate() {
        let p = coh.p(k);
        for (m, c) in gk.iter() {
            x.add_term(m.clone(), p.scale(&-c.clone()));
        }
    }
    // exp(x/z), with x = O(q) so the sum stops at the θ-degree bound.
    let mut expo = ZSeries::new(theta.clone(), 0, trunc);
    expo.add_term(Mono::one(t.rank(), 0), 0, CohClass::unit(ring));
    let mut power = NovikovSeries::constant(theta.clone(), 0, trunc, CohClass::unit(ring));
    for n in 1..=trunc.max_theta_degree as i64 {
        power = power.mul(&x).scale(&Q::from_integer(n.into()).recip());
        if power.is_empty() {
            break;
        }
        for (m, c) in power.iter() {
            expo.add_term(m.clone(), -(n as i32), c.clone());
        }
    }
    let normalized = i.series.mul_scalar_series(&asym.i0.invert()?);
    let in_q = expo.mul(&normalized);
    let q_of_q = invert_novikov_map(&mirror.g)?;
    let small_j = in_q.substitute_novikov(&q_of_q)?;
    if small_j.substitute_novikov(&mirror.g)? != in_q {
        return Err(WallError::Internal("mirror map round trip failed".into()));
    }
    Ok(MirrorTransform { mirror, q_of_q, small_j })
}

/// `τ_γ(t) = Σ_i γ_i ⟨⟨γ^i, γ⟩⟩ - γ` as components in the state-space basis.
pub fn string_transform(
    provider: &dyn InvariantProvider,
    gamma: &NovikovSeries<CohClass<Q>>,
    eps: &Epsilon,
    m: u32,
    d: u32,
) -> Result<Vec<NovikovSeries<Q>>, WallError> {
    let env = provider.envelope();
    if &env.epsilon != eps {
        return Err(WallError::InvalidParameter(format!("provider answers ε = {:?}, requested {eps:?}", env.epsilon)));
    }
    let theory = provider.theory();
    let n = theory.dim();
    let rank = theory.rank();
    let unit = theory.unit_index();
    let lead = gamma.get(&Mono::one(rank, gamma.n_t()));
    if gamma.n_t() != 0 || lead.is_none_or(|c| c.coord(unit).is_zero()) {
        return Err(WallError::InvalidParameter("γ must be a t-free series with invertible q⁰ part".into()));
    }
    let ginv = inverse(theory.ring().pairing())?;
    let trunc = Truncation::theta(d).with_t(m);
    let theta = theory.theta().to_vec();
    let mut tau: Vec<NovikovSeries<Q>> = (0..n).map(|_| NovikovSeries::new(theta.clone(), n, trunc)).collect();
    let classes = theory.classes(d);
    for (gm, g) in gamma.iter() {
        for (j, cj) in g.coords().iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            // Degree zero: the three-point term t ∪ γ_j.
            if m >= 1 {
                for s in 0..n {
                    let prod = theory.basis(s).mul(&theory.basis(j));
                    for (i, c) in prod.coords().iter().enumerate() {
                        let mut t = vec![0; n];
                        t[s] = 1;
                        tau[i].add_term(Mono { beta: gm.beta.clone(), t }, c * cj);
                    }
                }
            }
            for beta in &classes {
                let total: Vec<i64> = beta.iter().zip(&gm.beta).map(|(a, b)| a + b).collect();
                if theory.ltheta(&total) > d as i64 {
                    continue;
                }
                for k in 0..=m {
                    for mi in multi_indices(n, k) {
                        let mut ins: Vec<(usize, u32)> = vec![(0, 0), (j, 0)];
                        for (s, &e) in mi.iter().enumerate() {
                            ins.extend(std::iter::repeat_n((s, 0), e as usize));
                        }
                        let weight = multi_factorial(&mi).recip() * cj;
                        for l in 0..n {
                            ins[0] = (l, 0);
                            let v = provider.bracket(&ins, beta)?;
                            if v.is_zero() {
                                continue;
                            }
                            for (i, row) in ginv.iter().enumerate() {
                                let c = &row[l] * &v * &weight;
                                tau[i].add_term(Mono { beta: total.clone(), t: mi.clone() }, c);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(tau)
}

/// `(τ^{ε₁}_γ)^{-1} ∘ τ^{ε₂}_γ`.
pub fn generalized_string_transform(
    first: &[NovikovSeries<Q>],
    second: &[NovikovSeries<Q>],
) -> Result<Vec<NovikovSeries<Q>>, WallError> {
    let inv = invert_transformation(first)?;
    Ok(inv.iter().map(|c| substitute_t(c, second)).collect::<Result<Vec<_>, _>>()?)
}

/// The `t = 0` value of a transformation as a class-valued series.
pub fn transformation_at_zero(theory: &Theory, tau: &[NovikovSeries<Q>]) -> NovikovSeries<CohClass<Q>> {
    let first = &tau[0];
    let mut out = NovikovSeries::new(first.theta().to_vec(), 0, first.truncation());
    for (i, comp) in tau.iter().enumerate() {
        let b = theory.basis(i);
        for (m, c) in comp.iter() {
            if m.t_degree() == 0 {
                out.add_term(Mono::q(m.beta.clone(), 0), b.scale(c));
            }
        }
    }
    out
}
