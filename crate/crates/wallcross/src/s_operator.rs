//! The operator `S(z)(γ) = Σ_i γ_i ⟨⟨γ^i/(z-ψ), γ⟩⟩` and its unitarity.

use num_traits::Zero;
use wallx_series::linalg::inverse;
use wallx_series::{CohClass, Module, Mono, NovikovSeries, Truncation, ZSeries, Q};
use wallx_target::Epsilon;

use crate::error::WallError;
use crate::provider::InvariantProvider;
use crate::theory::Theory;
use crate::util::{multi_factorial, multi_indices, negate_z, pair_series};

/// Half-width of the `z` window used for `S` and the products formed from it.
pub const Z_WINDOW: i32 = 512;

/// The columns `S(γ_j)` over the state-space basis, with `t = Σ t_j γ_j`.
#[derive(Clone, Debug)]
pub struct SOperator {
    theory: Theory,
    epsilon: Epsilon,
    columns: Vec<ZSeries<CohClass<Q>>>,
}

/// Builds `S(γ_j)` for every basis element through `t`-degree `m` and θ-degree `d`.
pub fn build_s_matrix(provider: &dyn InvariantProvider, m: u32, d: u32) -> Result<SOperator, WallError> {
    let theory = provider.theory().clone();
    let n = theory.dim();
    let ring = theory.ring().clone();
    let ginv = inverse(ring.pairing())?;
    let trunc = Truncation::new(d, m, -Z_WINDOW, Z_WINDOW)?;
    let theta = theory.theta().to_vec();
    let rank = theory.rank();
    let classes = theory.classes(d);
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let gamma = theory.basis(j);
        let mut col = ZSeries::new(theta.clone(), n, trunc);
        // Degree zero: e^{t/z} γ.
        for k in 0..=m {
            for mi in multi_indices(n, k) {
                let cls = mi.iter().enumerate().fold(gamma.clone(), |acc, (i, &e)| acc.mul(&theory.basis(i).pow(e)));
                if cls.is_zero() {
                    continue;
                }
                let c = cls.scale(&multi_factorial(&mi).recip());
                col.add_term(Mono { beta: vec![0; rank], t: mi }, -(k as i32), c);
            }
        }
        for beta in &classes {
            for k in 0..=m {
                let vdim = theory.virtual_dim(beta, 2 + k as usize);
                for mi in multi_indices(n, k) {
                    let mut ins: Vec<(usize, u32)> = vec![(0, 0), (j, 0)];
                    for (i, &e) in mi.iter().enumerate() {
                        ins.extend(std::iter::repeat_n((i, 0), e as usize));
                    }
                    let fixed: i64 = ins[1..].iter().map(|&(i, _)| theory.degree(i) as i64).sum();
                    let weight = multi_factorial(&mi).recip();
                    let mut by_power: Vec<Vec<Q>> = Vec::new();
                    for l in 0..n {
                        let a = vdim - fixed - theory.degree(l) as i64;
                        if a < 0 {
                            continue;
                        }
                        ins[0] = (l, a as u32);
                        let v = provider.bracket(&ins, beta)?;
                        if v.is_zero() {
                            continue;
                        }
                        let a = a as usize;
                        if by_power.len() <= a {
                            by_power.resize(a + 1, vec![Q::zero(); n]);
                        }
                        let v = v * &weight;
                        for (i, row) in ginv.iter().enumerate() {
                            by_power[a][i] += &row[l] * &v;
                        }
                    }
                    for (a, coords) in by_power.into_iter().enumerate() {
                        if coords.iter().all(|c| c.is_zero()) {
                            continue;
                        }
                        col.add_term(
                            Mono { beta: beta.clone(), t: mi.clone() },
                            -(a as i32) - 1,
                            CohClass::new(ring.clone(), coords)?,
                        );
                    }
                }
            }
        }
        columns.push(col);
    }
    Ok(SOperator { theory, epsilon: provider.envelope().epsilon, columns })
}

/// `S(z)(γ)` for a class-valued series `γ = 1 + O(q)` without `t`-dependence.
pub fn build_s(
    provider: &dyn InvariantProvider,
    gamma: &NovikovSeries<CohClass<Q>>,
    m: u32,
    d: u32,
) -> Result<ZSeries<CohClass<Q>>, WallError> {
    build_s_matrix(provider, m, d)?.apply(gamma)
}

impl SOperator {
    pub fn from_columns(theory: Theory, epsilon: Epsilon, columns: Vec<ZSeries<CohClass<Q>>>) -> Self {
        SOperator { theory, epsilon, columns }
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn epsilon(&self) -> &Epsilon {
        &self.epsilon
    }

    pub fn columns(&self) -> &[ZSeries<CohClass<Q>>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &ZSeries<CohClass<Q>> {
        &self.columns[j]
    }

    pub fn n_t(&self) -> usize {
        self.columns.first().map(|c| c.n_t()).unwrap_or(0)
    }

    /// Applies `S` to `Σ_β q^β γ_β`, where `γ` carries no `t`-variables.
    pub fn apply(&self, gamma: &NovikovSeries<CohClass<Q>>) -> Result<ZSeries<CohClass<Q>>, WallError> {
        if gamma.n_t() != 0 {
            return Err(WallError::InvalidParameter("γ must not depend on t".into()));
        }
        let first = &self.columns[0];
        let mut out = first.empty_like();
        let trunc = first.truncation();
        for (gm, g) in gamma.iter() {
            if gm.theta_degree(self.theory.theta()) > trunc.max_theta_degree as i64 {
                continue;
            }
            for (j, c) in g.coords().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (m, e, v) in self.columns[j].entries() {
                    let mm = Mono { beta: m.beta.iter().zip(&gm.beta).map(|(a, b)| a + b).collect(), t: m.t.clone() };
                    out.add_term(mm, e, v.scale(c));
                }
            }
        }
        Ok(out)
    }

    /// `S` at the parameter `τ(t)`: a transformation `t + O(q)` in the same
    /// variables, or a `t`-free series with no constant term.
    pub fn at(&self, tau: &[NovikovSeries<Q>]) -> Result<SOperator, WallError> {
        if tau.len() != self.theory.dim() {
            return Err(WallError::InvalidParameter(format!(
                "τ has {} components, expected {}",
                tau.len(),
                self.theory.dim()
            )));
        }
        let same_vars = tau.iter().all(|x| x.n_t() == self.n_t());
        let columns = self
            .columns
            .iter()
            .map(|c| if same_vars && tau.iter().any(|x| x.n_t() > 0) { c.substitute_t(tau) } else { c.compose_t(tau) })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SOperator { theory: self.theory.clone(), epsilon: self.epsilon.clone(), columns })
    }

    /// `S*(-z) v = Σ_a γ^a (S(γ_a)(-z), v)`.
    pub fn adjoint_neg_z(&self, v: &ZSeries<CohClass<Q>>) -> Result<ZSeries<CohClass<Q>>, WallError> {
        let ring = self.theory.ring();
        let mut out: Option<ZSeries<CohClass<Q>>> = None;
        for (a, col) in self.columns.iter().enumerate() {
            if col.n_t() != v.n_t() {
                return Err(WallError::InvalidParameter("S and the series use different t-variables".into()));
            }
            let u = pair_series(&negate_z(col), v);
            let dual = CohClass::dual_basis(ring, a);
            let term = u.map(|x| dual.scale(x));
            out = Some(match out {
                Some(acc) => acc.add(&term),
                None => term,
            });
        }
        Ok(out.expect("nonempty basis"))
    }
}

/// A nonzero coefficient of `S*(-z)S(z) - Id`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityViolation {
    pub pair: (usize, usize),
    pub mono: Mono,
    pub z_exp: i32,
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct UnitarityReport {
    pub violations: Vec<UnitarityViolation>,
    pub checked_pairs: usize,
}

impl UnitarityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `(S(γ_a)(-z), S(γ_b)(z))` with `∫ γ_a γ_b` for every basis pair.
pub fn unitarity_check(s: &SOperator) -> UnitarityReport {
    let g = s.theory.ring().pairing();
    let n = s.columns.len();
    let mut report = UnitarityReport::default();
    let negated: Vec<_> = s.columns.iter().map(negate_z).collect();
    for a in 0..n {
        for b in 0..n {
            let mut u = pair_series(&negated[a], &s.columns[b]);
            let first = &s.columns[0];
            u.add_term(Mono::one(first.theta().len(), first.n_t()), 0, -g[a][b].clone());
            report.checked_pairs += 1;
            for (m, e, v) in u.entries() {
                report.violations.push(UnitarityViolation {
                    pair: (a, b),
                    mono: m.clone(),
                    z_exp: e,
                    value: v.clone(),
                });
            }
        }
    }
    report
}

/// `P = S*(-z) J`, which must be a power series in `z`.
pub fn compute_p_from_j(s: &SOperator, j: &ZSeries<CohClass<Q>>) -> Result<ZSeries<CohClass<Q>>, WallError> {
    let p = s.adjoint_neg_z(j)?;
    if let Some((m, e, v)) = p.entries().find(|(_, e, _)| *e < 0) {
        return Err(WallError::Inconsistent(format!("P has a z^{e} term {v} at {m}")));
    }
    Ok(p)
}
