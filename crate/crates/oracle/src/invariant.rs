//! Non-equivariant invariants from equivariant graph sums at random parameter values.

use std::sync::OnceLock;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallx_series::{CohClass, Field, Q};
use wallx_target::{AmbientCohomology, ToricTarget};

use crate::error::OracleError;
use crate::graph_sum::{Insertion, Localizer};
use crate::psi::Psi;
use crate::state::StateSpace;

pub const DEFAULT_DEGREE_BOUND: i64 = 2;
const CANDIDATES: usize = 6;

/// Graph-sum invariants of a target, indexed by the state-space basis.
pub struct GraphSumOracle<'a> {
    t: &'a ToricTarget,
    space: StateSpace,
    bound: i64,
    localizers: Vec<OnceLock<Option<Localizer<'a, Q>>>>,
    params: Vec<Vec<Q>>,
}

impl<'a> GraphSumOracle<'a> {
    pub fn new(t: &'a ToricTarget, coh: &AmbientCohomology) -> Result<Self, OracleError> {
        Self::with_seed(t, coh, 0x5eed)
    }

    pub fn with_seed(t: &'a ToricTarget, coh: &AmbientCohomology, seed: u64) -> Result<Self, OracleError> {
        let space = StateSpace::new(t, coh)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = (0..CANDIDATES)
            .map(|_| (0..t.n_params()).map(|_| Q::from_i64(rng.gen_range(-1_000_000..=1_000_000))).collect())
            .collect();
        Ok(GraphSumOracle {
            t,
            space,
            bound: DEFAULT_DEGREE_BOUND,
            localizers: (0..CANDIDATES).map(|_| OnceLock::new()).collect(),
            params,
        })
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.bound = bound;
        self
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn target(&self) -> &ToricTarget {
        self.t
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    /// Expected dimension of `M̄_{0,k}(β)` for the twisted theory.
    pub fn virtual_dim(&self, beta: &[i64], k: usize) -> i64 {
        self.space.target_dim() + self.t.grading(beta).twisted_index + k as i64 - 3
    }

    fn localizer(&self, i: usize) -> Option<&Localizer<'a, Q>> {
        self.localizers[i].get_or_init(|| Localizer::new(self.t, self.params[i].clone()).ok()).as_ref()
    }

    /// `⟨γ_{i_1} ψ^{a_1}, …, γ_{i_k} ψ^{a_k}⟩_{0,k,β}` for state-space basis indices.
    pub fn invariant(&self, ins: &[(usize, u32)], beta: &[i64]) -> Result<Q, OracleError> {
        let d = self.t.ltheta(beta);
        if d > self.bound {
            return Err(OracleError::DegreeBound { degree: d, bound: self.bound });
        }
        let zero_class = beta.iter().all(|&b| b == 0);
        if (zero_class && ins.len() < 3) || (!zero_class && !self.t.is_effective(beta)) {
            return Ok(Q::zero());
        }
        let total: i64 = ins.iter().map(|&(i, a)| (self.space.degree(i) + a) as i64).sum();
        if total != self.virtual_dim(beta, ins.len()) {
            return Ok(Q::zero());
        }
        let mut values = Vec::with_capacity(2);
        for i in 0..CANDIDATES {
            let Some(loc) = self.localizer(i) else { continue };
            let marks: Vec<Insertion<Q>> = ins
                .iter()
                .map(|&(j, a)| Insertion::new(loc.monomial_values(self.space.lift(j)), Psi::Power(a)))
                .collect();
            match loc.bracket(&marks, beta) {
                Ok(v) => values
                    .push(v.constant_value().ok_or_else(|| OracleError::Degenerate("z-dependent bracket".into()))?),
                Err(OracleError::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            }
            if values.len() == 2 {
                break;
            }
        }
        match values.as_slice() {
            [a, b] if a == b => Ok(a.clone()),
            [a, b] => Err(OracleError::NotConstant(format!("{ins:?} at {beta:?}: {a} vs {b}"))),
            _ => Err(OracleError::Degenerate("no generic parameter values found".into())),
        }
    }

    /// Multilinear extension of [`Self::invariant`] to arbitrary state-space classes.
    pub fn invariant_of(&self, ins: &[(CohClass<Q>, u32)], beta: &[i64]) -> Result<Q, OracleError> {
        let mut acc = Q::zero();
        let mut idx = vec![0usize; ins.len()];
        let n = self.space.dim();
        if ins.is_empty() {
            return self.invariant(&[], beta);
        }
        loop {
            let coeff = ins.iter().zip(&idx).fold(Q::from_i64(1), |c, ((cls, _), &i)| c * cls.coord(i));
            if !coeff.is_zero() {
                let basis: Vec<(usize, u32)> = ins.iter().zip(&idx).map(|((_, a), &i)| (i, *a)).collect();
                acc += coeff * self.invariant(&basis, beta)?;
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                return Ok(acc);
            }
        }
    }
}
