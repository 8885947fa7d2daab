//! The state space and grading shared by every invariant source.

use std::sync::Arc;

use wallx_oracle::StateSpace;
use wallx_series::{CohClass, CohRing, Q};
use wallx_target::{AmbientCohomology, ToricTarget};

use crate::error::WallError;

/// A target together with the basis in which brackets are indexed.
#[derive(Clone, Debug)]
pub struct Theory {
    target: ToricTarget,
    space: StateSpace,
}

impl Theory {
    pub fn new(t: &ToricTarget, coh: &AmbientCohomology) -> Result<Self, WallError> {
        Ok(Theory { target: t.clone(), space: StateSpace::new(t, coh)? })
    }

    pub fn target(&self) -> &ToricTarget {
        &self.target
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn ring(&self) -> &Arc<CohRing<Q>> {
        self.space.ring()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn theta(&self) -> &[i64] {
        self.target.theta()
    }

    pub fn rank(&self) -> usize {
        self.target.rank()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.space.degree(i)
    }

    /// Expected dimension of the `k`-pointed moduli space in class `β`.
    pub fn virtual_dim(&self, beta: &[i64], k: usize) -> i64 {
        self.space.target_dim() + self.target.grading(beta).twisted_index + k as i64 - 3
    }

    pub fn ltheta(&self, beta: &[i64]) -> i64 {
        self.target.ltheta(beta)
    }

    /// Nonzero effective classes of θ-degree at most `d`, in increasing degree.
    pub fn classes(&self, d: u32) -> Vec<Vec<i64>> {
        self.target.effective_classes(d).into_iter().filter(|b| self.target.ltheta(b) > 0).collect()
    }

    pub fn basis(&self, i: usize) -> CohClass<Q> {
        CohClass::basis(self.ring(), i)
    }

    /// Index of the unit in the basis.
    pub fn unit_index(&self) -> usize {
        (0..self.dim()).find(|&i| self.space.lift(i).iter().all(|&e| e == 0)).expect("unit in basis")
    }

    /// Image of an ambient class.
    pub fn project(&self, c: &CohClass<Q>) -> Result<CohClass<Q>, WallError> {
        if std::sync::Arc::ptr_eq(c.ring(), self.ring()) {
            return Ok(c.clone());
        }
        Ok(self.space.project(c)?)
    }
}
