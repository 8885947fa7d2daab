//! The non-equivariant state space on which invariants are indexed.
//!
//! Without convex twists this is the ambient cohomology. With them, classes
//! pair through `∫ e(E) a b`, and the state space is the quotient by the
//! kernel of that pairing.

use std::sync::Arc;

use num_traits::Zero;
use wallx_series::linalg::{inverse, rank};
use wallx_series::{CohClass, CohRing, Q};
use wallx_target::{AmbientCohomology, ToricTarget};

use crate::error::OracleError;

#[derive(Clone, Debug)]
pub struct StateSpace {
    ring: Arc<CohRing<Q>>,
    /// Exponents of `p_1..p_l` of the monomial lifting each basis element.
    lifts: Vec<Vec<u32>>,
    /// Ambient basis index of each state-space basis element.
    ambient_index: Vec<usize>,
    ambient: Arc<CohRing<Q>>,
    twist_class: CohClass<Q>,
    dim_eff: i64,
}

impl StateSpace {
    pub fn new(t: &ToricTarget, coh: &AmbientCohomology) -> Result<Self, OracleError> {
        if !t.concave_twist().is_empty() {
            return Err(OracleError::Unsupported("non-equivariant invariants of concave twists".into()));
        }
        let ambient = coh.ring().clone();
        let mut twist_class = CohClass::unit(&ambient);
        for xi in t.convex_twist() {
            twist_class = twist_class.mul(&coh.character_class(xi));
        }
        let n = ambient.dim();
        let basis: Vec<CohClass<Q>> = (0..n).map(|i| CohClass::basis(&ambient, i)).collect();
        let gram: Vec<Vec<Q>> =
            basis.iter().map(|a| basis.iter().map(|b| twist_class.mul(a).mul(b).integral()).collect()).collect();
        let degrees = ambient.degrees().map(|d| d.to_vec()).unwrap_or_else(|| vec![0; n]);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| degrees[i]);
        let mut kept: Vec<usize> = Vec::new();
        for i in order {
            let mut rows: Vec<Vec<Q>> = kept.iter().map(|&k| gram[k].clone()).collect();
            rows.push(gram[i].clone());
            if rank(&rows, n) == rows.len() {
                kept.push(i);
            }
        }
        kept.sort_unstable();
        let pairing: Vec<Vec<Q>> = kept.iter().map(|&i| kept.iter().map(|&j| gram[i][j].clone()).collect()).collect();
        let ginv = inverse(&pairing)?;
        // Coordinates of an ambient class in the quotient, through its pairings.
        let project = |c: &CohClass<Q>| -> Vec<Q> {
            let f: Vec<Q> = kept.iter().map(|&k| twist_class.mul(c).mul(&basis[k]).integral()).collect();
            (0..kept.len()).map(|i| (0..kept.len()).fold(Q::zero(), |acc, j| acc + &ginv[i][j] * &f[j])).collect()
        };
        let products: Vec<Vec<Vec<Q>>> =
            kept.iter().map(|&i| kept.iter().map(|&j| project(&basis[i].mul(&basis[j]))).collect()).collect();
        let unit = project(&CohClass::unit(&ambient));
        let names = kept.iter().map(|&i| ambient.names()[i].clone()).collect();
        let degs = kept.iter().map(|&i| degrees[i]).collect();
        let ring = Arc::new(CohRing::ambient(names, Some(degs), products, unit, pairing)?);
        let lifts = kept.iter().map(|&i| coh.basis_exponents()[i].clone()).collect();
        let dim_eff = t.dim() as i64 - t.convex_twist().len() as i64;
        Ok(StateSpace { ring, lifts, ambient_index: kept, ambient, twist_class, dim_eff })
    }

    pub fn ring(&self) -> &Arc<CohRing<Q>> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn lift(&self, i: usize) -> &[u32] {
        &self.lifts[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.ring.degrees().expect("graded basis")[i]
    }

    /// Complex dimension of the (twisted) target.
    pub fn target_dim(&self) -> i64 {
        self.dim_eff
    }

    pub fn ambient_index(&self, i: usize) -> usize {
        self.ambient_index[i]
    }

    /// The image of an ambient class.
    pub fn project(&self, c: &CohClass<Q>) -> Result<CohClass<Q>, OracleError> {
        let pairing = self.ring.pairing();
        let ginv = inverse(pairing)?;
        let n = self.dim();
        let f: Vec<Q> = (0..n)
            .map(|k| self.twist_class.mul(c).mul(&CohClass::basis(&self.ambient, self.ambient_index[k])).integral())
            .collect();
        let coords = (0..n).map(|i| (0..n).fold(Q::zero(), |acc, j| acc + &ginv[i][j] * &f[j])).collect();
        Ok(CohClass::new(self.ring.clone(), coords)?)
    }
}
