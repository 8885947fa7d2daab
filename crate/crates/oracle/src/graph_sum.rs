//! Fixed-point sums over decorated trees at a chosen value of the torus parameters.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use wallx_series::{Field, ZFrac};
use wallx_target::ToricTarget;

use crate::edge::edge_factor;
use crate::error::OracleError;
use crate::psi::{vertex_integral, Psi};
use crate::trees::{enumerate_trees, DecoratedTree};

/// A marking: its class as restrictions to the fixed points, and its descendant.
#[derive(Clone, Debug, PartialEq)]
pub struct Insertion<F> {
    pub values: Vec<F>,
    pub psi: Psi,
}

impl<F: Field> Insertion<F> {
    pub fn new(values: Vec<F>, psi: Psi) -> Self {
        Insertion { values, psi }
    }

    /// The class of a single fixed point, normalized to restrict to 1 there.
    pub fn point(n_fixed: usize, fp: usize, psi: Psi) -> Self {
        let values = (0..n_fixed).map(|i| if i == fp { F::one() } else { F::zero() }).collect();
        Insertion { values, psi }
    }
}

type TreeKey = (Vec<i64>, usize);

/// Equivariant localization at fixed parameter values, with cached edge and tree data.
pub struct Localizer<'a, F> {
    t: &'a ToricTarget,
    lam: Vec<F>,
    euler: Vec<F>,
    twist: Vec<F>,
    edges: Mutex<HashMap<(usize, usize, u32), F>>,
    trees: Mutex<HashMap<TreeKey, Arc<Vec<DecoratedTree>>>>,
}

impl<'a, F: Field> Localizer<'a, F> {
    pub fn new(t: &'a ToricTarget, lam: Vec<F>) -> Result<Self, OracleError> {
        let n_fixed = t.fixed_points()?.len();
        let mut euler = Vec::with_capacity(n_fixed);
        let mut twist = Vec::with_capacity(n_fixed);
        for fp in 0..n_fixed {
            let e = wallx_target::equivariant::tangent_euler(t, fp, &lam);
            if e.is_zero() {
                return Err(OracleError::Degenerate(format!("tangent weight vanishes at fixed point {fp}")));
            }
            euler.push(e);
            let tw = wallx_target::equivariant::twist_euler(t, fp, &lam)
                .map_err(|e| OracleError::Degenerate(e.to_string()))?;
            twist.push(tw);
        }
        Ok(Localizer { t, lam, euler, twist, edges: Mutex::default(), trees: Mutex::default() })
    }

    pub fn target(&self) -> &ToricTarget {
        self.t
    }

    pub fn params(&self) -> &[F] {
        &self.lam
    }

    pub fn n_fixed(&self) -> usize {
        self.euler.len()
    }

    pub fn euler(&self, fp: usize) -> &F {
        &self.euler[fp]
    }

    pub fn twist(&self, fp: usize) -> &F {
        &self.twist[fp]
    }

    /// The localized pairing weight `Tw_σ / e(T_σ)`.
    pub fn pairing_weight(&self, fp: usize) -> F {
        self.twist[fp].over(&self.euler[fp]).expect("nonzero tangent euler class")
    }

    /// Restrictions of the monomial `∏ p_k^{e_k}` to each fixed point.
    pub fn monomial_values(&self, exps: &[u32]) -> Vec<F> {
        (0..self.n_fixed())
            .map(|fp| {
                exps.iter()
                    .enumerate()
                    .fold(F::one(), |acc, (k, &e)| acc.times(&self.t.p_restriction(fp, k).eval(&self.lam).powu(e)))
            })
            .collect()
    }

    /// Tangent weight at `fp` of the `n`-fold cover of the orbit towards `other`.
    pub fn flag_weight(&self, fp: usize, other: usize, n: u32) -> Result<F, OracleError> {
        let o = self
            .t
            .orbit(fp, other)
            .ok_or_else(|| OracleError::Degenerate(format!("no orbit joins {fp} and {other}")))?;
        o.weight
            .eval(&self.lam)
            .over(&F::from_i64(n as i64))
            .ok_or_else(|| OracleError::Degenerate("zero cover degree".into()))
    }

    pub fn edge(&self, mu: usize, nu: usize, n: u32) -> Result<F, OracleError> {
        let key = (mu.min(nu), mu.max(nu), n);
        if let Some(v) = self.edges.lock().expect("edge cache").get(&key) {
            return Ok(v.clone());
        }
        let v = edge_factor(self.t, key.0, key.1, n, &self.lam)?;
        self.edges.lock().expect("edge cache").insert(key, v.clone());
        Ok(v)
    }

    pub fn trees(&self, beta: &[i64], n_marks: usize) -> Arc<Vec<DecoratedTree>> {
        let key = (beta.to_vec(), n_marks);
        if let Some(v) = self.trees.lock().expect("tree cache").get(&key) {
            return v.clone();
        }
        let v = Arc::new(enumerate_trees(self.t, beta, n_marks));
        self.trees.lock().expect("tree cache").insert(key, v.clone());
        v
    }

    /// `∫_{[M̄_{0,k}(β)]} ∏ ev_i^*(γ_i) ψ_i^{a_i}` including the twist, as a function of `z`
    /// when one marking carries `1/(z - ψ)`.
    pub fn bracket(&self, ins: &[Insertion<F>], beta: &[i64]) -> Result<ZFrac<F>, OracleError> {
        if ins.iter().filter(|i| i.psi == Psi::Descendant).count() > 1 {
            return Err(OracleError::Unsupported("more than one descendant marking".into()));
        }
        if beta.iter().all(|&b| b == 0) && ins.len() < 3 {
            return Err(OracleError::Unstable(ins.len()));
        }
        let trees = self.trees(beta, ins.len());
        trees.par_iter().map(|tree| self.contribution(tree, ins)).try_reduce(ZFrac::zero, |a, b| Ok(a.add(&b)))
    }

    /// The contribution of one fixed locus.
    pub fn contribution(&self, tree: &DecoratedTree, ins: &[Insertion<F>]) -> Result<ZFrac<F>, OracleError> {
        let mut scalar = F::from_i64(tree.automorphisms as i64).inverse().expect("positive order");
        for &(a, b, n) in &tree.edges {
            scalar = scalar.times(&self.edge(tree.fixed[a], tree.fixed[b], n)?);
        }
        let mut acc = ZFrac::constant(scalar);
        for (v, &fp) in tree.fixed.iter().enumerate() {
            let flags = tree.flags(v);
            let omegas =
                flags.iter().map(|&(o, n)| self.flag_weight(fp, tree.fixed[o], n)).collect::<Result<Vec<F>, _>>()?;
            let marks: Vec<(F, Psi)> =
                tree.marks_at(v).into_iter().map(|m| (ins[m].values[fp].clone(), ins[m].psi)).collect();
            let vi = vertex_integral(&omegas, &marks)?;
            if vi.is_zero() {
                return Ok(ZFrac::zero());
            }
            let k = flags.len() as i32;
            let e = self.euler[fp].powi(k - 1).expect("nonzero tangent euler class");
            let tw = self.twist[fp]
                .powi(1 - k)
                .ok_or_else(|| OracleError::Degenerate(format!("twist weight vanishes at fixed point {fp}")))?;
            acc = acc.mul(&vi.scale(&e.times(&tw)));
        }
        Ok(acc)
    }

    /// The restriction to `fp` of the `q^β` coefficient of the small J-function,
    /// `(1/W_σ) ⟨δ_σ / (z (z - ψ))⟩_{0,1,β}`.
    pub fn j_restriction(&self, fp: usize, beta: &[i64]) -> Result<ZFrac<F>, OracleError> {
        let b = self.bracket(&[Insertion::point(self.n_fixed(), fp, Psi::Descendant)], beta)?;
        let w = self.pairing_weight(fp).inverse().ok_or_else(|| OracleError::Degenerate("zero twist weight".into()))?;
        Ok(b.shift(-1).scale(&w))
    }
}
