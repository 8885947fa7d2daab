//! Sources of genus-zero bracket values indexed by the state-space basis.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;
use wallx_ifunction::SmallIFunction;
use wallx_oracle::{psi_integral, GraphSumOracle};
use wallx_series::{CohClass, Mono, ZSeries, Q};
use wallx_target::{AmbientCohomology, Epsilon, ToricTarget};

use crate::error::WallError;
use crate::theory::Theory;

/// A marking: basis index and power of ψ.
pub type Marking = (usize, u32);

/// Sorted markings and curve class, the cache and table key of a bracket.
pub type BracketKey = (Vec<Marking>, Vec<i64>);

pub fn bracket_key(ins: &[Marking], beta: &[i64]) -> BracketKey {
    let mut m = ins.to_vec();
    m.sort_unstable();
    (m, beta.to_vec())
}

/// The range of brackets a provider can answer.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub epsilon: Epsilon,
    pub max_points: Option<usize>,
    pub max_degree: Option<i64>,
}

impl Envelope {
    pub fn covers(&self, k: usize, degree: i64) -> bool {
        self.max_points.is_none_or(|m| k <= m) && self.max_degree.is_none_or(|d| degree <= d)
    }
}

pub trait InvariantProvider: Send + Sync {
    fn theory(&self) -> &Theory;

    fn envelope(&self) -> Envelope;

    /// `⟨γ_{i_1} ψ^{a_1}, …, γ_{i_k} ψ^{a_k}⟩_{0,k,β}`.
    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError>;

    fn check_envelope(&self, k: usize, beta: &[i64]) -> Result<(), WallError> {
        let d = self.theory().ltheta(beta);
        if self.envelope().covers(k, d) {
            Ok(())
        } else {
            Err(WallError::OutOfEnvelope(format!("{k} markings in class {beta:?} (degree {d})")))
        }
    }
}

/// Degree-zero brackets: `∫_{M̄_{0,k}} ∏ψ^{a_i} · ∫ ∏γ_i`.
pub fn classical_bracket(theory: &Theory, ins: &[Marking]) -> Result<Q, WallError> {
    if ins.len() < 3 {
        return Ok(Q::zero());
    }
    let psi: Vec<u32> = ins.iter().map(|&(_, a)| a).collect();
    let c = psi_integral(&psi)?;
    if c.is_zero() {
        return Ok(c);
    }
    let ring = theory.ring();
    let prod = ins.iter().fold(CohClass::unit(ring), |acc, &(i, _)| acc.mul(&CohClass::basis(ring, i)));
    Ok(c * prod.integral())
}

fn is_zero_class(beta: &[i64]) -> bool {
    beta.iter().all(|&b| b == 0)
}

/// Stable-map invariants from the localization oracle.
pub struct OracleProvider<'a> {
    theory: Theory,
    oracle: GraphSumOracle<'a>,
    cache: Mutex<HashMap<BracketKey, Q>>,
}

impl<'a> OracleProvider<'a> {
    pub fn new(t: &'a ToricTarget, coh: &AmbientCohomology, bound: i64) -> Result<Self, WallError> {
        Ok(OracleProvider {
            theory: Theory::new(t, coh)?,
            oracle: GraphSumOracle::new(t, coh)?.with_bound(bound),
            cache: Mutex::default(),
        })
    }

    pub fn oracle(&self) -> &GraphSumOracle<'a> {
        &self.oracle
    }
}

impl InvariantProvider for OracleProvider<'_> {
    fn theory(&self) -> &Theory {
        &self.theory
    }

    fn envelope(&self) -> Envelope {
        Envelope { epsilon: Epsilon::Infinity, max_points: None, max_degree: Some(self.oracle.bound()) }
    }

    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError> {
        self.check_envelope(ins.len(), beta)?;
        if is_zero_class(beta) {
            return classical_bracket(&self.theory, ins);
        }
        let key = bracket_key(ins, beta);
        if let Some(v) = self.cache.lock().expect("bracket cache").get(&key) {
            return Ok(v.clone());
        }
        let v = self.oracle.invariant(&key.0, beta)?;
        self.cache.lock().expect("bracket cache").insert(key, v.clone());
        Ok(v)
    }
}

/// User-supplied values; absent entries are zero.
pub struct TableProvider {
    theory: Theory,
    envelope: Envelope,
    table: HashMap<BracketKey, Q>,
}

impl TableProvider {
    pub fn new(theory: Theory, envelope: Envelope) -> Self {
        TableProvider { theory, envelope, table: HashMap::new() }
    }

    pub fn insert(&mut self, ins: &[Marking], beta: &[i64], v: Q) {
        self.table.insert(bracket_key(ins, beta), v);
    }
}

impl InvariantProvider for TableProvider {
    fn theory(&self) -> &Theory {
        &self.theory
    }

    fn envelope(&self) -> Envelope {
        self.envelope.clone()
    }

    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError> {
        self.check_envelope(ins.len(), beta)?;
        if is_zero_class(beta) {
            return classical_bracket(&self.theory, ins);
        }
        Ok(self.table.get(&bracket_key(ins, beta)).cloned().unwrap_or_else(Q::zero))
    }
}

/// Classical brackets only: every `β ≠ 0` value is zero.
pub struct ZeroProvider {
    theory: Theory,
    epsilon: Epsilon,
}

impl ZeroProvider {
    pub fn new(theory: Theory, epsilon: Epsilon) -> Self {
        ZeroProvider { theory, epsilon }
    }
}

impl InvariantProvider for ZeroProvider {
    fn theory(&self) -> &Theory {
        &self.theory
    }

    fn envelope(&self) -> Envelope {
        Envelope { epsilon: self.epsilon.clone(), max_points: None, max_degree: None }
    }

    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError> {
        if is_zero_class(beta) {
            return classical_bracket(&self.theory, ins);
        }
        Ok(Q::zero())
    }
}

/// Two-point brackets with a unit insertion read off `I/I₀`, for `ε = 0+`.
///
/// Uses `S(1) = I/I₀` at `t = 0`, valid for semi-positive targets.
pub struct IDerivedProvider {
    theory: Theory,
    normalized: ZSeries<CohClass<Q>>,
    max_degree: i64,
}

impl IDerivedProvider {
    pub fn new(theory: Theory, i: &SmallIFunction<Q>, i0: &wallx_series::NovikovSeries<Q>) -> Result<Self, WallError> {
        if !theory.target().is_semi_positive() {
            return Err(WallError::Unsupported("I-derived brackets need a semi-positive target".into()));
        }
        let inv = i0.invert()?;
        let mut projected = ZSeries::new(theory.theta().to_vec(), 0, i.series.truncation());
        for (m, e, c) in i.series.entries() {
            projected.add_term(m.clone(), e, theory.project(c)?);
        }
        let normalized = projected.mul_scalar_series(&inv);
        let max_degree = i.series.truncation().max_theta_degree as i64;
        Ok(IDerivedProvider { theory, normalized, max_degree })
    }
}

impl InvariantProvider for IDerivedProvider {
    fn theory(&self) -> &Theory {
        &self.theory
    }

    fn envelope(&self) -> Envelope {
        Envelope { epsilon: Epsilon::ZeroPlus, max_points: Some(2), max_degree: Some(self.max_degree) }
    }

    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError> {
        self.check_envelope(ins.len(), beta)?;
        if is_zero_class(beta) {
            return classical_bracket(&self.theory, ins);
        }
        let unit = self.theory.unit_index();
        let other = match ins {
            [x, y] if *y == (unit, 0) => *x,
            [x, y] if *x == (unit, 0) => *y,
            _ => return Err(WallError::OutOfEnvelope(format!("{ins:?} is not a two-point bracket with a unit"))),
        };
        let (l, a) = other;
        let Some(c) = self.normalized.get(&Mono::q(beta.to_vec(), 0), -(a as i32) - 1) else {
            return Ok(Q::zero());
        };
        let g = self.theory.ring().pairing();
        Ok((0..self.theory.dim()).fold(Q::zero(), |acc, i| acc + &g[l][i] * c.coord(i)))
    }
}

/// Flips the sign of one bracket of an inner provider.
pub struct SignFlip<P> {
    inner: P,
    key: BracketKey,
}

impl<P: InvariantProvider> SignFlip<P> {
    pub fn new(inner: P, ins: &[Marking], beta: &[i64]) -> Self {
        SignFlip { inner, key: bracket_key(ins, beta) }
    }
}

impl<P: InvariantProvider> InvariantProvider for SignFlip<P> {
    fn theory(&self) -> &Theory {
        self.inner.theory()
    }

    fn envelope(&self) -> Envelope {
        self.inner.envelope()
    }

    fn bracket(&self, ins: &[Marking], beta: &[i64]) -> Result<Q, WallError> {
        let v = self.inner.bracket(ins, beta)?;
        Ok(if bracket_key(ins, beta) == self.key { -v } else { v })
    }
}
