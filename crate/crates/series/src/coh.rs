//! Cohomology-valued coefficients.
//!
//! A [`CohRing`] fixes a basis, its multiplication and its pairing. Two modes
//! exist: an ambient basis with a structure-constant table, and the
//! fixed-point basis of indicator classes where multiplication is
//! componentwise.

use std::fmt;
use std::sync::Arc;

use crate::error::SeriesError;
use crate::field::{Coeff, Field, Module};
use crate::linalg;

#[derive(Clone, Debug, PartialEq)]
pub enum RingMode<F> {
    /// `products[i][j][k]` is the coefficient of `γ_k` in `γ_i γ_j`.
    Ambient { products: Vec<Vec<Vec<F>>>, unit: Vec<F> },
    /// Indicator classes of fixed points.
    FixedPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohRing<F> {
    names: Vec<String>,
    /// Half the cohomological degree of each basis element, when homogeneous.
    degrees: Option<Vec<u32>>,
    mode: RingMode<F>,
    pairing: Vec<Vec<F>>,
    /// `dual[i]` holds the coordinates of `γ^i`.
    dual: Vec<Vec<F>>,
}

impl<F: Field> CohRing<F> {
    pub fn ambient(
        names: Vec<String>,
        degrees: Option<Vec<u32>>,
        products: Vec<Vec<Vec<F>>>,
        unit: Vec<F>,
        pairing: Vec<Vec<F>>,
    ) -> Result<Self, SeriesError> {
        let n = names.len();
        if products.len() != n || unit.len() != n || pairing.len() != n {
            return Err(SeriesError::Incompatible("ring data has inconsistent sizes".into()));
        }
        let dual = dual_of(&pairing)?;
        Ok(CohRing { names, degrees, mode: RingMode::Ambient { products, unit }, pairing, dual })
    }

    /// Fixed-point ring whose pairing is `Σ_μ a_μ b_μ weights[μ]`.
    pub fn fixed_point(names: Vec<String>, weights: Vec<F>) -> Result<Self, SeriesError> {
        let n = names.len();
        if weights.len() != n {
            return Err(SeriesError::Incompatible("one weight per fixed point".into()));
        }
        let pairing: Vec<Vec<F>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { weights[i].clone() } else { F::zero() }).collect()).collect();
        let dual = dual_of(&pairing)?;
        Ok(CohRing { names, degrees: None, mode: RingMode::FixedPoint, pairing, dual })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> Option<&[u32]> {
        self.degrees.as_deref()
    }

    pub fn mode(&self) -> &RingMode<F> {
        &self.mode
    }

    pub fn is_fixed_point(&self) -> bool {
        matches!(self.mode, RingMode::FixedPoint)
    }

    pub fn pairing(&self) -> &[Vec<F>] {
        &self.pairing
    }

    /// Coordinates of the unit class.
    pub fn unit_coords(&self) -> Vec<F> {
        match &self.mode {
            RingMode::Ambient { unit, .. } => unit.clone(),
            RingMode::FixedPoint => vec![F::one(); self.dim()],
        }
    }

    fn mul_coords(&self, a: &[F], b: &[F]) -> Vec<F> {
        match &self.mode {
            RingMode::FixedPoint => a.iter().zip(b).map(|(x, y)| x.times(y)).collect(),
            RingMode::Ambient { products, .. } => {
                let n = self.dim();
                let mut out = vec![F::zero(); n];
                for (i, ai) in a.iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for (j, bj) in b.iter().enumerate() {
                        if bj.is_zero() {
                            continue;
                        }
                        let c = ai.times(bj);
                        for (k, s) in products[i][j].iter().enumerate() {
                            if !s.is_zero() {
                                out[k] = out[k].plus(&c.times(s));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    fn pair_coords(&self, a: &[F], b: &[F]) -> F {
        let mut acc = F::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let p = &self.pairing[i][j];
                if !bj.is_zero() && !p.is_zero() {
                    acc = acc.plus(&ai.times(bj).times(p));
                }
            }
        }
        acc
    }
}

fn dual_of<F: Field>(pairing: &[Vec<F>]) -> Result<Vec<Vec<F>>, SeriesError> {
    let inv = linalg::inverse(pairing).map_err(|_| SeriesError::Incompatible("degenerate pairing".into()))?;
    // γ^i = Σ_j inv[j][i] γ_j
    let n = pairing.len();
    Ok((0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect())
}

/// An element of a [`CohRing`].
#[derive(Clone)]
pub struct CohClass<F> {
    ring: Arc<CohRing<F>>,
    coords: Vec<F>,
}

impl<F: Field> CohClass<F> {
    pub fn new(ring: Arc<CohRing<F>>, coords: Vec<F>) -> Result<Self, SeriesError> {
        if coords.len() != ring.dim() {
            return Err(SeriesError::Incompatible(format!(
                "{} coordinates for a basis of size {}",
                coords.len(),
                ring.dim()
            )));
        }
        Ok(CohClass { ring, coords })
    }

    pub fn zero(ring: &Arc<CohRing<F>>) -> Self {
        CohClass { ring: ring.clone(), coords: vec![F::zero(); ring.dim()] }
    }

    pub fn unit(ring: &Arc<CohRing<F>>) -> Self {
        CohClass { ring: ring.clone(), coords: ring.unit_coords() }
    }

    pub fn basis(ring: &Arc<CohRing<F>>, i: usize) -> Self {
        let mut c = vec![F::zero(); ring.dim()];
        c[i] = F::one();
        CohClass { ring: ring.clone(), coords: c }
    }

    /// The dual basis element `γ^i`.
    pub fn dual_basis(ring: &Arc<CohRing<F>>, i: usize) -> Self {
        CohClass { ring: ring.clone(), coords: ring.dual[i].clone() }
    }

    pub fn ring(&self) -> &Arc<CohRing<F>> {
        &self.ring
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &F {
        &self.coords[i]
    }

    pub fn mul(&self, o: &Self) -> Self {
        CohClass { ring: self.ring.clone(), coords: self.ring.mul_coords(&self.coords, &o.coords) }
    }

    pub fn add(&self, o: &Self) -> Self {
        CohClass {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg_ref())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CohClass::unit(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The pairing `∫ a b`.
    pub fn pair(&self, o: &Self) -> F {
        self.ring.pair_coords(&self.coords, &o.coords)
    }

    /// `∫ a`.
    pub fn integral(&self) -> F {
        self.ring.pair_coords(&self.coords, &self.ring.unit_coords())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// A scalar multiple of the unit, if it is one.
    pub fn unit_multiple(&self) -> Option<F> {
        let u = self.ring.unit_coords();
        let (i, ui) = u.iter().enumerate().find(|(_, x)| !x.is_zero())?;
        let c = self.coords[i].over(ui)?;
        let candidate: Vec<F> = u.iter().map(|x| x.times(&c)).collect();
        (candidate == self.coords).then_some(c)
    }

    pub fn map_scalars(&self, f: impl Fn(&F) -> F) -> Self {
        CohClass { ring: self.ring.clone(), coords: self.coords.iter().map(f).collect() }
    }
}

impl<F: Field> PartialEq for CohClass<F> {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords
    }
}

impl<F: Field> fmt::Debug for CohClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for CohClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(self.ring.names())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({c})*{n}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<F: Field> Coeff for CohClass<F> {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a = a.plus(b);
            }
        }
    }

    fn neg_ref(&self) -> Self {
        self.map_scalars(|c| c.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn compatible(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring
    }

    fn try_inverse(&self) -> Option<Self> {
        match self.ring.mode() {
            RingMode::FixedPoint => {
                let c: Option<Vec<F>> = self.coords.iter().map(|x| x.inverse()).collect();
                Some(CohClass { ring: self.ring.clone(), coords: c? })
            }
            RingMode::Ambient { .. } => {
                // Solve a * x = 1 through the multiplication matrix of a.
                let n = self.ring.dim();
                let cols: Vec<Vec<F>> = (0..n).map(|j| self.mul(&CohClass::basis(&self.ring, j)).coords).collect();
                let a: Vec<Vec<F>> = (0..n).map(|k| (0..n).map(|j| cols[j][k].clone()).collect()).collect();
                let x = linalg::solve(&a, &self.ring.unit_coords(), n).ok()?;
                Some(CohClass { ring: self.ring.clone(), coords: x })
            }
        }
    }
}

impl<F: Field> Module<F> for CohClass<F> {
    fn scale(&self, c: &F) -> Self {
        self.map_scalars(|x| x.times(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;
    use num_rational::BigRational;

    /// H*(P^1) = Q[H]/H^2 with ∫H = 1.
    fn p1() -> Arc<CohRing<BigRational>> {
        let z = q(0);
        let o = q(1);
        let products = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        let pairing = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
        Arc::new(
            CohRing::ambient(vec!["1".into(), "H".into()], Some(vec![0, 1]), products, vec![o, z], pairing).unwrap(),
        )
    }

    #[test]
    fn dual_basis_pairs_to_delta() {
        let r = p1();
        for i in 0..2 {
            for j in 0..2 {
                let v = CohClass::basis(&r, i).pair(&CohClass::dual_basis(&r, j));
                assert_eq!(v, if i == j { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn ambient_inverse() {
        let r = p1();
        let a = CohClass::new(r.clone(), vec![q(1), q(3)]).unwrap();
        let inv = a.try_inverse().unwrap();
        assert_eq!(inv.coords(), &[q(1), q(-3)]);
        assert!(CohClass::basis(&r, 1).try_inverse().is_none());
    }

    #[test]
    fn fixed_point_mode() {
        let r = Arc::new(CohRing::fixed_point(vec!["p1".into(), "p2".into()], vec![q(2), q(-2)]).unwrap());
        let a = CohClass::new(r.clone(), vec![q(3), q(5)]).unwrap();
        assert_eq!(a.mul(&a).coords(), &[q(9), q(25)]);
        assert_eq!(a.integral(), q(6 - 10));
        assert_eq!(CohClass::dual_basis(&r, 0).coords(), &[BigRational::new(1.into(), 2.into()), q(0)]);
    }
}
