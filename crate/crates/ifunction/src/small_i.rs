//! Closed-form small I-functions at `t = 0`.

use std::sync::Arc;

use wallx_series::{CohClass, CohRing, Field, Mono, Truncation, ZFrac, ZSeries, Q};
use wallx_target::equivariant::fixed_point_ring;
use wallx_target::{AmbientCohomology, ToricTarget};

use crate::error::IError;
use crate::factors::{coordinate_factors, factors, Factors, Source};
use crate::laurent::ClassLaurent;

/// A small I-function together with how it was computed.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallIFunction<F: Field> {
    pub series: ZSeries<CohClass<F>>,
    pub equivariant: bool,
    pub twisted: bool,
}

impl<F: Field> SmallIFunction<F> {
    pub fn ring(&self) -> Option<&Arc<CohRing<F>>> {
        self.series.entries().next().map(|(_, _, c)| c.ring())
    }

    /// The coefficient of `q^β z^e`.
    pub fn coefficient(&self, beta: &[i64], e: i32) -> Option<&CohClass<F>> {
        self.series.get(&Mono::q(beta.to_vec(), 0), e)
    }
}

/// Ambient classes of the divisors and twist bundles.
struct AmbientClasses {
    divisor: Vec<CohClass<Q>>,
    convex: Vec<CohClass<Q>>,
    concave: Vec<CohClass<Q>>,
}

impl AmbientClasses {
    fn new(t: &ToricTarget, coh: &AmbientCohomology) -> Self {
        let cls = |v: &[Vec<i64>]| v.iter().map(|x| coh.character_class(x)).collect();
        let weights: Vec<Vec<i64>> = (0..t.n_coords()).map(|i| t.weight(i).to_vec()).collect();
        AmbientClasses { divisor: cls(&weights), convex: cls(t.convex_twist()), concave: cls(t.concave_twist()) }
    }

    fn get(&self, s: Source) -> &CohClass<Q> {
        match s {
            Source::Divisor(i) => &self.divisor[i],
            Source::Convex(a) => &self.convex[a],
            Source::Concave(a) => &self.concave[a],
        }
    }

    fn evaluate(&self, ring: &Arc<CohRing<Q>>, f: &Factors) -> ClassLaurent {
        let mut acc = ClassLaurent::one(ring);
        for &(s, m) in &f.numerator {
            acc = acc.mul(&ClassLaurent::linear(self.get(s), m));
            if acc.is_zero() {
                return acc;
            }
        }
        for &(s, m) in &f.denominator {
            acc = acc.mul(&ClassLaurent::inverse_linear(self.get(s), m));
        }
        acc
    }
}

/// The `q^β` coefficient as a Laurent polynomial with ambient class values.
pub fn ambient_coefficient(t: &ToricTarget, coh: &AmbientCohomology, beta: &[i64]) -> Result<ClassLaurent, IError> {
    let f = factors(t, beta)?;
    Ok(AmbientClasses::new(t, coh).evaluate(coh.ring(), &f))
}

/// Non-equivariant small I-function, summed over effective classes.
pub fn small_i(t: &ToricTarget, coh: &AmbientCohomology, trunc: Truncation) -> Result<SmallIFunction<Q>, IError> {
    let classes = AmbientClasses::new(t, coh);
    let mut series = ZSeries::new(t.theta().to_vec(), 0, trunc);
    for beta in t.effective_classes(trunc.max_theta_degree) {
        let c = classes.evaluate(coh.ring(), &factors(t, &beta)?);
        for (e, v) in c.terms() {
            series.add_term(Mono::q(beta.clone(), 0), *e, v.clone());
        }
    }
    Ok(SmallIFunction { series, equivariant: false, twisted: t.is_twisted() })
}

/// Coefficients over every integer class in the degree box, effective or not.
///
/// A class whose convex twist degree is negative is still accepted when its
/// coordinate factors already vanish, since the coefficient is then zero.
pub fn relaxed_coefficients(
    t: &ToricTarget,
    coh: &AmbientCohomology,
    d: u32,
) -> Result<Vec<(Vec<i64>, ClassLaurent)>, IError> {
    let classes = AmbientClasses::new(t, coh);
    let mut out = Vec::new();
    for beta in t.box_classes(d) {
        let c = match factors(t, &beta) {
            Ok(f) => classes.evaluate(coh.ring(), &f),
            Err(e) => {
                let c = classes.evaluate(coh.ring(), &coordinate_factors(t, &beta));
                if !c.is_zero() {
                    return Err(e);
                }
                c
            }
        };
        out.push((beta, c));
    }
    Ok(out)
}

/// Restrictions of the factor classes to one fixed point.
struct PointValues<F> {
    divisor: Vec<F>,
    convex: Vec<F>,
    concave: Vec<F>,
}

impl<F: Field> PointValues<F> {
    fn new(t: &ToricTarget, fp: usize, lam: &[F]) -> Self {
        PointValues {
            divisor: (0..t.n_coords()).map(|i| t.divisor_restriction(fp, i).eval(lam)).collect(),
            convex: (0..t.convex_twist().len()).map(|a| t.convex_restriction(fp, a).eval(lam)).collect(),
            concave: (0..t.concave_twist().len()).map(|a| t.concave_restriction(fp, a).eval(lam)).collect(),
        }
    }

    fn get(&self, s: Source) -> &F {
        match s {
            Source::Divisor(i) => &self.divisor[i],
            Source::Convex(a) => &self.convex[a],
            Source::Concave(a) => &self.concave[a],
        }
    }

    fn evaluate(&self, f: &Factors) -> Result<ZFrac<F>, IError> {
        let mut acc = ZFrac::one();
        for &(s, m) in &f.numerator {
            acc = acc.mul(&ZFrac::linear(F::from_i64(m), self.get(s).clone()));
            if acc.is_zero() {
                return Ok(acc);
            }
        }
        for &(s, m) in &f.denominator {
            acc = acc.mul(&ZFrac::inverse_linear(&F::from_i64(m), self.get(s))?);
        }
        Ok(acc)
    }
}

/// The `q^β` coefficient restricted to fixed point `fp`, as a rational function of `z`.
pub fn fixed_point_coefficient<F: Field>(
    t: &ToricTarget,
    fp: usize,
    lam: &[F],
    beta: &[i64],
) -> Result<ZFrac<F>, IError> {
    PointValues::new(t, fp, lam).evaluate(&factors(t, beta)?)
}

/// Equivariant small I-function in the fixed-point basis, expanded at `z = ∞`
/// down to the truncation's lower `z` bound.
pub fn small_i_equivariant<F: Field>(
    t: &ToricTarget,
    lam: &[F],
    twisted_pairing: bool,
    trunc: Truncation,
) -> Result<SmallIFunction<F>, IError> {
    let ring = fixed_point_ring(t, lam, twisted_pairing)?;
    let points: Vec<PointValues<F>> = (0..ring.dim()).map(|f| PointValues::new(t, f, lam)).collect();
    let mut series = ZSeries::new(t.theta().to_vec(), 0, trunc);
    for beta in t.effective_classes(trunc.max_theta_degree) {
        let f = factors(t, &beta)?;
        let mut rows: std::collections::BTreeMap<i32, Vec<F>> = std::collections::BTreeMap::new();
        for (k, p) in points.iter().enumerate() {
            for (e, c) in p.evaluate(&f)?.expand_at_infinity(trunc.z_min) {
                rows.entry(e).or_insert_with(|| vec![F::zero(); ring.dim()])[k] = c;
            }
        }
        for (e, coords) in rows {
            series.add_term(Mono::q(beta.clone(), 0), e, CohClass::new(ring.clone(), coords)?);
        }
    }
    Ok(SmallIFunction { series, equivariant: true, twisted: t.is_twisted() })
}
