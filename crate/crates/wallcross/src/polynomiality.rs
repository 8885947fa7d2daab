//! Fixed-point components of `S` and the regularity of `S_μ(q,z) S_μ(q e^{-zyL_θ}, -z)`.

use wallx_oracle::{Insertion, Localizer, Psi};
use wallx_series::field::factorial;
use wallx_series::{Field, Mono, NovikovSeries, Truncation, ZFrac, Q};

use crate::error::WallError;
use crate::util::multi_indices;

/// `S_μ = (1/W_μ) ⟨⟨φ_μ/(z-ψ), γ⟩⟩` at `t = Σ_j t_j c_j` for each fixed point,
/// where `γ` and the `c_j` are given by their fixed-point values.
pub fn equivariant_s_components<F: Field>(
    loc: &Localizer<F>,
    gamma: &[F],
    t_classes: &[Vec<F>],
    d: u32,
    m: u32,
) -> Result<Vec<NovikovSeries<ZFrac<F>>>, WallError> {
    let t = loc.target();
    let n_fixed = loc.n_fixed();
    let n_t = t_classes.len();
    let trunc = Truncation::theta(d).with_t(m);
    let classes: Vec<Vec<i64>> = t.effective_classes(d).into_iter().filter(|b| t.ltheta(b) > 0).collect();
    let mut out = Vec::with_capacity(n_fixed);
    for mu in 0..n_fixed {
        let mut s = NovikovSeries::new(t.theta().to_vec(), n_t, trunc);
        let w_inv = loc
            .pairing_weight(mu)
            .inverse()
            .ok_or_else(|| WallError::InvalidParameter(format!("twist weight vanishes at fixed point {mu}")))?;
        for k in 0..=m {
            for mi in multi_indices(n_t, k) {
                let fact =
                    mi.iter().fold(F::one(), |acc, &e| acc.times(&F::from_rational(&Q::from_integer(factorial(e)))));
                let inv_fact = fact.inverse().expect("nonzero factorial");
                // Degree zero: γ|_μ e^{t|_μ / z}.
                let c = mi
                    .iter()
                    .zip(t_classes)
                    .fold(gamma[mu].times(&inv_fact), |acc, (&e, cls)| acc.times(&cls[mu].powu(e)));
                s.add_term(Mono { beta: vec![0; t.rank()], t: mi.clone() }, ZFrac::monomial(-(k as i32), c));
                let mut ins =
                    vec![Insertion::point(n_fixed, mu, Psi::Descendant), Insertion::new(gamma.to_vec(), Psi::Power(0))];
                for (j, &e) in mi.iter().enumerate() {
                    for _ in 0..e {
                        ins.push(Insertion::new(t_classes[j].clone(), Psi::Power(0)));
                    }
                }
                for beta in &classes {
                    let b = loc.bracket(&ins, beta)?;
                    s.add_term(Mono { beta: beta.clone(), t: mi.clone() }, b.scale(&w_inv.times(&inv_fact)));
                }
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// A coefficient of `D(S_μ)` with a pole at `z = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyViolation {
    pub fixed_point: usize,
    pub mono: Mono,
    pub y_power: usize,
    pub z_exponents: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolyReport {
    pub violations: Vec<PolyViolation>,
    pub checked: usize,
}

impl PolyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The `y^j` coefficient of `S(q e^{-zyL_θ}, -z)`.
fn twisted_reflection<F: Field>(s: &NovikovSeries<ZFrac<F>>, j: usize) -> NovikovSeries<ZFrac<F>> {
    let fact = (1..=j as i64).fold(F::one(), |acc, x| acc.times(&F::from_i64(x)));
    let inv = fact.inverse().expect("nonzero factorial");
    let mut acc = s.empty_like();
    for (m, v) in s.iter() {
        let c = F::from_i64(-m.theta_degree(s.theta())).powu(j as u32).times(&inv);
        if !c.is_zero() {
            acc.add_term(m.clone(), v.negate_z().shift(j as i32).scale(&c));
        }
    }
    acc
}

/// Forms `e^{w_μ y} S_μ(q,z) S_μ(q e^{-zyL_θ},-z)` through `y^{y_order}` and
/// reports every coefficient that is singular at `z = 0`.
pub fn polynomiality_check<F: Field>(
    s: &[NovikovSeries<ZFrac<F>>],
    weights: Option<&[F]>,
    y_order: usize,
) -> PolyReport {
    let mut report = PolyReport::default();
    for (mu, sm) in s.iter().enumerate() {
        let parts: Vec<NovikovSeries<ZFrac<F>>> = (0..=y_order).map(|j| sm.mul(&twisted_reflection(sm, j))).collect();
        for j in 0..=y_order {
            let mut dj = parts[j].clone();
            if let Some(w) = weights {
                let mut fact = F::one();
                for i in 1..=j {
                    fact = fact.times(&F::from_i64(i as i64));
                    let c = w[mu].powu(i as u32).over(&fact).expect("nonzero factorial");
                    dj = dj.add(&parts[j - i].map(|v| v.scale(&c)));
                }
            }
            for (m, v) in dj.iter() {
                report.checked += 1;
                if !v.is_regular_at_zero() {
                    report.violations.push(PolyViolation {
                        fixed_point: mu,
                        mono: m.clone(),
                        y_power: j,
                        z_exponents: v.polar_part_at_zero().keys().copied().collect(),
                    });
                }
            }
        }
    }
    report
}
