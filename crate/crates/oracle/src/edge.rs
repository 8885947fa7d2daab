//! Contributions of multiple covers of torus-invariant curves.

use wallx_series::Field;
use wallx_target::ToricTarget;

use crate::error::OracleError;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Weights of `H^0` and `H^1` of a degree-`d` bundle on the cover, with fiber
/// weights `u` and `v` at the two ends and tangent weight `a` at the first end.
pub fn section_weights<F: Field>(u: &F, v: &F, d: i64, a: &F) -> Result<(Vec<F>, Vec<F>), OracleError> {
    if u.minus(&a.times(&F::from_i64(d))) != *v {
        return Err(OracleError::Degenerate("fiber weights do not match the degree".into()));
    }
    let w = |k: i64| u.minus(&a.times(&F::from_i64(k)));
    if d >= 0 {
        Ok(((0..=d).map(w).collect(), Vec::new()))
    } else {
        Ok((Vec::new(), (d + 1..0).map(w).collect()))
    }
}

fn product<F: Field>(v: &[F]) -> F {
    v.iter().fold(F::one(), |acc, x| acc.times(x))
}

/// Inverse Euler class of the moving deformations of the `n`-fold cover of the
/// orbit from `mu` to `nu`, twist factors included, divided by the cover automorphisms.
pub fn edge_factor<F: Field>(t: &ToricTarget, mu: usize, nu: usize, n: u32, lam: &[F]) -> Result<F, OracleError> {
    let orbit = t.orbit(mu, nu).ok_or_else(|| OracleError::Degenerate(format!("no orbit joins {mu} and {nu}")))?;
    let nn = F::from_i64(n as i64);
    let a = orbit.weight.eval(lam).over(&nn).ok_or_else(|| OracleError::Degenerate("zero cover degree".into()))?;
    if a.is_zero() {
        return Err(OracleError::Degenerate("orbit has zero tangent weight".into()));
    }
    let mut num = F::one();
    let mut den = F::one();
    let mut zeros = 0usize;
    for j in 0..t.n_coords() {
        let d = n as i64 * dot(&orbit.beta, t.weight(j));
        let u = t.divisor_restriction(mu, j).eval(lam);
        let v = t.divisor_restriction(nu, j).eval(lam);
        let (h0, h1) = section_weights(&u, &v, d, &a)?;
        for x in h0 {
            if x.is_zero() {
                zeros += 1;
            } else {
                den = den.times(&x);
            }
        }
        for x in h1 {
            if x.is_zero() {
                return Err(OracleError::Degenerate("zero obstruction weight".into()));
            }
            num = num.times(&x);
        }
    }
    if zeros != t.rank() + 1 {
        return Err(OracleError::Degenerate(format!("{zeros} trivial weights on the orbit {mu}-{nu}")));
    }
    for (k, eps) in t.convex_twist().iter().enumerate() {
        let d = n as i64 * dot(&orbit.beta, eps);
        let (h0, h1) =
            section_weights(&t.convex_restriction(mu, k).eval(lam), &t.convex_restriction(nu, k).eval(lam), d, &a)?;
        num = num.times(&product(&h0));
        den = den.times(&product(&h1));
    }
    for (k, eps) in t.concave_twist().iter().enumerate() {
        let d = n as i64 * dot(&orbit.beta, eps);
        let (h0, h1) =
            section_weights(&t.concave_restriction(mu, k).eval(lam), &t.concave_restriction(nu, k).eval(lam), d, &a)?;
        num = num.times(&product(&h1));
        den = den.times(&product(&h0));
    }
    num.over(&den.times(&nn)).ok_or_else(|| OracleError::Degenerate("vanishing twist weight".into()))
}

/// The coefficient `C_{μ,ν,n}` of the fixed-point recursion:
/// the edge factor times the inverse pairing weight at `mu`.
pub fn recursion_coefficient<F: Field>(
    t: &ToricTarget,
    mu: usize,
    nu: usize,
    n: u32,
    lam: &[F],
) -> Result<F, OracleError> {
    let e = edge_factor(t, mu, nu, n, lam)?;
    let w = pairing_weight(t, mu, lam)?;
    e.over(&w).ok_or_else(|| OracleError::Degenerate("zero pairing weight".into()))
}

/// `e(T_σ)` and the twist factor `∏ convex / ∏ concave` at a fixed point.
pub fn point_data<F: Field>(t: &ToricTarget, fp: usize, lam: &[F]) -> Result<(F, F), OracleError> {
    let euler = wallx_target::equivariant::tangent_euler(t, fp, lam);
    let tw = wallx_target::equivariant::twist_euler(t, fp, lam)?;
    Ok((euler, tw))
}

/// The localized pairing weight `Tw_σ / e(T_σ)`.
pub fn pairing_weight<F: Field>(t: &ToricTarget, fp: usize, lam: &[F]) -> Result<F, OracleError> {
    let (e, tw) = point_data(t, fp, lam)?;
    tw.over(&e).ok_or_else(|| OracleError::Degenerate("non-isolated fixed point".into()))
}
