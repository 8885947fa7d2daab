//! Descendant integrals over `M̄_{0,k}` and the vertex factors built from them.

use wallx_series::field::factorial;
use wallx_series::{Field, ZFrac, Q};

use crate::error::OracleError;

/// `∫_{M̄_{0,k}} ψ_1^{a_1}⋯ψ_k^{a_k}`, the multinomial `(k-3)! / ∏ a_i!` when the degrees balance.
pub fn psi_integral(a: &[u32]) -> Result<Q, OracleError> {
    let k = a.len();
    if k < 3 {
        return Err(OracleError::Unstable(k));
    }
    let total: u32 = a.iter().sum();
    if total as usize != k - 3 {
        return Ok(Q::from_i64(0));
    }
    Ok(a.iter().fold(Q::from_integer(factorial(total)), |acc, &x| acc / Q::from_integer(factorial(x))))
}

/// Descendant power at a marking: `ψ^a`, or the generating form `1/(z - ψ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Psi {
    Power(u32),
    Descendant,
}

/// `∫_{M̄_{0,val}} ∏_marks ψ^{a} / ∏_flags (ω_F - ψ_F)` with the usual conventions
/// for `val ≤ 2`; marking insertion values are multiplied in.
pub fn vertex_integral<F: Field>(flags: &[F], marks: &[(F, Psi)]) -> Result<ZFrac<F>, OracleError> {
    let value: F = marks.iter().fold(F::one(), |acc, (v, _)| acc.times(v));
    if value.is_zero() {
        return Ok(ZFrac::zero());
    }
    let val = flags.len() + marks.len();
    match (flags.len(), marks.len()) {
        (1, 0) => return Ok(ZFrac::constant(flags[0].clone())),
        (2, 0) => {
            let s = flags[0].plus(&flags[1]);
            let inv = s.inverse().ok_or_else(|| OracleError::Degenerate("opposite flag weights".into()))?;
            return Ok(ZFrac::constant(inv));
        }
        (1, 1) => {
            let w = &flags[0];
            return Ok(match marks[0].1 {
                Psi::Power(a) => ZFrac::constant(value.times(&w.powu(a)).times(&sign(a))),
                Psi::Descendant => ZFrac::inverse_linear(&F::one(), w)?.scale(&value),
            });
        }
        _ if val < 3 => return Err(OracleError::Unstable(val)),
        _ => {}
    }
    let fixed: u32 = marks.iter().map(|(_, p)| if let Psi::Power(a) = p { *a } else { 0 }).sum();
    let dim = (val - 3) as u32;
    if fixed > dim {
        return Ok(ZFrac::zero());
    }
    let free = dim - fixed;
    let has_desc = marks.iter().any(|(_, p)| *p == Psi::Descendant);
    let slots = flags.len() + usize::from(has_desc);
    let inv_flags: Vec<F> = flags
        .iter()
        .map(|w| w.inverse().ok_or_else(|| OracleError::Degenerate("zero flag weight".into())))
        .collect::<Result<_, _>>()?;
    let mut acc = ZFrac::zero();
    let mut parts = vec![0u32; slots];
    compositions(free, &mut parts, 0, &mut |parts| {
        let mut exps: Vec<u32> =
            marks.iter().filter_map(|(_, p)| if let Psi::Power(a) = p { Some(*a) } else { None }).collect();
        exps.extend_from_slice(parts);
        let c = psi_integral(&exps).expect("stable vertex");
        let mut coeff = value.times(&F::from_rational(&c));
        for (w, b) in inv_flags.iter().zip(parts) {
            coeff = coeff.times(&w.powu(b + 1));
        }
        let term =
            if has_desc { ZFrac::monomial(-(parts[slots - 1] as i32) - 1, coeff) } else { ZFrac::constant(coeff) };
        acc = acc.add(&term);
    });
    Ok(acc)
}

fn sign<F: Field>(a: u32) -> F {
    if a.is_multiple_of(2) {
        F::one()
    } else {
        F::from_i64(-1)
    }
}

fn compositions(total: u32, parts: &mut Vec<u32>, i: usize, f: &mut impl FnMut(&[u32])) {
    if parts.is_empty() {
        if total == 0 {
            f(parts);
        }
        return;
    }
    if i + 1 == parts.len() {
        parts[i] = total;
        f(parts);
        return;
    }
    for x in 0..=total {
        parts[i] = x;
        compositions(total - x, parts, i + 1, f);
    }
}
