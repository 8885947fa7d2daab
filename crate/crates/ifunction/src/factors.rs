//! The linear factors `X + m z` making up one hypergeometric coefficient.

use wallx_target::ToricTarget;

use crate::error::IError;

/// Which class a factor is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Divisor(usize),
    Convex(usize),
    Concave(usize),
}

/// `∏ (X + m z)` over `numerator` divided by `∏ (X + m z)` over `denominator`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factors {
    pub numerator: Vec<(Source, i64)>,
    pub denominator: Vec<(Source, i64)>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coordinate factors only; never fails.
pub fn coordinate_factors(t: &ToricTarget, beta: &[i64]) -> Factors {
    let mut f = Factors::default();
    for i in 0..t.n_coords() {
        let d = dot(beta, t.weight(i));
        if d >= 0 {
            f.denominator.extend((1..=d).map(|m| (Source::Divisor(i), m)));
        } else {
            f.numerator.extend((0..-d).map(|m| (Source::Divisor(i), -m)));
        }
    }
    f
}

/// All factors of the coefficient of `q^β`, twists included.
pub fn factors(t: &ToricTarget, beta: &[i64]) -> Result<Factors, IError> {
    let mut f = coordinate_factors(t, beta);
    for (a, eps) in t.convex_twist().iter().enumerate() {
        let d = dot(beta, eps);
        if d < 0 {
            return Err(IError::InvalidTwist { twist: a, degree: d, beta: beta.to_vec() });
        }
        f.numerator.extend((1..=d).map(|m| (Source::Convex(a), m)));
    }
    for (a, eps) in t.concave_twist().iter().enumerate() {
        let d = dot(beta, eps);
        if d > 0 {
            return Err(IError::InvalidConcave { twist: a, degree: d, beta: beta.to_vec() });
        }
        f.numerator.extend((d + 1..0).map(|m| (Source::Concave(a), m)));
    }
    Ok(f)
}
