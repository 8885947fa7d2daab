//! Rational expressions in `q` and the A-model Yukawa coupling of a one-parameter CY3.

use wallx_ifunction::IAsymptotics;
use wallx_series::{invert_novikov_map, substitute_novikov, Field, Mono, NovikovSeries, Truncation, Q};
use wallx_target::ToricTarget;

use crate::error::WallError;
use crate::theory::Theory;

/// Parses an expression in `q` with `+ - * / ^`, integers and parentheses into a
/// one-variable power series through θ-degree `d`.
pub fn parse_series(text: &str, theta: i64, d: u32) -> Result<NovikovSeries<Q>, WallError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, theta, trunc: Truncation::theta(d) };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    theta: i64,
    trunc: Truncation,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> WallError {
        WallError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn constant(&self, c: Q) -> NovikovSeries<Q> {
        NovikovSeries::constant(vec![self.theta], 0, self.trunc, c)
    }

    fn expr(&mut self) -> Result<NovikovSeries<Q>, WallError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NovikovSeries<Q>, WallError> {
        let mut acc = self.power()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.power()?;
            acc = if op == b'*' {
                acc.mul(&rhs)
            } else {
                let inv = rhs.invert().map_err(|_| WallError::Parse {
                    pos: at,
                    msg: "division by a series without constant term".into(),
                })?;
                acc.mul(&inv)
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<NovikovSeries<Q>, WallError> {
        let base = self.unary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.integer()?;
        let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
        let base = if neg {
            base.invert().map_err(|_| self.error("negative power of a non-invertible series"))?
        } else {
            base
        };
        Ok(base.pow(e))
    }

    fn unary(&mut self) -> Result<NovikovSeries<Q>, WallError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<NovikovSeries<Q>, WallError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(NovikovSeries::monomial(vec![self.theta], 0, self.trunc, Mono::q(vec![1], 0), Q::from_i64(1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.constant(Q::from_integer(n.into())))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<u64, WallError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| WallError::Parse { pos: start, msg: "integer out of range".into() })
    }
}

/// `∫ p³` on the state space of a one-parameter target.
pub fn classical_triple(theory: &Theory, coh: &wallx_target::AmbientCohomology) -> Result<Q, WallError> {
    let p = theory.project(&coh.p(0))?;
    Ok(p.pow(3).integral())
}

/// `K(Q) = Y(q) I0(q)^{-2} (1 + q d/dq g(q))^{-3}` at `q = q(Q)`, with `log Q = log q + g`.
pub fn yukawa_cy3(
    t: &ToricTarget,
    theory: &Theory,
    asym: &IAsymptotics,
    classical: &Q,
    bmodel: &NovikovSeries<Q>,
) -> Result<NovikovSeries<Q>, WallError> {
    if t.rank() != 1 || theory.space().target_dim() != 3 || t.grading(&[1]).twisted_index != 0 {
        return Err(WallError::Unsupported(
            "the Yukawa coupling is computed for one-parameter Calabi-Yau threefolds".into(),
        ));
    }
    let trunc = asym.i0.truncation();
    let i0_inv = asym.i0.invert()?;
    let g = asym.f[0].mul(&i0_inv);
    let mut jac = NovikovSeries::constant(t.theta().to_vec(), 0, trunc, Q::from_i64(1));
    for (m, c) in g.iter() {
        jac.add_term(m.clone(), c * Q::from_integer(m.beta[0].into()));
    }
    let factor = jac.invert()?.pow(3);
    let y = bmodel.truncate(trunc);
    let k_q = y.mul(&i0_inv).mul(&i0_inv).mul(&factor);
    let h = invert_novikov_map(&[g])?;
    let k = substitute_novikov(&k_q, &h)?;
    match k.get(&Mono::one(1, 0)) {
        Some(c) if c == classical => Ok(k),
        other => Err(WallError::Inconsistent(format!(
            "constant term {} differs from the classical triple product {classical}",
            other.map(|c| c.to_string()).unwrap_or_else(|| "0".into())
        ))),
    }
}
