//! Small helpers shared by the series manipulations.

use num_traits::Zero;
use wallx_series::field::factorial;
use wallx_series::{Coeff, CohClass, Field, Mono, Truncation, ZSeries, Q};

/// All `n`-component exponent vectors of total degree `k`.
pub fn multi_indices(n: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for x in (0..=left).rev() {
            cur[i] = x;
            go(i + 1, left - x, cur, out);
        }
    }
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    go(0, k, &mut vec![0; n], &mut out);
    out
}

/// `∏ m_i!` as a rational.
pub fn multi_factorial(m: &[u32]) -> Q {
    m.iter().fold(Q::from_i64(1), |acc, &x| acc * Q::from_integer(factorial(x)))
}

/// `(-1)^e`.
pub fn sign(e: i32) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::from_i64(1)
    } else {
        Q::from_i64(-1)
    }
}

/// `f(z) -> f(-z)`.
pub fn negate_z<V: Coeff + wallx_series::Module<Q>>(s: &ZSeries<V>) -> ZSeries<V> {
    let mut out = s.empty_like();
    for (m, e, v) in s.entries() {
        out.add_term(m.clone(), e, if e % 2 == 0 { v.clone() } else { v.scale(&Q::from_i64(-1)) });
    }
    out
}

fn in_range(m: &Mono, theta: &[i64], trunc: &Truncation) -> bool {
    m.theta_degree(theta) <= trunc.max_theta_degree as i64 && m.t_degree() <= trunc.max_t_degree
}

/// `Σ x_{m1,e1} ⋆ y_{m2,e2} q..t.. z^{e1+e2}` for a bilinear pairing `⋆`.
pub fn bilinear<A: Coeff, B: Coeff, C: Coeff>(x: &ZSeries<A>, y: &ZSeries<B>, f: impl Fn(&A, &B) -> C) -> ZSeries<C> {
    let trunc = x.truncation().meet(&y.truncation());
    let theta = x.theta().to_vec();
    let mut out = ZSeries::new(theta.clone(), x.n_t(), trunc);
    for (m1, r1) in x.rows().iter() {
        for (m2, r2) in y.rows().iter() {
            let m = m1.mul(m2);
            if !in_range(&m, &theta, &trunc) {
                continue;
            }
            for (e1, a) in &r1.c {
                for (e2, b) in &r2.c {
                    let e = e1 + e2;
                    if e < trunc.z_min || e > trunc.z_max {
                        continue;
                    }
                    let c = f(a, b);
                    if !c.is_zero_coeff() {
                        out.add_term(m.clone(), e, c);
                    }
                }
            }
        }
    }
    out
}

/// The Poincaré pairing of two class-valued series.
pub fn pair_series(x: &ZSeries<CohClass<Q>>, y: &ZSeries<CohClass<Q>>) -> ZSeries<Q> {
    bilinear(x, y, |a, b| a.pair(b))
}

/// Coordinate `i` of a class-valued series.
pub fn coordinate(s: &ZSeries<CohClass<Q>>, i: usize) -> ZSeries<Q> {
    let mut out = ZSeries::new(s.theta().to_vec(), s.n_t(), s.truncation());
    for (m, e, c) in s.entries() {
        if !c.coord(i).is_zero() {
            out.add_term(m.clone(), e, c.coord(i).clone());
        }
    }
    out
}
