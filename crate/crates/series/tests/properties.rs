use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use wallx_series::field::{q, qf};
use wallx_series::json::{
    coh_zseries_from_json, coh_zseries_to_json, scalar_novikov_from_json, scalar_novikov_to_json,
};
use wallx_series::poly::{gcd, Poly};
use wallx_series::*;

const THETA: [i64; 2] = [1, 1];

fn trunc() -> Truncation {
    Truncation::theta(3).with_t(2).with_z(-6, 6)
}

fn series_strategy(with_constant: bool) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(((0i64..3, 0i64..3, 0u32..3), -5i64..6, 1i64..4), 0..7).prop_map(move |terms| {
        let mut s = QSeries::new(THETA.to_vec(), 1, trunc());
        for ((b1, b2, t), n, d) in terms {
            let m = Mono { beta: vec![b1, b2], t: vec![t] };
            if !with_constant && m.is_one() {
                continue;
            }
            s.add_term(m, qf(n, d));
        }
        s
    })
}

fn unit_series() -> impl Strategy<Value = QSeries> {
    (series_strategy(false), 1i64..5).prop_map(|(s, c)| s.add(&QSeries::constant(THETA.to_vec(), 1, trunc(), q(c))))
}

fn transformation() -> impl Strategy<Value = QSeries> {
    series_strategy(false).prop_map(|s| {
        let h = s.filter(|m| m.beta.iter().any(|&b| b > 0));
        QSeries::t_var(THETA.to_vec(), 1, trunc(), 0).add(&h)
    })
}

fn novikov_shift() -> impl Strategy<Value = QSeries> {
    series_strategy(false).prop_map(|s| s.filter(|m| m.beta.iter().any(|&b| b > 0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in series_strategy(true), b in series_strategy(true), c in series_strategy(true)) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series()) {
        let inv = a.invert().unwrap();
        let one = QSeries::one(THETA.to_vec(), 1, trunc());
        prop_assert_eq!(a.mul(&inv), one.clone());
        prop_assert_eq!(inv.mul(&a), one);
    }

    #[test]
    fn substitution_round_trip(a in series_strategy(true), tau in transformation()) {
        let tau = tau.filter(|m| m.t_degree() > 0);
        let inv = invert_transformation(std::slice::from_ref(&tau)).unwrap();
        let there = substitute_t(&a, std::slice::from_ref(&tau)).unwrap();
        prop_assert_eq!(substitute_t(&there, &inv).unwrap(), a);
    }

    #[test]
    fn lowering_substitution_keeps_exact_coefficients(a in series_strategy(true), tau in transformation()) {
        // Deep t order so that the round trip keeps some t-dependence.
        let deep = Truncation::theta(3).with_t(9).with_z(-6, 6);
        let a = a.truncate(deep);
        let tau = tau.truncate(deep);
        let inv = invert_transformation(std::slice::from_ref(&tau)).unwrap();
        let there = substitute_t(&a, std::slice::from_ref(&tau)).unwrap();
        let back = substitute_t(&there, &inv).unwrap();
        prop_assert!(back.truncation().max_t_degree <= deep.max_t_degree);
        prop_assert_eq!(back.clone(), a.truncate(back.truncation()));
    }

    #[test]
    fn novikov_round_trip(a in series_strategy(true), g1 in novikov_shift(), g2 in novikov_shift()) {
        let g = vec![g1, g2];
        let h = invert_novikov_map(&g).unwrap();
        let there = substitute_novikov(&a, &g).unwrap();
        prop_assert_eq!(substitute_novikov(&there, &h).unwrap(), a);
    }

    #[test]
    fn json_round_trip(a in series_strategy(true)) {
        let v = scalar_novikov_to_json(&a);
        let back: QSeries = scalar_novikov_from_json(&v).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(serde_json::to_string(&scalar_novikov_to_json(&back)).unwrap(), serde_json::to_string(&v).unwrap());
    }

    #[test]
    fn ratfunc_field_axioms(c in prop::collection::vec((-4i64..5, 0u32..3, 0u32..3), 1..5), d in prop::collection::vec((-4i64..5, 0u32..3, 0u32..3), 1..4)) {
        let mk = |terms: &Vec<(i64, u32, u32)>| Poly::from_terms(terms.iter().map(|(k, a, b)| (vec![*a, *b], q(*k))));
        let (n, m) = (mk(&c), mk(&d));
        prop_assume!(!n.is_zero() && !m.is_zero());
        let x = RatFunc::new(n.clone(), m.clone()).unwrap();
        prop_assert_eq!(x.clone() * x.inverse().unwrap(), RatFunc::one());
        let g = gcd(&n, &m);
        prop_assert!(n.div_exact(&g).is_some() && m.div_exact(&g).is_some());
        let y = RatFunc::new(n.mul(&m), m.mul(&m)).unwrap();
        prop_assert_eq!(y, RatFunc::new(n, m).unwrap());
    }

    #[test]
    fn zfrac_product_matches_pointwise(a in -5i64..6, b in -5i64..6, k in -2i32..3) {
        prop_assume!(a != 0 && b != 0);
        let f = ZFrac::pole(q(a), 2, q(1)).mul(&ZFrac::pole(q(b), 1, q(3))).mul(&ZFrac::monomial(k, q(1)));
        for x in [7i64, 11, -13] {
            let x = qf(x, 3);
            let expect = q(3) * x.pow(k) / ((x.clone() - q(a)) * (x.clone() - q(a)) * (x.clone() - q(b)));
            prop_assert_eq!(f.eval(&x).unwrap(), expect);
        }
    }
}

fn p1_ring() -> Arc<CohRing<BigRational>> {
    let (z, o) = (q(0), q(1));
    let products = vec![
        vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
    ];
    let pairing = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
    Arc::new(CohRing::ambient(vec!["1".into(), "H".into()], Some(vec![0, 1]), products, vec![o, z], pairing).unwrap())
}

/// `Σ_d q^d / ∏_{m=1}^d (H + m z)^2` on P^1, expanded with `H^2 = 0`.
fn p1_i(sign: i64) -> ZSeries<CohClass<BigRational>> {
    let r = p1_ring();
    let t = Truncation::theta(1).with_z(-8, 2);
    let mut s = ZSeries::new(vec![1], 0, t);
    s.add_term(Mono::q(vec![0], 0), 0, CohClass::unit(&r));
    // 1/(H + s z)^2 = (s z)^{-2} - 2 H (s z)^{-3}
    let sz = q(sign);
    s.add_term(Mono::q(vec![1], 0), -2, CohClass::unit(&r).scale(&(q(1) / (sz.clone() * sz.clone()))));
    s.add_term(Mono::q(vec![1], 0), -3, CohClass::basis(&r, 1).scale(&(q(-2) / (sz.clone() * sz.clone() * sz))));
    s
}

#[test]
fn p1_convolution_of_one_term() {
    let prod = p1_i(1).mul(&p1_i(-1));
    let r = p1_ring();
    let q1 = Mono::q(vec![1], 0);
    // 1/(H+z)^2 + 1/(H-z)^2 = 2/z^2 with the H/z^3 terms cancelling.
    assert_eq!(prod.get(&q1, -2), Some(&CohClass::unit(&r).scale(&q(2))));
    assert_eq!(prod.get(&q1, -3), None);
    let back = coh_zseries_from_json(&r, &coh_zseries_to_json(&prod)).unwrap();
    assert_eq!(back, prod);
}

#[test]
fn geometric_and_quintic_inverses() {
    let t = Truncation::theta(4);
    let one_minus_q = QSeries::with_terms(vec![1], 0, t, [(Mono::q(vec![0], 0), q(1)), (Mono::q(vec![1], 0), q(-1))]);
    let inv = one_minus_q.invert().unwrap();
    for d in 0..=4 {
        assert_eq!(inv.coeff_q(&[d]), Some(&q(1)));
    }
    let t2 = Truncation::theta(2);
    let i0 = QSeries::with_terms(
        vec![1],
        0,
        t2,
        [(Mono::q(vec![0], 0), q(1)), (Mono::q(vec![1], 0), q(120)), (Mono::q(vec![2], 0), q(113400))],
    );
    let inv = i0.invert().unwrap();
    // Direct convolution: c2 = 120^2 - 113400.
    assert_eq!(inv.coeff_q(&[2]), Some(&q(-99000)));
    assert_eq!(i0.mul(&inv), QSeries::one(vec![1], 0, t2));
}

#[test]
fn incompatible_gradings_are_rejected() {
    let a = QSeries::one(vec![1], 0, Truncation::theta(2));
    let b = QSeries::one(vec![1, 1], 0, Truncation::theta(2));
    assert!(matches!(a.try_mul(&b), Err(SeriesError::Incompatible(_))));
}

#[test]
fn novikov_exponential_shift() {
    let t = Truncation::theta(3);
    let a = QSeries::with_terms(vec![1], 0, t, [(Mono::q(vec![1], 0), q(1))]);
    let g = QSeries::with_terms(vec![1], 0, t, [(Mono::q(vec![1], 0), q(3))]);
    let out = substitute_novikov(&a, &[g]).unwrap();
    assert_eq!(out.coeff_q(&[1]), Some(&q(1)));
    assert_eq!(out.coeff_q(&[2]), Some(&q(3)));
    assert_eq!(out.coeff_q(&[3]), Some(&qf(9, 2)));
    assert!(matches!(substitute_novikov(&a, &[]), Err(SeriesError::UnsupportedTarget(_))));
}

#[test]
fn truncate_mod_inverse_square() {
    let t = Truncation::theta(0).with_t(1);
    let mut a = QZSeries::one(vec![1], 1, t);
    a.add_term(Mono { beta: vec![0], t: vec![1] }, -1, q(1));
    a.add_term(Mono::q(vec![0], 1), -2, q(7));
    a.add_term(Mono::q(vec![0], 1), 3, q(2));
    let m = a.z_truncate_mod(2);
    assert_eq!(m.entries().count(), 3);
    assert_eq!(m.get(&Mono::q(vec![0], 1), -2), None);
}

#[test]
fn prime_field_checks_match_rational_identities() {
    let x = Fp::from_frac(3, 7);
    let y = Fp::from_frac(-2, 5);
    let lhs = (x + y) * (x - y);
    assert_eq!(lhs, x * x - y * y);
    assert_eq!(Fp::from_rational(&qf(1, 2)) * Fp::from_i64(2), Fp::one());
}
