use num_bigint::BigInt;
use proptest::prelude::*;
use wallx_ifunction::*;
use wallx_series::field::{factorial, q, qf};
use wallx_series::{CohClass, Field, Module, Mono, Truncation, Q};
use wallx_target::equivariant::symbolic_params;
use wallx_target::presets::{self, by_name};
use wallx_target::{AmbientCohomology, Epsilon, ToricTarget};

fn setup(name: &str) -> (ToricTarget, AmbientCohomology) {
    let t = by_name(name).unwrap();
    let coh = AmbientCohomology::new(&t).unwrap();
    (t, coh)
}

fn qd(d: i64) -> Mono {
    Mono::q(vec![d], 0)
}

#[test]
fn quintic_hypergeometric_coefficients() {
    let (t, coh) = setup("quintic");
    let i = small_i(&t, &coh, Truncation::theta(3)).unwrap();
    let a = i0_i1(&t, &coh, &i).unwrap();
    // (5d)!/(d!)^5, recomputed from factorials.
    for d in 0..=3u32 {
        let expect = Q::from_integer(factorial(5 * d) / factorial(d).pow(5));
        assert_eq!(a.i0.coeff_q(&[d as i64]), Some(&expect), "d = {d}");
    }
    let got: Vec<Q> = (0..=3).map(|d| a.i0.coeff_q(&[d]).unwrap().clone()).collect();
    assert_eq!(got, vec![q(1), q(120), q(113400), Q::from_integer(BigInt::from(168168000u64))]);
    assert_eq!(a.f[0].coeff_q(&[1]), Some(&q(770)));
    assert!(a.f0.is_empty());
}

#[test]
fn p1_degree_one_coefficient() {
    let (t, coh) = setup("p1");
    let c = ambient_coefficient(&t, &coh, &[1]).unwrap();
    // 1/(H+z)^2 = z^-2 - 2H z^-3 since H^2 = 0.
    let h = coh.p(0);
    let mut expect = ClassLaurent::monomial(-2, CohClass::unit(coh.ring()));
    expect.add_term(-3, h.scale(&q(-2)));
    assert_eq!(c, expect);
    let zero = ambient_coefficient(&t, &coh, &[0]).unwrap();
    assert_eq!(zero, ClassLaurent::one(coh.ring()));
}

#[test]
fn projective_spaces_satisfy_their_quantum_differential_equation() {
    for n in [2usize, 3, 5] {
        let t = presets::projective(n);
        let coh = AmbientCohomology::new(&t).unwrap();
        let i = small_i(&t, &coh, Truncation::theta(6)).unwrap().series;
        let h = coh.p(0);
        let mut lhs = i.clone();
        for _ in 0..n {
            lhs = apply_divisor_derivative(&lhs, 0, &h);
        }
        let diff = lhs.sub(&shift_q(&i, &[1]));
        assert!(diff.is_empty(), "P^{}: {:?}", n - 1, diff.entries().next());
    }
}

#[test]
fn quintic_picard_fuchs_coefficient_identity() {
    let (t, coh) = setup("quintic");
    let h = coh.p(0);
    let h5 = h.scale(&q(5));
    for d in 1..=4i64 {
        let cd = ambient_coefficient(&t, &coh, &[d]).unwrap();
        let prev = ambient_coefficient(&t, &coh, &[d - 1]).unwrap();
        let mut lhs = cd;
        for _ in 0..4 {
            lhs = lhs.mul(&ClassLaurent::linear(&h, d));
        }
        let mut rhs = prev.scale(&q(5));
        for k in 1..=4 {
            rhs = rhs.mul(&ClassLaurent::linear(&h5, 5 * d - 5 + k));
        }
        assert_eq!(lhs, rhs, "d = {d}");
    }
}

#[test]
fn fano_index_two_shape() {
    for name in ["p2", "p4", "p1xp1"] {
        let (t, coh) = setup(name);
        let i = small_i(&t, &coh, Truncation::theta(4)).unwrap();
        for (m, e, c) in i.series.entries() {
            if m.is_one() && e == 0 {
                assert_eq!(c, &CohClass::unit(coh.ring()));
            } else {
                assert!(e <= -2, "{name}: {m} z^{e}");
            }
        }
        let a = i0_i1(&t, &coh, &i).unwrap();
        assert_eq!(a.i0.len(), 1);
        assert!(a.i1.is_empty());
    }
}

#[test]
fn p1_has_no_one_over_z_term() {
    let (t, coh) = setup("p1");
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(5)).unwrap()).unwrap();
    assert!(a.i1.is_empty());
}

#[test]
fn local_p1_has_trivial_i0() {
    let (t, coh) = setup("local-p1");
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(4)).unwrap()).unwrap();
    assert_eq!(a.i0.len(), 1);
    assert_eq!(a.i0.coeff_q(&[0]), Some(&q(1)));
    assert!(a.i1.is_empty());
}

#[test]
fn index_one_support_of_asymptotic_pieces() {
    let t = ToricTarget::parse(&presets::hypersurface_config(5, 4)).unwrap();
    let coh = AmbientCohomology::new(&t).unwrap();
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(4)).unwrap()).unwrap();
    // Degree-4 hypersurface in P^4: only d = 1 has twisted index 1.
    assert_eq!(a.f0.len(), 1);
    assert_eq!(a.f0.coeff_q(&[1]), Some(&q(24)));
    for (m, _) in a.f0.iter() {
        assert_eq!(t.grading(&m.beta).twisted_index, 1);
    }
    for fk in &a.f {
        for (m, _) in fk.iter() {
            assert_eq!(t.grading(&m.beta).twisted_index, 0);
        }
    }
}

#[test]
fn chamber_truncations_of_asymptotics() {
    let (t, coh) = setup("quintic");
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(4)).unwrap()).unwrap();
    let (j0, j1) = epsilon_j0_j1(&a, &Epsilon::value(qf(1, 2)).unwrap());
    assert_eq!(j0, a.i0.truncate_theta(2));
    assert_eq!(j0.len(), 3);
    assert_eq!(j0.coeff_q(&[2]), Some(&q(113400)));
    assert_eq!(j1, a.i1.truncate_theta(2));
    let (j0, j1) = epsilon_j0_j1(&a, &Epsilon::Infinity);
    assert_eq!(j0.len(), 1);
    assert!(j1.is_empty());
    assert_eq!(epsilon_j0_j1(&a, &Epsilon::ZeroPlus), (a.i0.clone(), a.i1.clone()));
}

#[test]
fn equivariant_limit_matches_nonequivariant() {
    for name in ["p1", "p2"] {
        let (t, coh) = setup(name);
        let trunc = Truncation::theta(3).with_z(-12, 4);
        let lam = symbolic_params(&t);
        let eq = small_i_equivariant(&t, &lam, false, trunc).unwrap();
        assert!(eq.equivariant);
        let limit = nonequivariant_limit(&t, &coh, &eq.series).unwrap();
        let plain = small_i(&t, &coh, trunc).unwrap().series;
        assert_eq!(limit, plain, "{name}");
    }
}

#[test]
fn degree_one_restrictions_on_p2() {
    // At a fixed point the q^1 coefficient is the product of 1/(D_i|σ + z).
    let t = presets::projective(3);
    let lam: Vec<Q> = vec![q(0), q(3), q(7)];
    for fp in 0..3 {
        let c = fixed_point_coefficient(&t, fp, &lam, &[1]).unwrap();
        assert!(!c.is_zero());
        let v = c.eval(&q(1)).unwrap();
        let others: Vec<Q> = (0..3).filter(|&j| j != fp).map(|j| lam[j].clone() - &lam[fp]).collect();
        let expect = others.iter().fold(q(1), |acc, w| acc * (w + q(1)).inverse().unwrap());
        assert_eq!(v, expect);
    }
}

#[test]
fn non_effective_classes_vanish() {
    for name in ["p2", "p1xp1", "quintic", "local-p1"] {
        let (t, coh) = setup(name);
        for (beta, c) in relaxed_coefficients(&t, &coh, 3).unwrap() {
            if !t.is_effective(&beta) {
                assert!(c.is_zero(), "{name} {beta:?}");
            }
        }
    }
    let (t, _) = setup("quintic");
    assert!(matches!(factors(&t, &[-1]), Err(IError::InvalidTwist { degree: -5, .. })));
}

proptest! {
    #[test]
    fn truncation_is_compatible(d in 0u32..5, k in 0u32..3, which in 0usize..3) {
        let (t, coh) = setup(["p2", "p1xp1", "quintic"][which]);
        let big = small_i(&t, &coh, Truncation::theta(d + k)).unwrap();
        let small = small_i(&t, &coh, Truncation::theta(d)).unwrap();
        prop_assert_eq!(big.series.truncate_theta(d as i64).rows().iter().count(), small.series.rows().iter().count());
        for (m, e, c) in small.series.entries() {
            prop_assert_eq!(big.series.get(m, e), Some(c));
        }
    }

    #[test]
    fn divisor_derivative_is_a_derivation_on_q(d in 1i64..5) {
        // D applied to q^d · 1 gives q^d (H + d z).
        let (t, coh) = setup("p2");
        let mut s = small_i(&t, &coh, Truncation::theta(5)).unwrap().series.empty_like();
        s.add_term(qd(d), 0, CohClass::unit(coh.ring()));
        let ds = apply_divisor_derivative(&s, 0, &coh.p(0));
        prop_assert_eq!(ds.get(&qd(d), 0), Some(&coh.p(0)));
        prop_assert_eq!(ds.get(&qd(d), 1), Some(&CohClass::unit(coh.ring()).scale(&Q::from_i64(d))));
    }
}
