use num_traits::Zero;
use proptest::prelude::*;
use wallx_ifunction::{fixed_point_coefficient, small_i};
use wallx_oracle::*;
use wallx_series::field::q;
use wallx_series::{CohClass, Field, Module, Truncation, ZFrac, Q};
use wallx_target::presets::{self, by_name};
use wallx_target::{AmbientCohomology, ToricTarget};

fn setup(name: &str) -> (ToricTarget, AmbientCohomology) {
    let t = by_name(name).unwrap();
    let coh = AmbientCohomology::new(&t).unwrap();
    (t, coh)
}

/// State-space index of the basis element of a given degree (single-parameter targets).
fn of_degree(o: &GraphSumOracle, d: u32) -> usize {
    (0..o.space().dim()).find(|&i| o.space().degree(i) == d).unwrap()
}

#[test]
fn psi_integrals() {
    assert_eq!(psi_integral(&[0, 0, 0]).unwrap(), q(1));
    assert_eq!(psi_integral(&[1, 0, 0, 0]).unwrap(), q(1));
    assert_eq!(psi_integral(&[1, 1, 0, 0, 0]).unwrap(), q(2));
    assert_eq!(psi_integral(&[2, 0, 0, 0]).unwrap(), q(0));
    assert_eq!(psi_integral(&[2, 0, 0, 0, 0]).unwrap(), q(1));
    assert!(matches!(psi_integral(&[0, 0]), Err(OracleError::Unstable(2))));
}

#[test]
fn one_line_through_two_points() {
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    let (pt, h) = (of_degree(&o, 2), of_degree(&o, 1));
    assert_eq!(o.invariant(&[(pt, 0), (pt, 0), (h, 0)], &[1]).unwrap(), q(1));
    assert_eq!(o.invariant(&[(pt, 0), (pt, 0)], &[1]).unwrap(), q(1));
    // Dimension mismatch vanishes.
    assert_eq!(o.invariant(&[(pt, 0), (h, 0), (h, 0)], &[1]).unwrap(), q(0));
    // Conics through five points.
    let five = vec![(pt, 0); 5];
    assert_eq!(o.invariant(&five, &[2]).unwrap(), q(1));
}

#[test]
fn p1_point_invariants() {
    let (t, coh) = setup("p1");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    let pt = of_degree(&o, 1);
    assert_eq!(o.invariant(&[(pt, 0), (pt, 0), (pt, 0)], &[1]).unwrap(), q(1));
    assert_eq!(o.invariant(&[(pt, 0)], &[1]).unwrap(), q(1));
    // Classical triple product.
    let one = of_degree(&o, 0);
    assert_eq!(o.invariant(&[(one, 0), (one, 0), (pt, 0)], &[0]).unwrap(), q(1));
}

#[test]
fn lines_on_the_quintic() {
    let (t, coh) = setup("quintic");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    assert_eq!(o.space().dim(), 4);
    let h = of_degree(&o, 1);
    assert_eq!(o.invariant(&[(h, 0), (h, 0), (h, 0)], &[0]).unwrap(), q(5));
    assert_eq!(o.invariant(&[(h, 0), (h, 0), (h, 0)], &[1]).unwrap(), q(2875));
    // Divisor axiom down to no markings, and a dimension mismatch.
    assert_eq!(o.invariant(&[(h, 0)], &[1]).unwrap(), q(2875));
    assert_eq!(o.invariant(&[], &[1]).unwrap(), q(2875));
    assert_eq!(o.invariant(&[(of_degree(&o, 0), 0)], &[1]).unwrap(), q(0));
}

#[test]
fn degree_bound_is_enforced() {
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    assert!(matches!(o.invariant(&[(0, 0)], &[3]), Err(OracleError::DegreeBound { degree: 3, bound: 2 })));
}

#[test]
fn concave_targets_are_equivariant_only() {
    let (t, coh) = setup("local-p1");
    assert!(matches!(StateSpace::new(&t, &coh), Err(OracleError::Unsupported(_))));
}

#[test]
fn oracle_j_matches_small_i() {
    for (name, d) in [("p1", 2u32), ("p2", 2)] {
        let (t, coh) = setup(name);
        let o = GraphSumOracle::new(&t, &coh).unwrap();
        let j = oracle_small_j(&o, d).unwrap();
        let i = small_i(&t, &coh, Truncation::theta(d)).unwrap().series;
        assert_eq!(j.entries().count(), i.entries().count(), "{name}");
        for (m, e, c) in i.entries() {
            assert_eq!(j.get(m, e).map(|x| x.coords()), Some(c.coords()), "{name} {m} z^{e}");
        }
    }
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    assert_eq!(oracle_small_j(&o, 0).unwrap().entries().count(), 1);
}

#[test]
fn string_equation_cross_check() {
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    let one = of_degree(&o, 0);
    for d in 1..=2i64 {
        for j in 0..o.space().dim() {
            for a in 0..4u32 {
                let one_point = o.invariant(&[(j, a)], &[d]).unwrap();
                let two_point = o.invariant(&[(j, a + 1), (one, 0)], &[d]).unwrap();
                assert_eq!(one_point, two_point, "d = {d}, j = {j}, a = {a}");
            }
        }
    }
}

#[test]
fn equivariant_j_restricts_to_i() {
    for n in [2usize, 3] {
        let t = presets::projective(n);
        let lam: Vec<Q> = [0i64, 3, 11, 29][..n].iter().map(|&x| q(x)).collect();
        let loc = Localizer::new(&t, lam.clone()).unwrap();
        let j = equivariant_small_j(&loc, 3).unwrap();
        for (fp, s) in j.iter().enumerate() {
            for d in 1..=3i64 {
                let expect = fixed_point_coefficient(&t, fp, &lam, &[d]).unwrap();
                assert_eq!(s.coeff_q(&[d]), Some(&expect), "P^{} fp {fp} d {d}", n - 1);
            }
        }
    }
}

#[test]
fn edge_twist_window() {
    // Degree-5 bundle on a line of P^4: weights 5u, 4u+v, ..., 5v.
    let t = presets::quintic();
    let lam: Vec<Q> = [1i64, 4, 9, 16, 25].iter().map(|&x| q(x)).collect();
    let u = t.convex_restriction(0, 0).eval(&lam);
    let v = t.convex_restriction(1, 0).eval(&lam);
    let (h0, h1) = section_weights(&u, &v, 5, &(u.clone() - v.clone()).over(&q(5)).unwrap()).unwrap();
    assert!(h1.is_empty());
    let hu = u.clone() / q(5);
    let hv = v.clone() / q(5);
    let expect: Vec<Q> = (0..=5).map(|k| hu.clone() * q(5 - k) + hv.clone() * q(k)).collect();
    assert_eq!(h0, expect);
    // Flag weight of an n-cover.
    let loc = Localizer::new(&t, lam.clone()).unwrap();
    let w = t.orbit(0, 1).unwrap().weight.eval(&lam);
    assert_eq!(loc.flag_weight(0, 1, 3).unwrap(), w / q(3));
}

#[test]
fn edge_factor_is_symmetric() {
    let t = presets::quintic();
    let lam: Vec<Q> = [2i64, -7, 13, 5, 31].iter().map(|&x| q(x)).collect();
    for (a, b) in [(0, 1), (2, 4), (1, 3)] {
        for n in 1..=3 {
            assert_eq!(edge_factor(&t, a, b, n, &lam).unwrap(), edge_factor(&t, b, a, n, &lam).unwrap());
        }
    }
}

#[test]
fn descendant_vertex_sums_power_vertices() {
    // 1/(z - ψ) at a trivalent-plus vertex expands into the ψ-power integrals.
    let flags = [q(3), q(-5)];
    let marks = [(q(2), Psi::Descendant), (q(7), Psi::Power(0))];
    let gen = vertex_integral(&flags, &marks).unwrap();
    let mut expect = ZFrac::zero();
    for a in 0..=1u32 {
        let m = [(q(2), Psi::Power(a)), (q(7), Psi::Power(0))];
        expect = expect
            .add(&ZFrac::monomial(-(a as i32) - 1, vertex_integral(&flags, &m).unwrap().constant_value().unwrap()));
    }
    assert_eq!(gen, expect);
}

#[test]
fn tree_counts() {
    let t = presets::projective(2);
    // P^1 degree 1: one edge between the two fixed points.
    assert_eq!(enumerate_trees(&t, &[1], 0).len(), 1);
    // Degree 2: the double cover, and two chains of two lines (middle vertex at either point).
    assert_eq!(enumerate_trees(&t, &[2], 0).len(), 3);
    let with_marks = enumerate_trees(&t, &[1], 1);
    assert_eq!(with_marks.len(), 2);
    assert!(with_marks.iter().all(|tr| tr.automorphisms == 1));
    let chain = enumerate_trees(&t, &[2], 0).into_iter().find(|tr| tr.edges.len() == 2).unwrap();
    assert_eq!(chain.automorphisms, 2);
}

fn p2_oracle_check(
    f: impl Fn(&GraphSumOracle, &[(usize, u32)], &[i64]) -> Result<(), TestCaseError>,
    ins: Vec<(usize, u32)>,
    d: i64,
) -> Result<(), TestCaseError> {
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    f(&o, &ins, &[d])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_are_symmetric(ins in prop::collection::vec((0usize..3, 0u32..2), 3..5), d in 0i64..3, rot in 0usize..4) {
        p2_oracle_check(|o, ins, beta| {
            let mut perm = ins.to_vec();
            perm.rotate_left(rot % ins.len());
            perm.swap(0, ins.len() - 1);
            prop_assert_eq!(o.invariant(ins, beta).unwrap(), o.invariant(&perm, beta).unwrap());
            Ok(())
        }, ins, d)?;
    }

    #[test]
    fn divisor_axiom(ins in prop::collection::vec((0usize..3, 0u32..1), 1..4), d in 1i64..3) {
        p2_oracle_check(|o, ins, beta| {
            let h = of_degree(o, 1);
            let mut with = ins.to_vec();
            with.push((h, 0));
            let lhs = o.invariant(&with, beta).unwrap();
            let rhs = o.invariant(ins, beta).unwrap() * q(beta[0]);
            prop_assert_eq!(lhs, rhs);
            Ok(())
        }, ins, d)?;
    }

    #[test]
    fn independent_of_parameter_choice(seed in 1u64..1000, ins in prop::collection::vec((0usize..3, 0u32..2), 1..4), d in 1i64..3) {
        let (t, coh) = setup("p2");
        let a = GraphSumOracle::new(&t, &coh).unwrap();
        let b = GraphSumOracle::with_seed(&t, &coh, seed).unwrap();
        prop_assert_eq!(a.invariant(&ins, &[d]).unwrap(), b.invariant(&ins, &[d]).unwrap());
    }
}

#[test]
fn multilinear_extension() {
    let (t, coh) = setup("p2");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    let ring = o.space().ring().clone();
    let (pt, h) = (of_degree(&o, 2), of_degree(&o, 1));
    let mixed = CohClass::basis(&ring, pt).add(&CohClass::basis(&ring, h).scale(&q(3)));
    let v = o.invariant_of(&[(mixed.clone(), 0), (mixed, 0), (CohClass::basis(&ring, h), 0)], &[1]).unwrap();
    // Only the (pt, pt, H) term has the right dimension.
    assert_eq!(v, q(1));
    assert!(!v.is_zero());
}

#[test]
fn conics_on_the_quintic() {
    let (t, coh) = setup("quintic");
    let o = GraphSumOracle::new(&t, &coh).unwrap();
    let h = of_degree(&o, 1);
    assert_eq!(o.invariant(&[(h, 0), (h, 0), (h, 0)], &[2]).unwrap(), q(4876875));
}
