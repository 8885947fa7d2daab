use wallx_ifunction::{fixed_point_coefficient, i0_i1, small_i};
use wallx_oracle::Localizer;
use wallx_series::field::q;
use wallx_series::{CohClass, Mono, NovikovSeries, RatFunc, Truncation, ZFrac, ZSeries, Q};
use wallx_target::presets::{self, by_name};
use wallx_target::{AmbientCohomology, Epsilon, ToricTarget};
use wallx_wallcross::*;

fn setup(name: &str) -> (ToricTarget, AmbientCohomology) {
    let t = by_name(name).unwrap();
    let coh = AmbientCohomology::new(&t).unwrap();
    (t, coh)
}

fn of_degree(theory: &Theory, d: u32) -> usize {
    (0..theory.dim()).find(|&i| theory.degree(i) == d).unwrap()
}

fn one_series(theory: &Theory) -> NovikovSeries<CohClass<Q>> {
    NovikovSeries::constant(theory.theta().to_vec(), 0, Truncation::theta(8), CohClass::unit(theory.ring()))
}

/// `S(1)` restricted to `t = 0`.
fn at_t_zero(s: &ZSeries<CohClass<Q>>) -> ZSeries<CohClass<Q>> {
    let mut out = ZSeries::new(s.theta().to_vec(), 0, s.truncation());
    for (m, e, c) in s.entries() {
        if m.t_degree() == 0 {
            out.add_term(Mono::q(m.beta.clone(), 0), e, c.clone());
        }
    }
    out
}

fn entries(s: &ZSeries<CohClass<Q>>) -> Vec<(Mono, i32, Vec<Q>)> {
    s.entries().map(|(m, e, c)| (m.clone(), e, c.coords().to_vec())).collect()
}

#[test]
fn zero_brackets_give_the_exponential() {
    let (t, coh) = setup("p2");
    let theory = Theory::new(&t, &coh).unwrap();
    let zero = ZeroProvider::new(theory.clone(), Epsilon::Infinity);
    let s = build_s(&zero, &one_series(&theory), 2, 2).unwrap();
    let h = of_degree(&theory, 1);
    let mut t_h = Mono::one(1, 3);
    t_h.t[h] = 2;
    // t_H² / 2 z² · H² for the H-variable.
    let c = s.get(&t_h, -2).unwrap();
    assert_eq!(c, &theory.basis(h).pow(2).map_scalars(|x| x / q(2)));
    assert!(s.entries().all(|(m, _, _)| m.beta == vec![0]));
    assert!(unitarity_check(&build_s_matrix(&zero, 2, 2).unwrap()).holds());
}

#[test]
fn s_of_one_is_the_small_j_function() {
    let (t, coh) = setup("p1");
    let provider = OracleProvider::new(&t, &coh, 2).unwrap();
    let theory = provider.theory().clone();
    let s = build_s(&provider, &one_series(&theory), 0, 1).unwrap();
    let i = small_i(&t, &coh, Truncation::theta(1)).unwrap();
    let i = project_series(&theory, &i.series).unwrap();
    assert_eq!(at_t_zero(&s).entries().count(), i.entries().count());
    for (m, e, c) in i.entries() {
        assert_eq!(s.get(&Mono::q(m.beta.clone(), 3 - 1), e), Some(c), "{m} z^{e}");
    }
}

#[test]
fn unitarity_on_p1() {
    let (t, coh) = setup("p1");
    let provider = OracleProvider::new(&t, &coh, 2).unwrap();
    let s = build_s_matrix(&provider, 2, 2).unwrap();
    let report = unitarity_check(&s);
    assert!(report.holds(), "{:?}", report.violations);
    assert_eq!(report.checked_pairs, 4);
}

#[test]
fn sign_flip_is_reported_at_its_key() {
    let (t, coh) = setup("p1");
    let inner = OracleProvider::new(&t, &coh, 2).unwrap();
    let theory = inner.theory().clone();
    let (one, pt) = (of_degree(&theory, 0), of_degree(&theory, 1));
    assert_eq!(inner.bracket(&[(one, 1), (pt, 0)], &[1]).unwrap(), q(-1));
    let flipped = SignFlip::new(inner, &[(one, 1), (pt, 0)], &[1]);
    let report = unitarity_check(&build_s_matrix(&flipped, 0, 1).unwrap());
    assert!(!report.holds());
    let key = Mono::q(vec![1], 2);
    for v in &report.violations {
        assert_eq!((v.mono.clone(), v.z_exp), (key.clone(), -2), "{v:?}");
    }
    assert!(report.violations.iter().any(|v| v.pair == (one, pt)));
}

#[test]
fn p_of_s_one_is_one() {
    let (t, coh) = setup("p2");
    let provider = OracleProvider::new(&t, &coh, 2).unwrap();
    let theory = provider.theory().clone();
    let s = build_s_matrix(&provider, 1, 2).unwrap();
    let j = s.apply(&one_series(&theory)).unwrap();
    let p = compute_p_from_j(&s, &j).unwrap();
    assert_eq!(p.entries().count(), 1);
    assert_eq!(p.get(&Mono::one(1, 3), 0), Some(&CohClass::unit(theory.ring())));
}

fn quintic_i(
    d: u32,
) -> (ToricTarget, AmbientCohomology, wallx_ifunction::SmallIFunction<Q>, wallx_ifunction::IAsymptotics) {
    let (t, coh) = setup("quintic");
    let i = small_i(&t, &coh, Truncation::theta(d)).unwrap();
    let asym = i0_i1(&t, &coh, &i).unwrap();
    (t, coh, i, asym)
}

#[test]
fn quintic_mirror_map() {
    let (t, _, _, asym) = quintic_i(2);
    let mm = mirror_map_small(&t, &asym, &Epsilon::ZeroPlus).unwrap();
    assert!(mm.g0.is_empty());
    assert_eq!(mm.g[0].coeff_q(&[1]), Some(&q(770)));
    let inf = mirror_map_small(&t, &asym, &Epsilon::Infinity).unwrap();
    assert!(inf.is_identity());
    let (p2, coh2) = setup("p2");
    let i2 = small_i(&p2, &coh2, Truncation::theta(3)).unwrap();
    let a2 = i0_i1(&p2, &coh2, &i2).unwrap();
    assert!(mirror_map_small(&p2, &a2, &Epsilon::ZeroPlus).unwrap().is_identity());
    let lp1 = presets::local_p1();
    let lcoh = AmbientCohomology::new(&lp1).unwrap();
    let li = small_i(&lp1, &lcoh, Truncation::theta(2)).unwrap();
    let la = i0_i1(&lp1, &lcoh, &li).unwrap();
    assert!(mirror_map_small(&lp1, &la, &Epsilon::ZeroPlus).is_ok());
}

#[test]
fn fano_mirror_transform_is_trivial() {
    let (t, coh) = setup("p2");
    let i = small_i(&t, &coh, Truncation::theta(3)).unwrap();
    let asym = i0_i1(&t, &coh, &i).unwrap();
    let mt = mirror_transform(&t, &coh, &i, &asym).unwrap();
    assert_eq!(mt.small_j, i.series);
    assert!(mt.q_of_q.iter().all(|h| h.is_empty()));
}

#[test]
fn quintic_mirror_transform_matches_oracle() {
    let (t, coh, i, asym) = quintic_i(1);
    let mt = mirror_transform(&t, &coh, &i, &asym).unwrap();
    let theory = Theory::new(&t, &coh).unwrap();
    let j = project_series(&theory, &mt.small_j).unwrap();
    // Shape 1 + O(1/z²).
    assert!(j.entries().all(|(m, e, _)| m.beta == vec![0] || e <= -2));
    let provider = OracleProvider::new(&t, &coh, 1).unwrap();
    let s = build_s(&provider, &one_series(&theory), 0, 1).unwrap();
    assert_eq!(entries(&at_t_zero(&s)), entries(&j));
}

#[test]
fn semi_positive_birkhoff_structure() {
    let (t, coh, i, asym) = quintic_i(1);
    let provider = OracleProvider::new(&t, &coh, 1).unwrap();
    let theory = provider.theory().clone();
    let mm = mirror_map_small(&t, &asym, &Epsilon::ZeroPlus).unwrap();
    let tau_class = mm.as_class(&theory, &coh).unwrap();
    let tau: Vec<NovikovSeries<Q>> = (0..theory.dim()).map(|k| tau_class.map(|c| c.coord(k).clone())).collect();
    let s = build_s_matrix(&provider, 1, 1).unwrap().at(&tau).unwrap();
    let j = project_series(&theory, &i.series).unwrap();
    let p = compute_p_from_j(&s, &j).unwrap();
    let mut expect = ZSeries::new(theory.theta().to_vec(), 0, p.truncation());
    for (m, c) in asym.i0.iter() {
        expect.add_term(m.clone(), 0, CohClass::unit(theory.ring()).map_scalars(|x| x * c));
    }
    assert_eq!(p, expect);
    // The same map from the I-derived two-point brackets.
    let derived = IDerivedProvider::new(theory.clone(), &i, &asym.i0).unwrap();
    let st = string_transform(&derived, &one_series(&theory), &Epsilon::ZeroPlus, 0, 1).unwrap();
    assert_eq!(transformation_at_zero(&theory, &st), tau_class);
}

#[test]
fn string_transform_at_infinity_is_identity() {
    let (t, coh) = setup("p2");
    let provider = OracleProvider::new(&t, &coh, 2).unwrap();
    let theory = provider.theory().clone();
    let tau = string_transform(&provider, &one_series(&theory), &Epsilon::Infinity, 1, 2).unwrap();
    for (k, c) in tau.iter().enumerate() {
        assert_eq!(c, &NovikovSeries::t_var(vec![1], 3, Truncation::theta(2).with_t(1), k));
    }
    let zero = ZeroProvider::new(theory.clone(), Epsilon::ZeroPlus);
    let tz = string_transform(&zero, &one_series(&theory), &Epsilon::ZeroPlus, 1, 2).unwrap();
    assert_eq!(tz, tau);
    assert_eq!(generalized_string_transform(&tau, &tz).unwrap(), tau);
    assert!(matches!(
        string_transform(&provider, &one_series(&theory), &Epsilon::ZeroPlus, 1, 2),
        Err(WallError::InvalidParameter(_))
    ));
}

#[test]
fn birkhoff_factorization() {
    let (t, coh) = setup("p2");
    let provider = OracleProvider::new(&t, &coh, 2).unwrap();
    let theory = provider.theory().clone();
    let i = small_i(&t, &coh, Truncation::theta(2)).unwrap();
    let j = project_series(&theory, &i.series).unwrap();
    let b = birkhoff_induction(&provider, &j, 2).unwrap();
    assert!(b.tau.iter().all(|c| c.is_empty()));
    assert_eq!(b.p.entries().count(), 1);
    assert!(b.agrees(), "{:?}", b.residual);

    let (t, coh, i, asym) = quintic_i(1);
    let provider = OracleProvider::new(&t, &coh, 1).unwrap();
    let theory = provider.theory().clone();
    let j = project_series(&theory, &i.series).unwrap();
    let b = birkhoff_induction(&provider, &j, 1).unwrap();
    let mm = mirror_map_small(&t, &asym, &Epsilon::ZeroPlus).unwrap();
    assert_eq!(transformation_at_zero(&theory, &b.tau), mm.as_class(&theory, &coh).unwrap());
    assert_eq!(b.p.z_coefficient(0).map(|c| c.coord(theory.unit_index()).clone()), asym.i0);
    assert!(b.agrees(), "{:?}", b.residual);
}

#[test]
fn quintic_yukawa_coupling() {
    let (t, coh, _, asym) = quintic_i(3);
    let theory = Theory::new(&t, &coh).unwrap();
    let n = classical_triple(&theory, &coh).unwrap();
    assert_eq!(n, q(5));
    let y = parse_series("5/(1-3125*q)", 1, 3).unwrap();
    let k = yukawa_cy3(&t, &theory, &asym, &n, &y).unwrap();
    assert_eq!(k.coeff_q(&[1]), Some(&q(2875)));
    assert_eq!(k.coeff_q(&[2]), Some(&q(4876875)));
    assert_eq!(k.coeff_q(&[3]), Some(&q(8564575000)));
    let (p2, coh2) = setup("p2");
    let th2 = Theory::new(&p2, &coh2).unwrap();
    let i2 = small_i(&p2, &coh2, Truncation::theta(2)).unwrap();
    let a2 = i0_i1(&p2, &coh2, &i2).unwrap();
    assert!(matches!(yukawa_cy3(&p2, &th2, &a2, &n, &y), Err(WallError::Unsupported(_))));
}

#[test]
fn expression_parser() {
    let s = parse_series("2*(1+q)^2 - q^2/1 + -3", 1, 4).unwrap();
    assert_eq!(s.coeff_q(&[0]), Some(&q(-1)));
    assert_eq!(s.coeff_q(&[1]), Some(&q(4)));
    assert_eq!(s.coeff_q(&[2]), Some(&q(1)));
    let g = parse_series("1/(1-q)", 1, 3).unwrap();
    assert!((0..=3).all(|d| g.coeff_q(&[d]) == Some(&q(1))));
    assert!(matches!(parse_series("1/q", 1, 3), Err(WallError::Parse { .. })));
    assert!(matches!(parse_series("2 + x", 1, 3), Err(WallError::Parse { pos: 4, .. })));
}

fn lam(t: &ToricTarget) -> Vec<Q> {
    [0i64, 3, 11, 29, 53][..t.n_params()].iter().map(|&x| q(x)).collect()
}

fn p1_components(d: u32, m: u32) -> Vec<NovikovSeries<ZFrac<Q>>> {
    let t = presets::projective(2);
    let lam = lam(&t);
    let loc = Localizer::new(&t, lam.clone()).unwrap();
    let ones = vec![q(1); loc.n_fixed()];
    let h: Vec<Q> = (0..loc.n_fixed()).map(|fp| t.p_restriction(fp, 0).eval(&lam)).collect();
    equivariant_s_components(&loc, &ones, &[h], d, m).unwrap()
}

#[test]
fn polynomiality_on_p1() {
    let s = p1_components(2, 1);
    let report = polynomiality_check(&s, None, 2);
    assert!(report.holds(), "{:?}", report.violations);
    let mut bad = s.clone();
    bad[0].add_term(Mono::q(vec![1], 1), ZFrac::monomial(-1, q(1)));
    let report = polynomiality_check(&bad, None, 2);
    assert!(report.violations.iter().any(|v| v.fixed_point == 0 && v.y_power == 0), "{:?}", report.violations);
}

#[test]
fn fixed_point_components_restrict_j() {
    let t = presets::projective(3);
    let lam = lam(&t);
    let loc = Localizer::new(&t, lam.clone()).unwrap();
    let ones = vec![q(1); 3];
    let s = equivariant_s_components(&loc, &ones, &[], 2, 0).unwrap();
    for (fp, sm) in s.iter().enumerate() {
        for d in 1..=2i64 {
            assert_eq!(sm.coeff_q(&[d]), Some(&fixed_point_coefficient(&t, fp, &lam, &[d]).unwrap()));
        }
    }
}

fn trivial_initial(n: usize) -> Vec<NovikovSeries<ZFrac<Q>>> {
    (0..n).map(|_| NovikovSeries::constant(vec![1], 0, Truncation::theta(3), ZFrac::one())).collect()
}

#[test]
fn reconstruction_reproduces_i_on_p2() {
    let t = presets::projective(3);
    let lam = lam(&t);
    let loc = Localizer::new(&t, lam.clone()).unwrap();
    let s = recursion_reconstruct(&loc, &trivial_initial(3), 3, 2).unwrap();
    for (fp, sm) in s.iter().enumerate() {
        for d in 1..=3i64 {
            assert_eq!(sm.coeff_q(&[d]), Some(&fixed_point_coefficient(&t, fp, &lam, &[d]).unwrap()), "fp {fp} d {d}");
        }
    }
    // Feeding the result back returns it unchanged.
    assert_eq!(recursion_reconstruct(&loc, &s, 3, 2).unwrap(), s);
}

fn symbolic_initial(n: usize, d: u32) -> Vec<NovikovSeries<ZFrac<RatFunc>>> {
    (0..n).map(|_| NovikovSeries::constant(vec![1], 0, Truncation::theta(d), ZFrac::one())).collect()
}

#[test]
fn symbolic_reconstruction_is_homogeneous() {
    let t = presets::projective(3);
    let loc = Localizer::new(&t, (0..t.n_params()).map(RatFunc::var).collect()).unwrap();
    let s = recursion_reconstruct(&loc, &symbolic_initial(3, 2), 2, 2).unwrap();
    let lam = lam(&t);
    for (fp, sm) in s.iter().enumerate() {
        let v = sm.coeff_q(&[1]).unwrap().map_coeffs(|c| c.eval(&lam).unwrap());
        let expect = fixed_point_coefficient(&t, fp, &lam, &[1]).unwrap();
        assert_eq!(v.expand_at_infinity(-8), expect.expand_at_infinity(-8), "fp {fp}");
    }
}

#[test]
fn perturbed_initial_data_is_rejected() {
    let t = presets::projective(3);
    let loc = Localizer::new(&t, (0..t.n_params()).map(RatFunc::var).collect()).unwrap();
    let mut init = symbolic_initial(3, 2);
    init[1].add_term(Mono::q(vec![1], 0), ZFrac::one());
    let err = recursion_reconstruct(&loc, &init, 2, 2).unwrap_err();
    assert_eq!(
        err,
        WallError::Inhomogeneous { fixed_point: 1, key: Mono::q(vec![1], 0).to_string(), z_exp: 0, degree: -3 }
    );
}

#[test]
fn quantum_differential_operators() {
    for (n, name) in [(2usize, "p1"), (3, "p2")] {
        let (t, coh) = setup(name);
        let i = small_i(&t, &coh, Truncation::theta(n as u32 + 3)).unwrap();
        let op = qde_find(&i.series, &coh.p(0), n as i64, n).unwrap();
        for (k, a) in op.coeffs.iter().enumerate() {
            let expect: Vec<_> = if k == 0 { vec![(Mono::q(vec![1], 0), 0, q(-1))] } else { vec![] };
            let got: Vec<_> = a.entries().map(|(m, e, v)| (m.clone(), e, v.clone())).collect();
            assert_eq!(got, expect, "{name} a_{k}");
        }
        assert!(apply_operator(&op, &i.series, &coh.p(0)).is_empty());
    }
    let (t, coh) = setup("p1");
    let mut one = ZSeries::new(t.theta().to_vec(), 0, Truncation::theta(3));
    one.add_term(Mono::one(1, 0), 0, CohClass::unit(coh.ring()));
    let zero = CohClass::zero(coh.ring());
    let op = qde_find(&one, &zero, 2, 1).unwrap();
    assert!(op.coeffs[0].is_empty());
}
