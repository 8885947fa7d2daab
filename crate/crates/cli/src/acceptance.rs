//! The acceptance battery: eleven exact checks with runtime budgets.

use std::time::{Duration, Instant};

use num_traits::Zero;

use wallx_ifunction::{
    ambient_coefficient, apply_divisor_derivative, epsilon_j0_j1, fixed_point_coefficient, i0_i1, shift_q, small_i,
    ClassLaurent,
};
use wallx_oracle::{GraphSumOracle, Localizer};
use wallx_series::field::{qf, rational_to_string};
use wallx_series::{CohClass, Field, Module, Mono, NovikovSeries, RatFunc, Truncation, ZFrac, ZSeries, Q};
use wallx_target::presets::{self, by_name};
use wallx_target::{chamber_truncate, walls, AmbientCohomology, Epsilon, ToricTarget};
use wallx_wallcross::{
    build_s_matrix, classical_triple, compute_p_from_j, equivariant_s_components, mirror_map_small, parse_series,
    polynomiality_check, project_series, recursion_reconstruct, string_transform, transformation_at_zero,
    unitarity_check, yukawa_cy3, IDerivedProvider, InvariantProvider, OracleProvider, SignFlip, Theory, WallError,
};

type Check = fn() -> Result<String, String>;

/// One criterion: identifier, summary, runtime budget and check.
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub budget: Duration,
    check: Check,
}

pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub elapsed: Duration,
    pub budget: Duration,
    /// Details on success, the first discrepancy on failure.
    pub result: Result<String, String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok() && self.elapsed <= self.budget
    }

    /// `PASS A1 ...` or `FAIL A1 ...`.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let detail = match &self.result {
            Ok(d) if self.elapsed > self.budget => format!("{d}; over budget {:?}", self.budget),
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        format!("{verdict} {:<3} {:<44} {:>9.3}s  {detail}", self.id, self.title, self.elapsed.as_secs_f64())
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: "A1", title: "quintic hypergeometric I", budget: secs(5), check: a1 },
        Criterion { id: "A2", title: "quantum differential annihilation", budget: secs(30), check: a2 },
        Criterion { id: "A3", title: "Fano shape 1 + O(1/z^2)", budget: secs(10), check: a3 },
        Criterion { id: "A4", title: "unitarity of S on P1", budget: secs(120), check: a4 },
        Criterion { id: "A5", title: "polynomiality on P1", budget: secs(120), check: a5 },
        Criterion { id: "A6", title: "recursion reconstruction on P2", budget: secs(300), check: a6 },
        Criterion { id: "A7", title: "quintic 2875 and Yukawa coupling", budget: secs(780), check: a7 },
        Criterion { id: "A8", title: "chamber truncation and walls", budget: secs(1), check: a8 },
        Criterion { id: "A9", title: "semi-positive Birkhoff structure", budget: secs(180), check: a9 },
        Criterion { id: "A10", title: "local P1 has I0 = 1", budget: secs(5), check: a10 },
        Criterion { id: "A11", title: "fault injection", budget: secs(60), check: a11 },
    ]
}

/// Resolves `all` or a comma separated list of identifiers.
pub fn select(list: &str) -> Result<Vec<&'static str>, String> {
    let all: Vec<&'static str> = criteria().iter().map(|c| c.id).collect();
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(all);
    }
    list.split(',')
        .map(|s| {
            let s = s.trim().to_ascii_uppercase();
            all.iter().copied().find(|id| *id == s).ok_or_else(|| format!("unknown criterion '{s}'"))
        })
        .collect()
}

pub fn run_one(c: &Criterion) -> Outcome {
    let start = Instant::now();
    let result = (c.check)();
    Outcome { id: c.id, title: c.title, elapsed: start.elapsed(), budget: c.budget, result }
}

pub fn run(ids: &[&str]) -> Vec<Outcome> {
    criteria().iter().filter(|c| ids.contains(&c.id)).map(run_one).collect()
}

pub fn table(results: &[Outcome]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&r.line());
        out.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn setup(name: &str) -> Result<(ToricTarget, AmbientCohomology), String> {
    let t = by_name(name).map_err(err)?;
    let coh = AmbientCohomology::new(&t).map_err(err)?;
    Ok((t, coh))
}

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn show(x: Option<&Q>) -> String {
    x.map(rational_to_string).unwrap_or_else(|| "0".into())
}

fn one_series(theory: &Theory, d: u32) -> NovikovSeries<CohClass<Q>> {
    NovikovSeries::constant(theory.theta().to_vec(), 0, Truncation::theta(d), CohClass::unit(theory.ring()))
}

fn of_degree(theory: &Theory, d: u32) -> Result<usize, String> {
    (0..theory.dim()).find(|&i| theory.degree(i) == d).ok_or_else(|| format!("no basis element of degree {d}"))
}

fn a1() -> Result<String, String> {
    let (t, coh) = setup("quintic")?;
    let i = small_i(&t, &coh, Truncation::theta(3)).map_err(err)?;
    let a = i0_i1(&t, &coh, &i).map_err(err)?;
    let got: Vec<String> = (0..=3).map(|d| show(a.i0.coeff_q(&[d]))).collect();
    ensure(got == ["1", "120", "113400", "168168000"], || format!("I0 coefficients {got:?}"))?;
    let f1 = show(a.f[0].coeff_q(&[1]));
    ensure(f1 == "770", || format!("I1 divisor coefficient at q^1 is {f1}"))?;
    Ok(format!("I0 = {}; I1 q^1 = {f1}", got.join(", ")))
}

fn a2() -> Result<String, String> {
    for n in [2usize, 3, 5] {
        let t = presets::projective(n);
        let coh = AmbientCohomology::new(&t).map_err(err)?;
        let i = small_i(&t, &coh, Truncation::theta(6)).map_err(err)?.series;
        let h = coh.p(0);
        let mut lhs = i.clone();
        for _ in 0..n {
            lhs = apply_divisor_derivative(&lhs, 0, &h);
        }
        let diff = lhs.sub(&shift_q(&i, &[1]));
        ensure(diff.is_empty(), || format!("(D^{n} - q) I != 0 on P^{}", n - 1))?;
    }
    let (t, coh) = setup("quintic")?;
    let h = coh.p(0);
    let h5 = h.scale(&q(5));
    for d in 1..=4i64 {
        let mut lhs = ambient_coefficient(&t, &coh, &[d]).map_err(err)?;
        for _ in 0..4 {
            lhs = lhs.mul(&ClassLaurent::linear(&h, d));
        }
        let mut rhs = ambient_coefficient(&t, &coh, &[d - 1]).map_err(err)?.scale(&q(5));
        for k in 1..=4 {
            rhs = rhs.mul(&ClassLaurent::linear(&h5, 5 * d - 5 + k));
        }
        ensure(lhs == rhs, || format!("quintic recursion fails at d = {d}"))?;
    }
    Ok("P1, P2, P4 through degree 6; quintic through d = 4".into())
}

fn a3() -> Result<String, String> {
    for name in ["p2", "p4", "p1xp1"] {
        let (t, coh) = setup(name)?;
        let i = small_i(&t, &coh, Truncation::theta(4)).map_err(err)?;
        for (m, e, c) in i.series.entries() {
            if m.is_one() && e == 0 {
                ensure(c == &CohClass::unit(coh.ring()), || format!("{name}: constant term is not 1"))?;
            } else {
                ensure(e <= -2, || format!("{name}: term {m} z^{e}"))?;
            }
        }
    }
    Ok("P2, P4, P1xP1 through d = 4".into())
}

fn a4() -> Result<String, String> {
    let (t, coh) = setup("p1")?;
    let provider = OracleProvider::new(&t, &coh, 2).map_err(err)?;
    let report = unitarity_check(&build_s_matrix(&provider, 2, 2).map_err(err)?);
    ensure(report.holds(), || {
        format!("{} violations, first {:?}", report.violations.len(), report.violations.first())
    })?;
    Ok(format!("{} basis pairs exact at d <= 2, t-order <= 2", report.checked_pairs))
}

fn generic_params(t: &ToricTarget) -> Vec<Q> {
    [0i64, 3, 11, 29, 53, 97][..t.n_params()].iter().map(|&x| q(x)).collect()
}

fn a5() -> Result<String, String> {
    let t = presets::projective(2);
    let lam = generic_params(&t);
    let loc = Localizer::new(&t, lam.clone()).map_err(err)?;
    let ones = vec![q(1); loc.n_fixed()];
    let h: Vec<Q> = (0..loc.n_fixed()).map(|fp| t.p_restriction(fp, 0).eval(&lam)).collect();
    let s = equivariant_s_components(&loc, &ones, &[h], 2, 1).map_err(err)?;
    let report = polynomiality_check(&s, None, 2);
    ensure(report.holds(), || {
        format!("{} singular coefficients, first {:?}", report.violations.len(), report.violations.first())
    })?;
    Ok(format!("{} coefficients regular through y^2", report.checked))
}

fn a6() -> Result<String, String> {
    let t = presets::projective(3);
    let lam = generic_params(&t);
    let loc = Localizer::new(&t, lam.clone()).map_err(err)?;
    let init: Vec<NovikovSeries<ZFrac<Q>>> =
        (0..3).map(|_| NovikovSeries::constant(vec![1], 0, Truncation::theta(3), ZFrac::one())).collect();
    let s = recursion_reconstruct(&loc, &init, 3, 2).map_err(err)?;
    for (fp, sm) in s.iter().enumerate() {
        for d in 1..=3i64 {
            let expect = fixed_point_coefficient(&t, fp, &lam, &[d]).map_err(err)?;
            ensure(sm.coeff_q(&[d]) == Some(&expect), || format!("fixed point {fp}, q^{d} differs from I"))?;
        }
    }
    Ok("three fixed points through d = 3".into())
}

fn a7() -> Result<String, String> {
    let (t, coh) = setup("quintic")?;
    let o = GraphSumOracle::new(&t, &coh).map_err(err)?;
    let h = (0..o.space().dim()).find(|&i| o.space().degree(i) == 1).ok_or("no divisor class")?;
    let hhh = [(h, 0), (h, 0), (h, 0)];
    let n1 = o.invariant(&hhh, &[1]).map_err(err)?;
    let n2 = o.invariant(&hhh, &[2]).map_err(err)?;
    let i = small_i(&t, &coh, Truncation::theta(2)).map_err(err)?;
    let asym = i0_i1(&t, &coh, &i).map_err(err)?;
    let theory = Theory::new(&t, &coh).map_err(err)?;
    let classical = classical_triple(&theory, &coh).map_err(err)?;
    let y = parse_series("5/(1-3125*q)", 1, 2).map_err(err)?;
    let k = yukawa_cy3(&t, &theory, &asym, &classical, &y).map_err(err)?;
    let coeffs: Vec<String> = (0..=2).map(|d| show(k.coeff_q(&[d]))).collect();
    ensure(coeffs == ["5", "2875", "4876875"], || format!("K(Q) coefficients {coeffs:?}"))?;
    ensure(k.coeff_q(&[1]) == Some(&n1), || format!("oracle degree 1 gives {}", rational_to_string(&n1)))?;
    ensure(k.coeff_q(&[2]) == Some(&n2), || format!("oracle degree 2 gives {}", rational_to_string(&n2)))?;
    Ok(format!("K = {} + {}Q + {}Q^2, oracle agrees at d = 1, 2", coeffs[0], coeffs[1], coeffs[2]))
}

fn a8() -> Result<String, String> {
    let (t, coh) = setup("quintic")?;
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(3)).map_err(err)?).map_err(err)?;
    let half = Epsilon::value(qf(1, 2)).map_err(err)?;
    let (j0, j1) = epsilon_j0_j1(&a, &half);
    ensure(j0 == a.i0.truncate_theta(2), || "J0 at 1/2 is not the d <= 2 truncation of I0".into())?;
    ensure(j1 == a.i1.truncate_theta(2), || "J1 at 1/2 is not the d <= 2 truncation of I1".into())?;
    let probe =
        NovikovSeries::with_terms(vec![1], 0, Truncation::theta(3), (0..=3).map(|k| (Mono::q(vec![k], 0), q(k + 1))));
    // Scan ε downward on a grid finer than the walls and record where the truncation changes.
    let grid: Vec<Q> = (1..=48).map(|k| qf(k, 24)).chain([q(2), q(3)]).collect();
    let mut changes = Vec::new();
    let mut prev: Option<NovikovSeries<Q>> = None;
    for e in grid.iter().rev() {
        let cur = chamber_truncate(&probe, &Epsilon::value(e.clone()).map_err(err)?);
        if prev.as_ref().is_some_and(|p| *p != cur) {
            changes.push(e.clone());
        }
        prev = Some(cur);
    }
    let expect = vec![q(1), qf(1, 2), qf(1, 3)];
    ensure(changes == expect && walls(3) == expect, || format!("changes at {changes:?}"))?;
    Ok("J at 1/2 truncates I0, I1 at d <= 2; walls 1, 1/2, 1/3".into())
}

fn a9() -> Result<String, String> {
    let (t, coh) = setup("quintic")?;
    let i = small_i(&t, &coh, Truncation::theta(1)).map_err(err)?;
    let asym = i0_i1(&t, &coh, &i).map_err(err)?;
    let provider = OracleProvider::new(&t, &coh, 1).map_err(err)?;
    let theory = provider.theory().clone();
    let mm = mirror_map_small(&t, &asym, &Epsilon::ZeroPlus).map_err(err)?;
    let tau_class = mm.as_class(&theory, &coh).map_err(err)?;
    let tau: Vec<NovikovSeries<Q>> = (0..theory.dim()).map(|k| tau_class.map(|c| c.coord(k).clone())).collect();
    let s = build_s_matrix(&provider, 1, 1).map_err(err)?.at(&tau).map_err(err)?;
    let j = project_series(&theory, &i.series).map_err(err)?;
    let p = compute_p_from_j(&s, &j).map_err(err)?;
    let mut expect = ZSeries::new(theory.theta().to_vec(), 0, p.truncation());
    for (m, c) in asym.i0.iter() {
        expect.add_term(m.clone(), 0, CohClass::unit(theory.ring()).map_scalars(|x| x * c));
    }
    ensure(p == expect, || "P is not I0 times the unit".into())?;
    let derived = IDerivedProvider::new(theory.clone(), &i, &asym.i0).map_err(err)?;
    let st = string_transform(&derived, &one_series(&theory, 1), &Epsilon::ZeroPlus, 0, 1).map_err(err)?;
    ensure(transformation_at_zero(&theory, &st) == tau_class, || {
        "string transform differs from the mirror map".into()
    })?;
    Ok(format!("P = I0 = 1 + {}q; mirror map g = {}q", show(asym.i0.coeff_q(&[1])), show(mm.g[0].coeff_q(&[1]))))
}

fn a10() -> Result<String, String> {
    let (t, coh) = setup("local-p1")?;
    let a = i0_i1(&t, &coh, &small_i(&t, &coh, Truncation::theta(4)).map_err(err)?).map_err(err)?;
    ensure(a.i0.len() == 1 && a.i0.coeff_q(&[0]) == Some(&q(1)), || format!("I0 has {} terms", a.i0.len()))?;
    Ok("I0 = 1 through d = 4".into())
}

fn a11() -> Result<String, String> {
    // Reconstruction over symbolic torus parameters with +q at z^0 for fixed point 1.
    let t = presets::projective(3);
    let loc = Localizer::new(&t, (0..t.n_params()).map(RatFunc::var).collect()).map_err(err)?;
    let mut init: Vec<NovikovSeries<ZFrac<RatFunc>>> =
        (0..3).map(|_| NovikovSeries::constant(vec![1], 0, Truncation::theta(2), ZFrac::one())).collect();
    init[1].add_term(Mono::q(vec![1], 0), ZFrac::one());
    let key = Mono::q(vec![1], 0).to_string();
    match recursion_reconstruct(&loc, &init, 2, 2) {
        Err(WallError::Inhomogeneous { fixed_point: 1, key: k, z_exp: 0, .. }) if k == key => {}
        other => return Err(format!("perturbed initial data gave {:?}", other.map(|_| "a system"))),
    }
    // Unitarity with ⟨1ψ, pt⟩ at degree 1 sign-flipped.
    let (p1, coh) = setup("p1")?;
    let inner = OracleProvider::new(&p1, &coh, 2).map_err(err)?;
    let theory = inner.theory().clone();
    let (one, pt) = (of_degree(&theory, 0)?, of_degree(&theory, 1)?);
    let ins = [(one, 1), (pt, 0)];
    let original = inner.bracket(&ins, &[1]).map_err(err)?;
    ensure(!original.is_zero(), || "the flipped bracket vanishes".into())?;
    let flipped = SignFlip::new(inner, &ins, &[1]);
    let report = unitarity_check(&build_s_matrix(&flipped, 0, 1).map_err(err)?);
    let at = Mono::q(vec![1], 2);
    ensure(!report.holds(), || "sign flip not detected".into())?;
    ensure(report.violations.iter().all(|v| v.mono == at && v.z_exp == -2), || {
        "violation away from the flipped key".into()
    })?;
    ensure(report.violations.iter().any(|v| v.pair == (one, pt)), || "pair (1, pt) not reported".into())?;
    Ok(format!(
        "reconstruction: fixed point 1, {key}, z^0; unitarity: {} violations at {at} z^-2",
        report.violations.len()
    ))
}
