//! The computations behind each subcommand, producing JSON documents.
//!
//! Documents that report a check carry `"status": "ok"` or
//! `"status": "inconsistent"`, and the exit code is read back from that field
//! so cached and fresh runs agree.

use num_traits::Zero;
use serde_json::{json, Map, Value};
use wallx_ifunction::{i0_i1, small_i, small_i_equivariant, IAsymptotics, SmallIFunction};
use wallx_oracle::{oracle_small_j, GraphSumOracle, Insertion, Localizer, Psi, DEFAULT_DEGREE_BOUND};
use wallx_series::json::{coh_zseries_to_json, scalar_novikov_to_json};
use wallx_series::{CohClass, Field, Mono, NovikovSeries, RatFunc, Truncation, Q};
use wallx_target::equivariant::symbolic_params;
use wallx_target::{AmbientCohomology, Epsilon, ToricTarget};
use wallx_wallcross::{
    birkhoff_induction, build_s_matrix, classical_triple, equivariant_s_components, mirror_map_small, mirror_transform,
    parse_series, polynomiality_check, project_series, string_transform, transformation_at_zero, unitarity_check,
    yukawa_cy3, IDerivedProvider, InvariantProvider, OracleProvider, Theory,
};

use crate::error::CliError;

pub const STATUS_OK: &str = "ok";
pub const STATUS_INCONSISTENT: &str = "inconsistent";

/// A parsed target with its ambient cohomology.
pub struct Target {
    pub target: ToricTarget,
    pub coh: AmbientCohomology,
}

impl Target {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let target = ToricTarget::parse(text)?;
        let coh = AmbientCohomology::new(&target)?;
        Ok(Target { target, coh })
    }
}

fn status(ok: bool) -> Value {
    json!(if ok { STATUS_OK } else { STATUS_INCONSISTENT })
}

fn mono_json(m: &Mono) -> Value {
    json!({ "beta": m.beta, "t_exp": m.t })
}

fn coh_json(c: &CohClass<Q>) -> Value {
    wallx_series::json::coh_to_json(c)
}

/// The oracle degree bound for a requested degree: 2 by default, 3 with a warning.
pub fn oracle_bound(d: u32) -> Result<i64, CliError> {
    match d as i64 {
        d if d <= DEFAULT_DEGREE_BOUND => Ok(DEFAULT_DEGREE_BOUND),
        3 => {
            eprintln!("warning: oracle degree 3 can take minutes on twisted targets");
            Ok(3)
        }
        d => Err(CliError::Validation(format!("oracle degree {d} exceeds the supported bound 3"))),
    }
}

fn asymptotics(t: &Target, order: u32) -> Result<(SmallIFunction<Q>, IAsymptotics), CliError> {
    let i = small_i(&t.target, &t.coh, Truncation::theta(order))?;
    let asym = i0_i1(&t.target, &t.coh, &i)?;
    Ok((i, asym))
}

pub fn ifun(t: &Target, order: u32, equivariant: bool, z_window: Option<(i32, i32)>) -> Result<Value, CliError> {
    let mut trunc = Truncation::theta(order);
    if let Some((lo, hi)) = z_window {
        if lo > hi {
            return Err(CliError::Validation(format!("empty z window [{lo}, {hi}]")));
        }
        trunc = trunc.with_z(lo, hi);
    }
    let series = if equivariant {
        let lam = symbolic_params(&t.target);
        coh_zseries_to_json(&small_i_equivariant(&t.target, &lam, false, trunc)?.series)
    } else {
        coh_zseries_to_json(&small_i(&t.target, &t.coh, trunc)?.series)
    };
    Ok(json!({ "command": "ifun", "order": order, "equivariant": equivariant, "series": series }))
}

pub fn mirror(t: &Target, order: u32) -> Result<Value, CliError> {
    let (i, asym) = asymptotics(t, order)?;
    let mm = mirror_map_small(&t.target, &asym, &Epsilon::ZeroPlus)?;
    let mt = mirror_transform(&t.target, &t.coh, &i, &asym)?;
    Ok(json!({
        "command": "mirror",
        "order": order,
        "g0": scalar_novikov_to_json(&mm.g0),
        "g": mm.g.iter().map(scalar_novikov_to_json).collect::<Vec<_>>(),
        "q_of_Q": mt.q_of_q.iter().map(scalar_novikov_to_json).collect::<Vec<_>>(),
        "series": coh_zseries_to_json(&mt.small_j),
    }))
}

pub fn birkhoff(t: &Target, eps: &Epsilon, order: u32) -> Result<Value, CliError> {
    let provider = OracleProvider::new(&t.target, &t.coh, oracle_bound(order)?)?;
    let theory = provider.theory().clone();
    let j = match eps {
        Epsilon::ZeroPlus => project_series(&theory, &small_i(&t.target, &t.coh, Truncation::theta(order))?.series)?,
        Epsilon::Infinity => oracle_small_j(provider.oracle(), order)?,
        Epsilon::Value(_) => {
            return Err(CliError::Validation(format!(
                "the small J-function at epsilon = {eps} is not available; use 0+ or inf"
            )))
        }
    };
    let b = birkhoff_induction(&provider, &j, order)?;
    let residual: Vec<Value> =
        b.residual.iter().map(|(m, e, c)| json!({ "key": mono_json(m), "z_exp": e, "value": coh_json(c) })).collect();
    Ok(json!({
        "command": "birkhoff",
        "epsilon": eps.to_string(),
        "order": order,
        "tau": b.tau.iter().map(scalar_novikov_to_json).collect::<Vec<_>>(),
        "series": coh_zseries_to_json(&b.p),
        "residual": residual,
        "status": status(b.agrees()),
    }))
}

pub fn check_unitarity(t: &Target, order: u32, t_order: u32) -> Result<Value, CliError> {
    let provider = OracleProvider::new(&t.target, &t.coh, oracle_bound(order)?)?;
    let report = unitarity_check(&build_s_matrix(&provider, t_order, order)?);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "pair": [v.pair.0, v.pair.1],
                "key": mono_json(&v.mono),
                "z_exp": v.z_exp,
                "value": v.value.to_json(),
            })
        })
        .collect();
    Ok(json!({
        "command": "check",
        "suite": "unitarity",
        "order": order,
        "t_order": t_order,
        "checked_pairs": report.checked_pairs,
        "violations": violations,
        "status": status(report.holds()),
    }))
}

/// A localizer at integer parameter values away from every vanishing weight.
pub fn generic_localizer(t: &ToricTarget) -> Result<Localizer<'_, Q>, CliError> {
    let mut last = None;
    for attempt in 0..16i64 {
        let lam: Vec<Q> =
            (0..t.n_params() as i64).map(|k| Q::from_i64(k * k * k * 7 + k * (3 + attempt * 11) + attempt)).collect();
        match Localizer::new(t, lam) {
            Ok(loc) => return Ok(loc),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt").into())
}

pub fn check_polynomiality(t: &Target, order: u32, t_order: u32, y_order: usize) -> Result<Value, CliError> {
    if t.target.is_twisted() {
        return Err(CliError::Validation("the polynomiality suite runs on untwisted targets".into()));
    }
    let loc = generic_localizer(&t.target)?;
    let ones = vec![Q::from_i64(1); loc.n_fixed()];
    let lam = loc.params().to_vec();
    let t_classes: Vec<Vec<Q>> = (0..t.target.rank())
        .map(|k| (0..loc.n_fixed()).map(|fp| t.target.p_restriction(fp, k).eval(&lam)).collect())
        .collect();
    let s = equivariant_s_components(&loc, &ones, &t_classes, order, t_order)?;
    let report = polynomiality_check(&s, None, y_order);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "fixed_point": v.fixed_point,
                "key": mono_json(&v.mono),
                "y_power": v.y_power,
                "z_exps": v.z_exponents,
            })
        })
        .collect();
    Ok(json!({
        "command": "check",
        "suite": "polynomiality",
        "order": order,
        "t_order": t_order,
        "y_order": y_order,
        "checked": report.checked,
        "violations": violations,
        "status": status(report.holds()),
    }))
}

/// The semi-positive wall-crossing identities at `t = 0`: Birkhoff factorization of `I`
/// against the oracle gives the mirror map and `P = I₀·1`, and the string transform
/// of the `ε = 0+` brackets gives the same mirror map.
pub fn check_wallcross(t: &Target, order: u32) -> Result<Value, CliError> {
    if !t.target.is_semi_positive() {
        return Err(CliError::Validation("the wallcross suite needs a semi-positive target".into()));
    }
    let (i, asym) = asymptotics(t, order)?;
    let provider = OracleProvider::new(&t.target, &t.coh, oracle_bound(order)?)?;
    let theory = provider.theory().clone();
    let mm = mirror_map_small(&t.target, &asym, &Epsilon::ZeroPlus)?;
    let tau_class = mm.as_class(&theory, &t.coh)?;
    let j = project_series(&theory, &i.series)?;
    let b = birkhoff_induction(&provider, &j, order)?;
    let unit = theory.unit_index();
    let p_is_i0 =
        b.p.entries().all(|(_, e, c)| e == 0 && c.coords().iter().enumerate().all(|(k, x)| k == unit || x.is_zero()))
            && b.p.z_coefficient(0).map(|c| c.coord(unit).clone()) == asym.i0;
    let derived = IDerivedProvider::new(theory.clone(), &i, &asym.i0)?;
    let one =
        NovikovSeries::constant(theory.theta().to_vec(), 0, Truncation::theta(order), CohClass::unit(theory.ring()));
    let st = string_transform(&derived, &one, &Epsilon::ZeroPlus, 0, order)?;
    let checks = [
        ("birkhoff_tau_is_mirror_map", transformation_at_zero(&theory, &b.tau) == tau_class),
        ("p_is_i0_times_unit", p_is_i0),
        ("cone_point_reproduces_j", b.agrees()),
        ("string_transform_is_mirror_map", transformation_at_zero(&theory, &st) == tau_class),
    ];
    let mut m = Map::new();
    for (name, ok) in checks {
        m.insert(name.into(), json!(ok));
    }
    Ok(json!({
        "command": "check",
        "suite": "wallcross",
        "order": order,
        "checks": Value::Object(m),
        "status": status(checks.iter().all(|c| c.1)),
    }))
}

pub fn yukawa(t: &Target, order: u32, bmodel: &str) -> Result<Value, CliError> {
    let (_, asym) = asymptotics(t, order)?;
    let theory = Theory::new(&t.target, &t.coh)?;
    let n = classical_triple(&theory, &t.coh)?;
    let theta = *t.target.theta().first().ok_or_else(|| CliError::Validation("empty theta".into()))?;
    let y = parse_series(bmodel, theta, order)?;
    let k = yukawa_cy3(&t.target, &theory, &asym, &n, &y)?;
    Ok(json!({ "command": "yukawa", "order": order, "bmodel": bmodel, "series": scalar_novikov_to_json(&k) }))
}

/// Parses `1,0` or `3` into a curve class of the given rank.
pub fn parse_class(text: &str, rank: usize) -> Result<Vec<i64>, CliError> {
    let beta = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| CliError::Validation(format!("bad degree '{text}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if beta.len() != rank {
        return Err(CliError::Validation(format!("degree '{text}' needs {rank} components")));
    }
    Ok(beta)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn psi_powers(psi: Option<&str>, n: usize) -> Result<Vec<u32>, CliError> {
    let Some(p) = psi else { return Ok(vec![0; n]) };
    let v = split_list(p)
        .iter()
        .map(|s| s.parse::<u32>().map_err(|_| CliError::Validation(format!("bad psi power '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(CliError::Validation(format!("{} psi powers for {n} insertions", v.len())));
    }
    Ok(v)
}

/// `pt` is the class integrating to 1; other names are basis monomials such as `1`, `H`, `H^2`, `p1*p2`.
fn state_class(o: &GraphSumOracle, name: &str) -> Result<CohClass<Q>, CliError> {
    let ring = o.space().ring();
    if name == "pt" {
        let top = (0..ring.dim()).max_by_key(|&i| o.space().degree(i)).expect("nonempty basis");
        let b = CohClass::basis(ring, top);
        let inv = b.integral().inverse().ok_or_else(|| CliError::Validation("degenerate point class".into()))?;
        return Ok(b.map_scalars(|x| x * &inv));
    }
    let i =
        ring.names().iter().position(|n| n == name).ok_or_else(|| {
            CliError::Validation(format!("unknown class '{name}'; basis is {:?} or pt", ring.names()))
        })?;
    Ok(CohClass::basis(ring, i))
}

pub fn gw(
    t: &Target,
    degree: &str,
    insertions: &str,
    psi: Option<&str>,
    non_equivariant: bool,
) -> Result<Value, CliError> {
    let beta = parse_class(degree, t.target.rank())?;
    let names = split_list(insertions);
    let powers = psi_powers(psi, names.len())?;
    let d = t.target.ltheta(&beta);
    let bound = oracle_bound(d.max(0) as u32)?;
    let value = if non_equivariant {
        let o = GraphSumOracle::new(&t.target, &t.coh)?.with_bound(bound);
        let ins = names
            .iter()
            .zip(&powers)
            .map(|(n, &a)| Ok((state_class(&o, n)?, a)))
            .collect::<Result<Vec<_>, CliError>>()?;
        o.invariant_of(&ins, &beta)?.to_json()
    } else {
        if d > bound {
            return Err(CliError::Validation(format!("degree {d} exceeds the oracle bound {bound}")));
        }
        let loc = Localizer::new(&t.target, symbolic_params(&t.target))?;
        let ambient = t.coh.ring();
        let mut marks = Vec::with_capacity(names.len());
        for (n, &a) in names.iter().zip(&powers) {
            let values = if n == "pt" {
                let w = loc
                    .pairing_weight(0)
                    .inverse()
                    .ok_or_else(|| CliError::Validation("zero pairing weight".into()))?;
                (0..loc.n_fixed()).map(|fp| if fp == 0 { w.clone() } else { RatFunc::zero() }).collect()
            } else {
                let i = ambient.names().iter().position(|x| x == n).ok_or_else(|| {
                    CliError::Validation(format!("unknown class '{n}'; basis is {:?} or pt", ambient.names()))
                })?;
                loc.monomial_values(&t.coh.basis_exponents()[i])
            };
            marks.push(Insertion::new(values, Psi::Power(a)));
        }
        let zero_class = beta.iter().all(|&b| b == 0);
        if zero_class && marks.len() < 3 {
            return Err(CliError::Validation("degree-zero invariants need at least three insertions".into()));
        }
        let v = loc.bracket(&marks, &beta)?;
        v.constant_value().ok_or_else(|| CliError::Inconsistent("bracket depends on z".into()))?.to_json()
    };
    Ok(json!({
        "command": "gw",
        "degree": beta,
        "insertions": names,
        "psi": powers,
        "equivariant": !non_equivariant,
        "value": value,
    }))
}

pub fn oracle_j(t: &Target, dmax: u32) -> Result<Value, CliError> {
    let o = GraphSumOracle::new(&t.target, &t.coh)?.with_bound(oracle_bound(dmax)?);
    Ok(json!({ "command": "oracle-j", "dmax": dmax, "series": coh_zseries_to_json(&oracle_small_j(&o, dmax)?) }))
}
