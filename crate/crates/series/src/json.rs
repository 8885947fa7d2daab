//! Canonical JSON for series.
//!
//! A series is an object carrying its grading and truncation plus a `terms`
//! list of `{beta, t_exp, z_exp, value}` records in key order. Rationals are
//! always strings, so the encoding is exact and byte-for-byte deterministic.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::coh::{CohClass, CohRing};
use crate::error::SeriesError;
use crate::field::{Coeff, Field};
use crate::series::{Mono, NovikovSeries, Truncation, ZSeries};

fn trunc_to_json(t: &Truncation) -> Value {
    json!({
        "max_theta_degree": t.max_theta_degree,
        "max_t_degree": t.max_t_degree,
        "z_window": [t.z_min, t.z_max],
    })
}

fn trunc_from_json(v: &Value) -> Result<Truncation, SeriesError> {
    let num =
        |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| SeriesError::Parse(format!("truncation missing {k}")));
    let w = v
        .get("z_window")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| SeriesError::Parse("truncation missing z_window".into()))?;
    let zi = |x: &Value| x.as_i64().map(|i| i as i32).ok_or_else(|| SeriesError::Parse("bad z bound".into()));
    Truncation::new(num("max_theta_degree")? as u32, num("max_t_degree")? as u32, zi(&w[0])?, zi(&w[1])?)
}

fn ints(v: &Value, key: &str) -> Result<Vec<i64>, SeriesError> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| SeriesError::Parse(format!("missing {key}")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| SeriesError::Parse(format!("non-integer in {key}"))))
        .collect()
}

fn header(theta: &[i64], n_t: usize, t: &Truncation) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("theta".into(), json!(theta));
    m.insert("n_t".into(), json!(n_t));
    m.insert("truncation".into(), trunc_to_json(t));
    m
}

fn term(m: &Mono, z: Option<i32>, value: Value) -> Value {
    let mut o = Map::new();
    o.insert("beta".into(), json!(m.beta));
    o.insert("t_exp".into(), json!(m.t));
    if let Some(z) = z {
        o.insert("z_exp".into(), json!(z));
    }
    o.insert("value".into(), value);
    Value::Object(o)
}

struct Header {
    theta: Vec<i64>,
    n_t: usize,
    trunc: Truncation,
}

fn parse_header(v: &Value) -> Result<Header, SeriesError> {
    Ok(Header {
        theta: ints(v, "theta")?,
        n_t: v.get("n_t").and_then(Value::as_u64).ok_or_else(|| SeriesError::Parse("missing n_t".into()))? as usize,
        trunc: trunc_from_json(v.get("truncation").ok_or_else(|| SeriesError::Parse("missing truncation".into()))?)?,
    })
}

fn parse_terms(v: &Value) -> Result<&Vec<Value>, SeriesError> {
    v.get("terms").and_then(Value::as_array).ok_or_else(|| SeriesError::Parse("missing terms".into()))
}

fn parse_mono(t: &Value) -> Result<Mono, SeriesError> {
    let beta = ints(t, "beta")?;
    let texp = ints(t, "t_exp")?.into_iter().map(|x| x as u32).collect();
    Ok(Mono { beta, t: texp })
}

pub fn novikov_to_json<V: Coeff>(s: &NovikovSeries<V>, value: impl Fn(&V) -> Value) -> Value {
    let mut m = header(s.theta(), s.n_t(), &s.truncation());
    m.insert("terms".into(), Value::Array(s.iter().map(|(k, v)| term(k, None, value(v))).collect()));
    Value::Object(m)
}

pub fn novikov_from_json<V: Coeff>(
    v: &Value,
    value: impl Fn(&Value) -> Result<V, SeriesError>,
) -> Result<NovikovSeries<V>, SeriesError> {
    let h = parse_header(v)?;
    let mut s = NovikovSeries::new(h.theta, h.n_t, h.trunc);
    for t in parse_terms(v)? {
        let val = value(t.get("value").ok_or_else(|| SeriesError::Parse("term missing value".into()))?)?;
        s.add_term(parse_mono(t)?, val);
    }
    Ok(s)
}

pub fn zseries_to_json<V: Coeff>(s: &ZSeries<V>, value: impl Fn(&V) -> Value) -> Value {
    let mut m = header(s.theta(), s.n_t(), &s.truncation());
    m.insert("terms".into(), Value::Array(s.entries().map(|(k, e, v)| term(k, Some(e), value(v))).collect()));
    Value::Object(m)
}

pub fn zseries_from_json<V: Coeff>(
    v: &Value,
    value: impl Fn(&Value) -> Result<V, SeriesError>,
) -> Result<ZSeries<V>, SeriesError> {
    let h = parse_header(v)?;
    let mut s = ZSeries::new(h.theta, h.n_t, h.trunc);
    for t in parse_terms(v)? {
        let e =
            t.get("z_exp").and_then(Value::as_i64).ok_or_else(|| SeriesError::Parse("term missing z_exp".into()))?;
        let val = value(t.get("value").ok_or_else(|| SeriesError::Parse("term missing value".into()))?)?;
        s.add_term(parse_mono(t)?, e as i32, val);
    }
    Ok(s)
}

/// Cohomology classes serialize as a name-to-scalar object over nonzero coordinates.
pub fn coh_to_json<F: Field>(c: &CohClass<F>) -> Value {
    let mut m = Map::new();
    for (name, x) in c.ring().names().iter().zip(c.coords()) {
        if !x.is_zero() {
            m.insert(name.clone(), x.to_json());
        }
    }
    Value::Object(m)
}

pub fn coh_from_json<F: Field>(ring: &Arc<CohRing<F>>, v: &Value) -> Result<CohClass<F>, SeriesError> {
    let obj = v.as_object().ok_or_else(|| SeriesError::Parse("class must be an object".into()))?;
    let mut coords = vec![F::zero(); ring.dim()];
    for (k, x) in obj {
        let i = ring
            .names()
            .iter()
            .position(|n| n == k)
            .ok_or_else(|| SeriesError::Parse(format!("unknown basis element {k}")))?;
        coords[i] = F::from_json(x)?;
    }
    CohClass::new(ring.clone(), coords)
}

pub fn scalar_novikov_to_json<F: Field>(s: &NovikovSeries<F>) -> Value {
    novikov_to_json(s, F::to_json)
}

pub fn scalar_novikov_from_json<F: Field>(v: &Value) -> Result<NovikovSeries<F>, SeriesError> {
    novikov_from_json(v, F::from_json)
}

pub fn scalar_zseries_to_json<F: Field>(s: &ZSeries<F>) -> Value {
    zseries_to_json(s, F::to_json)
}

pub fn scalar_zseries_from_json<F: Field>(v: &Value) -> Result<ZSeries<F>, SeriesError> {
    zseries_from_json(v, F::from_json)
}

pub fn coh_zseries_to_json<F: Field>(s: &ZSeries<CohClass<F>>) -> Value {
    zseries_to_json(s, coh_to_json)
}

pub fn coh_zseries_from_json<F: Field>(ring: &Arc<CohRing<F>>, v: &Value) -> Result<ZSeries<CohClass<F>>, SeriesError> {
    zseries_from_json(v, |x| coh_from_json(ring, x))
}
