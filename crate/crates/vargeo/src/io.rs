//! Serialization helpers: exact rationals travel as strings, cones are
//! emitted with both representations for auditability.

use crate::cones::{ConeUnion, ConvexCone, ConvexPolyhedron, PolyhedronUnion};
use crate::rat::{rat_to_string, Rat, RatVec};
use serde_json::{json, Value};

/// Serde adapter: a `Rat` field as the canonical `"p/q"` string.
pub mod rat_string {
    use crate::rat::{rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::rat_from_value(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod rat_vec_string {
    use crate::rat::{rat_to_string, Rat, RatVec};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &RatVec, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatVec, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.iter()
            .map(|v| super::rat_from_value(v).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<Rat>, _>>()
    }
}

/// Exact rational from a JSON value. Strings `"p/q"` and integer numbers
/// are accepted; float literals are rejected (exactness firewall).
pub fn rat_from_value(v: &Value) -> Result<Rat, String> {
    match v {
        Value::String(s) => crate::rat::parse_rat(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::rat::rint(i))
            } else {
                Err(format!("float literal {n} not allowed in exact field"))
            }
        }
        other => Err(format!("expected rational, got {other}")),
    }
}

pub fn rat_vec_from_value(v: &Value) -> Result<RatVec, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("expected array of rationals, got {v}"))?;
    arr.iter().map(rat_from_value).collect()
}

pub fn vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_to_string(x))).collect())
}

pub fn vecs_json(vs: &[RatVec]) -> Value {
    Value::Array(vs.iter().map(|v| vec_json(v)).collect())
}

pub fn cone_json(c: &ConvexCone) -> Value {
    json!({
        "dim": c.dim,
        "hrep": { "equalities": vecs_json(&c.eqs), "inequalities": vecs_json(&c.ineqs) },
        "vrep": { "lineality": vecs_json(&c.lineality), "rays": vecs_json(&c.rays) },
    })
}

pub fn cone_union_json(u: &ConeUnion) -> Value {
    json!({
        "dim": u.dim,
        "pieces": u.pieces.iter().map(cone_json).collect::<Vec<_>>(),
    })
}

pub fn polyhedron_json(p: &ConvexPolyhedron) -> Value {
    let aff = |rows: &[(RatVec, Rat)]| -> Value {
        Value::Array(
            rows.iter()
                .map(|(row, rhs)| json!({"row": vec_json(row), "rhs": rat_to_string(rhs)}))
                .collect(),
        )
    };
    json!({
        "dim": p.dim,
        "empty": p.empty,
        "hrep": { "equalities": aff(&p.eqs), "inequalities": aff(&p.ineqs) },
        "vrep": {
            "points": vecs_json(&p.points),
            "rays": vecs_json(&p.rays),
            "lineality": vecs_json(&p.lineality),
        },
    })
}

pub fn polyhedron_union_json(u: &PolyhedronUnion) -> Value {
    json!({
        "dim": u.dim,
        "pieces": u.pieces.iter().map(polyhedron_json).collect::<Vec<_>>(),
    })
}
