use num_bigint::BigInt;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::FormatError;
use crate::bigjson::{from_number, to_number};
use crate::fan::Fan;

/// Structurally well-formed fan document: rectangular ray data of the declared
/// rank and in-range cone indices. Fan axioms are checked later.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FanDocument {
    pub name: String,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanDocument {
    pub fn to_fan(&self) -> Fan {
        Fan::new(
            (!self.name.is_empty()).then(|| self.name.clone()),
            self.lattice_rank,
            self.rays.clone(),
            self.max_cones.clone(),
        )
    }

    pub fn from_fan(fan: &Fan) -> Self {
        Self {
            name: fan.name.clone().unwrap_or_default(),
            lattice_rank: fan.lattice_rank,
            rays: fan.rays.clone(),
            max_cones: fan.max_cones.clone(),
        }
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn expect_integer(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => from_number(n).map_err(|e| schema(path, e)),
        other => Err(schema(path, format!("expected an integer, found {}", kind(other)))),
    }
}

fn expect_index(v: &Value, path: &str) -> Result<usize, FormatError> {
    let x = expect_integer(v, path)?;
    usize::try_from(&x).map_err(|_| schema(path, format!("expected a non-negative index, found {x}")))
}

fn expect_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| schema(path, format!("expected an array, found {}", kind(v))))
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub fn parse_fan(text: &str) -> Result<FanDocument, FormatError> {
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj: &Map<String, Value> = value
        .as_object()
        .ok_or_else(|| schema("$", format!("expected an object, found {}", kind(&value))))?;

    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "lattice_rank" | "rays" | "max_cones") && !key.starts_with("x-") {
            return Err(schema(key.as_str(), "unknown field (extensions must start with \"x-\")"));
        }
    }

    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(schema("name", format!("expected a string, found {}", kind(other)))),
    };
    let lattice_rank = expect_index(
        obj.get("lattice_rank").ok_or_else(|| schema("lattice_rank", "missing field"))?,
        "lattice_rank",
    )?;

    let rays_value = obj.get("rays").ok_or_else(|| schema("rays", "missing field"))?;
    let mut rays = Vec::new();
    for (i, ray) in expect_array(rays_value, "rays")?.iter().enumerate() {
        let path = format!("rays[{i}]");
        let coords = expect_array(ray, &path)?;
        if coords.len() != lattice_rank {
            return Err(schema(
                &path,
                format!("ray has {} coordinates, lattice rank is {lattice_rank}", coords.len()),
            ));
        }
        rays.push(
            coords
                .iter()
                .enumerate()
                .map(|(j, c)| expect_integer(c, &format!("{path}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    let cones_value = obj.get("max_cones").ok_or_else(|| schema("max_cones", "missing field"))?;
    let mut max_cones = Vec::new();
    for (i, cone) in expect_array(cones_value, "max_cones")?.iter().enumerate() {
        let path = format!("max_cones[{i}]");
        let mut indices = Vec::new();
        for (j, idx) in expect_array(cone, &path)?.iter().enumerate() {
            let p = format!("{path}[{j}]");
            let r = expect_index(idx, &p)?;
            if r >= rays.len() {
                return Err(schema(p, format!("ray index {r} out of range ({} rays)", rays.len())));
            }
            indices.push(r);
        }
        max_cones.push(indices);
    }

    Ok(FanDocument {
        name,
        lattice_rank,
        rays,
        max_cones,
    })
}

/// Sorts rays lexicographically (remapping cone indices), sorts each cone's
/// indices, then sorts the cones.
pub fn canonicalize(doc: &FanDocument) -> FanDocument {
    let mut order: Vec<usize> = (0..doc.rays.len()).collect();
    order.sort_by(|&a, &b| doc.rays[a].cmp(&doc.rays[b]).then(a.cmp(&b)));
    let mut new_index = vec![0; doc.rays.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let rays = order.iter().map(|&i| doc.rays[i].clone()).collect();
    let mut max_cones: Vec<Vec<usize>> = doc
        .max_cones
        .iter()
        .map(|c| {
            let mut c: Vec<usize> = c.iter().map(|&r| new_index[r]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    max_cones.sort();
    FanDocument {
        name: doc.name.clone(),
        lattice_rank: doc.lattice_rank,
        rays,
        max_cones,
    }
}

/// Canonical text: canonical ordering, fixed key order, no whitespace.
pub fn serialize_fan(doc: &FanDocument) -> String {
    let doc = canonicalize(doc);
    let rays: Vec<Value> = doc
        .rays
        .iter()
        .map(|r| Value::Array(r.iter().map(|x| Value::Number(to_number(x))).collect()))
        .collect();
    let cones: Vec<Value> = doc
        .max_cones
        .iter()
        .map(|c| Value::Array(c.iter().map(|&i| Value::from(i)).collect()))
        .collect();
    format!(
        "{{\"name\":{},\"lattice_rank\":{},\"rays\":{},\"max_cones\":{}}}",
        Value::String(doc.name.clone()),
        doc.lattice_rank,
        Value::Array(rays),
        Value::Array(cones),
    )
}

/// Content hash identifying a fan up to ordering of rays and cones. The name
/// is not part of the identity.
pub fn subject_hash(fan: &Fan) -> String {
    let mut doc = FanDocument::from_fan(fan);
    doc.name.clear();
    let digest = Sha256::digest(serialize_fan(&doc).as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Fan of the product variety: rays of `a` padded with zeros, rays of `b`
/// prefixed with zeros, cones all unions of a cone of `a` with a cone of `b`.
pub fn product_fan(a: &FanDocument, b: &FanDocument) -> FanDocument {
    let (na, nb) = (a.lattice_rank, b.lattice_rank);
    let zero = || BigInt::from(0);
    let rays = a
        .rays
        .iter()
        .map(|r| r.iter().cloned().chain((0..nb).map(|_| zero())).collect())
        .chain(
            b.rays
                .iter()
                .map(|r| (0..na).map(|_| zero()).chain(r.iter().cloned()).collect()),
        )
        .collect();
    let sole_zero_cone = vec![Vec::new()];
    let cones_a = if a.max_cones.is_empty() { &sole_zero_cone } else { &a.max_cones };
    let cones_b = if b.max_cones.is_empty() { &sole_zero_cone } else { &b.max_cones };
    let offset = a.rays.len();
    let max_cones = cones_a
        .iter()
        .flat_map(|ca| {
            cones_b
                .iter()
                .map(move |cb| ca.iter().copied().chain(cb.iter().map(|&r| r + offset)).collect())
        })
        .collect();
    FanDocument {
        name: format!("{}*{}", a.name, b.name),
        lattice_rank: na + nb,
        rays,
        max_cones,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: &str = r#"{"name":"P2","lattice_rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#;

    #[test]
    fn parses_p2() {
        let d = parse_fan(P2).unwrap();
        assert_eq!(d.name, "P2");
        assert_eq!(d.lattice_rank, 2);
        assert_eq!(d.rays[2], vec![BigInt::from(-1), BigInt::from(-1)]);
        assert_eq!(d.max_cones, vec![vec![0, 1], vec![1, 2], vec![2, 0]]);
    }

    #[test]
    fn float_literal_is_schema_error() {
        let err = parse_fan(r#"{"lattice_rank":2,"rays":[[1,0.5]],"max_cones":[[0]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Schema { ref path, .. } if path == "rays[0][1]"), "{err}");
    }

    #[test]
    fn index_out_of_range_is_schema_error() {
        let err = parse_fan(r#"{"lattice_rank":2,"rays":[[1,0]],"max_cones":[[0,1]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Schema { ref path, .. } if path == "max_cones[0][1]"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_fan("{\n  \"lattice_rank\": 2,\n  oops\n}").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_fields_and_extensions() {
        let err = parse_fan(r#"{"lattice_rank":0,"rays":[],"max_cones":[],"colour":"red"}"#).unwrap_err();
        assert!(matches!(err, FormatError::Schema { ref path, .. } if path == "colour"));
        let d = parse_fan(r#"{"lattice_rank":0,"rays":[],"max_cones":[],"x-colour":"red"}"#).unwrap();
        assert_eq!(d.lattice_rank, 0);
    }

    #[test]
    fn ragged_and_missing() {
        assert!(parse_fan(r#"{"lattice_rank":2,"rays":[[1,0],[1]],"max_cones":[]}"#).is_err());
        assert!(parse_fan(r#"{"lattice_rank":2,"max_cones":[]}"#).is_err());
        assert!(parse_fan(r#"{"lattice_rank":-1,"rays":[],"max_cones":[]}"#).is_err());
        assert!(parse_fan(r#"[1,2]"#).is_err());
    }

    #[test]
    fn shuffled_p2_serializes_identically() {
        let a = parse_fan(P2).unwrap();
        let b = parse_fan(
            r#"{"name":"P2","lattice_rank":2,"rays":[[-1,-1],[1,0],[0,1]],"max_cones":[[2,0],[0,1],[1,2]]}"#,
        )
        .unwrap();
        assert_eq!(serialize_fan(&a), serialize_fan(&b));
        assert_eq!(
            serialize_fan(&a),
            r#"{"name":"P2","lattice_rank":2,"rays":[[-1,-1],[0,1],[1,0]],"max_cones":[[0,1],[0,2],[1,2]]}"#
        );
    }

    #[test]
    fn empty_fan_text() {
        let d = FanDocument { name: "T2".into(), lattice_rank: 2, rays: vec![], max_cones: vec![vec![]] };
        assert_eq!(serialize_fan(&d), r#"{"name":"T2","lattice_rank":2,"rays":[],"max_cones":[[]]}"#);
    }

    #[test]
    fn big_coordinates_survive() {
        let text = r#"{"name":"","lattice_rank":1,"rays":[[-98765432109876543210987654321]],"max_cones":[[0]]}"#;
        assert_eq!(serialize_fan(&parse_fan(text).unwrap()), text);
    }

    #[test]
    fn hash_ignores_name_and_order() {
        let a = parse_fan(P2).unwrap();
        let mut b = canonicalize(&a);
        b.name = "renamed".into();
        assert_eq!(subject_hash(&a.to_fan()), subject_hash(&b.to_fan()));
        assert!(subject_hash(&a.to_fan()).starts_with("sha256:"));
    }
}
