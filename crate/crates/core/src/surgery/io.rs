//! JSON form of a presentation.
//!
//! ```json
//! {"base": "S3",
//!  "components": [{"annulus_with": null, "coeff": "-1/3", "curve": "knot(T(2,3))",
//!                  "id": 0, "linking": {"1": "1"}, "surface_framing": null}, ...]}
//! ```
//!
//! Integers and coefficients are written as strings and accepted as either
//! strings or JSON numbers. Linking must be listed symmetrically; omitted
//! entries are zero.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Component, ComponentId, CurveSpec, SurgeryError, SurgeryPresentation};
use crate::manifold::ManifoldExpr;
use crate::{Integer, Rational};

fn err(m: impl Into<String>) -> SurgeryError {
    SurgeryError::Parse(m.into())
}

fn scalar_text(v: &Value, what: &str) -> Result<String, SurgeryError> {
    match v {
        Value::String(s) => Ok(s.trim().to_string()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(err(format!("{what}: expected an integer or string, got {other}"))),
    }
}

fn parse_integer(v: &Value, what: &str) -> Result<Integer, SurgeryError> {
    let s = scalar_text(v, what)?;
    s.parse().map_err(|_| err(format!("{what}: {s:?} is not an integer")))
}

fn parse_id(v: &Value, what: &str) -> Result<ComponentId, SurgeryError> {
    let s = scalar_text(v, what)?;
    s.parse().map_err(|_| err(format!("{what}: {s:?} is not a component id")))
}

fn parse_rational(v: &Value, what: &str) -> Result<Rational, SurgeryError> {
    let s = scalar_text(v, what)?;
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.as_str(), "1"),
    };
    let num: Integer = num.parse().map_err(|_| err(format!("{what}: bad numerator in {s:?}")))?;
    let den: Integer = den.parse().map_err(|_| err(format!("{what}: bad denominator in {s:?}")))?;
    if den == Integer::from(0) {
        return Err(err(format!("{what}: zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

impl SurgeryPresentation {
    pub fn to_json(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let linking: Map<String, Value> = self
                    .ids()
                    .into_iter()
                    .filter_map(|o| {
                        let lk = self.linking(c.id, o);
                        (lk != Integer::from(0)).then(|| (o.to_string(), Value::String(lk.to_string())))
                    })
                    .collect();
                json!({
                    "annulus_with": c.annulus_with,
                    "coeff": c.coeff.to_string(),
                    "curve": c.curve.to_string(),
                    "id": c.id,
                    "linking": linking,
                    "surface_framing": c.surface_framing.as_ref().map(|f| f.to_string()),
                })
            })
            .collect();
        json!({ "base": self.base.to_string(), "components": components })
    }

    pub fn from_json(v: &Value) -> Result<Self, SurgeryError> {
        let obj = v.as_object().ok_or_else(|| err("top level must be an object"))?;
        let base = match obj.get("base") {
            None | Some(Value::Null) => ManifoldExpr::Sphere,
            Some(Value::String(s)) => s.parse().map_err(|e| err(format!("base: {e}")))?,
            Some(other) => return Err(err(format!("base: expected a string, got {other}"))),
        };
        let list = obj
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing \"components\" array"))?;
        let mut p = SurgeryPresentation::over(base);
        let mut links: BTreeMap<(ComponentId, ComponentId), Integer> = BTreeMap::new();
        for (i, item) in list.iter().enumerate() {
            let c = item.as_object().ok_or_else(|| err(format!("component {i} is not an object")))?;
            let field = |k: &str| c.get(k).filter(|v| !v.is_null());
            let id = match field("id") {
                Some(v) => parse_id(v, "id")?,
                None => i as ComponentId,
            };
            let curve: CurveSpec = field("curve")
                .and_then(Value::as_str)
                .ok_or_else(|| err(format!("component {id}: missing curve")))?
                .parse()
                .map_err(|e: String| err(format!("component {id}: {e}")))?;
            let coeff = parse_rational(
                field("coeff").ok_or_else(|| err(format!("component {id}: missing coeff")))?,
                &format!("component {id} coeff"),
            )?;
            let mut comp = Component::new(id, curve, coeff);
            if let Some(v) = field("surface_framing") {
                comp.surface_framing = Some(parse_integer(v, "surface_framing")?);
            }
            if let Some(v) = field("annulus_with") {
                comp.annulus_with = Some(parse_id(v, "annulus_with")?);
            }
            if let Some(l) = field("linking") {
                let l = l.as_object().ok_or_else(|| err(format!("component {id}: linking must be an object")))?;
                for (k, v) in l {
                    let other: ComponentId =
                        k.parse().map_err(|_| err(format!("component {id}: bad linking key {k:?}")))?;
                    if other == id {
                        return Err(err(format!("component {id} lists a self-linking entry")));
                    }
                    links.insert((id, other), parse_integer(v, "linking")?);
                }
            }
            p.push(comp).map_err(|e| err(e.to_string()))?;
        }
        let zero = Integer::from(0);
        for ((a, b), v) in &links {
            let back = links.get(&(*b, *a)).unwrap_or(&zero);
            if back != v {
                return Err(err(format!("asymmetric linking: lk({a},{b}) = {v} but lk({b},{a}) = {back}")));
            }
            if p.get(*b).is_none() {
                return Err(err(format!("component {a} links missing component {b}")));
            }
            if a < b {
                p.set_linking(*a, *b, v.clone());
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self, SurgeryError> {
        let v: Value = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::{build_brunnian, build_jlink, integerize, rational};

    #[test]
    fn round_trip() {
        let mut samples = vec![
            build_jlink(&[vec![0, 3], vec![3, 0]], &[1, -2], &[4, 5]).unwrap(),
            build_brunnian(5).unwrap(),
            SurgeryPresentation::empty(),
        ];
        let mut q = SurgeryPresentation::over("S3(T(2,3), 1)".parse().unwrap());
        let k = q.add(CurveSpec::Knot("mT(2,5)".parse().unwrap()), rational(-7, 3));
        q.get_mut(k).unwrap().surface_framing = Some(Integer::from(-4));
        samples.push(integerize(&q));
        for p in samples {
            let text = p.to_json().to_string();
            assert_eq!(SurgeryPresentation::from_json_str(&text).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn keys_are_sorted_and_numbers_are_strings() {
        let p = build_jlink(&[vec![0]], &[2], &[3]).unwrap();
        let text = p.to_json().to_string();
        assert!(text.starts_with("{\"base\":\"S3\",\"components\":[{\"annulus_with\":1,\"coeff\":\"2\""));
    }

    #[test]
    fn accepts_numbers_and_rejects_asymmetry() {
        let ok = r#"{"components":[{"id":0,"curve":"unlink","coeff":1,"linking":{"1":2}},
                                   {"id":1,"curve":"unlink","coeff":"1/2","linking":{"0":"2"}}]}"#;
        let p = SurgeryPresentation::from_json_str(ok).unwrap();
        assert_eq!(p.linking(0, 1), Integer::from(2));
        assert_eq!(p.component(1).unwrap().coeff, rational(1, 2));
        let bad = r#"{"components":[{"id":0,"curve":"unlink","coeff":1,"linking":{"1":2}},
                                    {"id":1,"curve":"unlink","coeff":1}]}"#;
        assert!(SurgeryPresentation::from_json_str(bad).is_err());
        let zero_den = r#"{"components":[{"curve":"unlink","coeff":"1/0"}]}"#;
        assert!(SurgeryPresentation::from_json_str(zero_den).is_err());
        assert!(SurgeryPresentation::from_json_str("[]").is_err());
    }
}
