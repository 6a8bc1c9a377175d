//! Minimal structural JSON Schema checker covering the keyword subset used
//! by the schemas shipped under /schemas: `type`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `enum`, `minimum`, `minItems`,
//! `maxItems`, and same-document `$ref` into `$defs`.

use serde_json::Value;

pub fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    check(schema, schema, value, "$")
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Result<&'a Value, String> {
    let path = reference
        .strip_prefix("#/")
        .ok_or_else(|| format!("unsupported $ref {reference:?}"))?;
    let mut node = root;
    for key in path.split('/') {
        node = node
            .get(key)
            .ok_or_else(|| format!("dangling $ref {reference:?} at {key:?}"))?;
    }
    Ok(node)
}

fn type_matches(name: &str, value: &Value) -> bool {
    match name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn check(root: &Value, schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    let obj = schema
        .as_object()
        .ok_or_else(|| format!("schema node at {path} is not an object"))?;

    if let Some(reference) = obj.get("$ref").and_then(Value::as_str) {
        return check(root, resolve(root, reference)?, value, path);
    }

    if let Some(ty) = obj.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("bad type keyword at {path}")),
        };
        if !names.iter().any(|n| type_matches(n, value)) {
            return Err(format!("{path}: expected {names:?}, got {value}"));
        }
        // A null value satisfies a nullable union with no further checks.
        if value.is_null() && names.contains(&"null") {
            return Ok(());
        }
    }

    if let Some(allowed) = obj.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{path}: {value} not in {allowed:?}"));
        }
    }

    if let Some(min) = obj.get("minimum").and_then(Value::as_i64) {
        let got = value
            .as_i64()
            .ok_or_else(|| format!("{path}: minimum on non-integer {value}"))?;
        if got < min {
            return Err(format!("{path}: {got} below minimum {min}"));
        }
    }

    if let Some(map) = value.as_object() {
        if let Some(required) = obj.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !map.contains_key(key) {
                    return Err(format!("{path}: missing required key {key:?}"));
                }
            }
        }
        let props = obj.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (key, sub) in props {
                if let Some(v) = map.get(key) {
                    check(root, sub, v, &format!("{path}.{key}"))?;
                }
            }
        }
        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in map.keys() {
                if !props.is_some_and(|p| p.contains_key(key)) {
                    return Err(format!("{path}: unexpected key {key:?}"));
                }
            }
        }
    }

    if let Some(items) = value.as_array() {
        if let Some(min) = obj.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                return Err(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = obj.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > max {
                return Err(format!("{path}: more than {max} items"));
            }
        }
        if let Some(item_schema) = obj.get("items") {
            for (i, item) in items.iter().enumerate() {
                check(root, item_schema, item, &format!("{path}[{i}]"))?;
            }
        }
    }

    Ok(())
}
