//! JSON bundles for tabulated operads.
//!
//! ```text
//! {"flavor": "symmetric" | "braided" | "mixed2" | "n2",
//!  "bound": 2, "unit": 0,
//!  "carriers": {"<object>": ["label", …]},
//!  "actions": {"<arity>": [[image, …], …]},
//!  "mult": {"<morphism>": nested index arrays}}
//! ```
//!
//! Objects are `"m"` for `[m]`, or `"arity:l0,l1,…"` for n-ordinals.
//! Morphisms are fiber sizes `"1+2"`, or `"<object>-><object>/f0,f1,…"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{index_ordinal, FiniteOperad, Flavor, Operad, OperadError, Table};
use crate::maps::{make_map, OrdinalMap};
use crate::ordinal::NOrdinal;

fn bad(msg: impl Into<String>) -> OperadError {
    OperadError::MalformedBundle(msg.into())
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn object_key(flavor: Flavor, t: &NOrdinal) -> String {
    if flavor.has_actions() {
        (t.arity() - 1).to_string()
    } else {
        format!("{}:{}", t.arity(), join(t.levels(), ","))
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>, OperadError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad(format!("bad number {x:?}")))).collect()
}

fn parse_object(flavor: Flavor, s: &str) -> Result<NOrdinal, OperadError> {
    if flavor.has_actions() {
        let m: usize = s.parse().map_err(|_| bad(format!("bad object {s:?}")))?;
        return Ok(index_ordinal(flavor, m + 1));
    }
    let (arity, levels) = s.split_once(':').ok_or_else(|| bad(format!("bad object {s:?}")))?;
    let arity: usize = arity.parse().map_err(|_| bad(format!("bad arity in {s:?}")))?;
    let levels: Vec<i32> = parse_list(levels)?.into_iter().map(|l| l as i32).collect();
    if arity == 0 || levels.len() + 1 != arity {
        return Err(bad(format!("arity and levels disagree in {s:?}")));
    }
    Ok(NOrdinal::new(flavor.domain(), levels)?)
}

fn map_key(flavor: Flavor, m: &OrdinalMap) -> String {
    if flavor.has_actions() {
        join(&m.fiber_sizes(), "+")
    } else {
        format!("{}->{}/{}", object_key(flavor, m.source()), object_key(flavor, m.target()), join(m.table(), ","))
    }
}

fn parse_map(flavor: Flavor, s: &str) -> Result<OrdinalMap, OperadError> {
    if flavor.has_actions() {
        let sizes = s
            .split('+')
            .map(|x| x.parse::<usize>().map_err(|_| bad(format!("bad fiber size in {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        return super::op_surjection(&sizes);
    }
    let (objs, f) = s.split_once('/').ok_or_else(|| bad(format!("bad morphism {s:?}")))?;
    let (src, dst) = objs.split_once("->").ok_or_else(|| bad(format!("bad morphism {s:?}")))?;
    let f: Vec<usize> = parse_list(f)?.into_iter().map(|x| x as usize).collect();
    Ok(make_map(&parse_object(flavor, src)?, &parse_object(flavor, dst)?, f)?)
}

fn nest(data: &[u32], dims: &[usize]) -> Value {
    if dims.len() <= 1 {
        return json!(data);
    }
    let stride: usize = dims[1..].iter().product();
    Value::Array(data.chunks(stride.max(1)).map(|c| nest(c, &dims[1..])).collect())
}

fn flatten(v: &Value, dims: &[usize], out: &mut Vec<u32>) -> Result<(), OperadError> {
    let arr = v.as_array().ok_or_else(|| bad("table entry is not an array"))?;
    if arr.len() != dims[0] {
        return Err(bad(format!("table level has {} entries, expected {}", arr.len(), dims[0])));
    }
    for x in arr {
        if dims.len() == 1 {
            let y = x.as_u64().filter(|&y| y <= u32::MAX as u64).ok_or_else(|| bad("table value is not an index"))?;
            out.push(y as u32);
        } else {
            flatten(x, &dims[1..], out)?;
        }
    }
    Ok(())
}

pub fn to_bundle(op: &FiniteOperad) -> Value {
    let flavor = op.flavor();
    let carriers: Map<String, Value> =
        op.carriers().iter().map(|(t, labels)| (object_key(flavor, t), json!(labels))).collect();
    let actions: Map<String, Value> = op.actions().iter().map(|(k, g)| (k.to_string(), json!(g))).collect();
    let mult: Map<String, Value> =
        op.tables().iter().map(|(m, t)| (map_key(flavor, m), nest(t.data(), t.dims()))).collect();
    json!({
        "flavor": flavor,
        "bound": op.bound(),
        "unit": op.unit(),
        "carriers": carriers,
        "actions": actions,
        "mult": mult,
    })
}

pub fn from_bundle(v: &Value) -> Result<FiniteOperad, OperadError> {
    let field = |name: &str| v.get(name).ok_or_else(|| bad(format!("missing field {name:?}")));
    let flavor: Flavor = field("flavor")?.as_str().ok_or_else(|| bad("flavor must be a string"))?.parse()?;
    let bound = field("bound")?.as_u64().ok_or_else(|| bad("bound must be a number"))? as usize;
    let unit = field("unit")?.as_u64().filter(|&u| u <= u32::MAX as u64).ok_or_else(|| bad("bad unit"))? as u32;
    let mut carriers = BTreeMap::new();
    for (k, labels) in field("carriers")?.as_object().ok_or_else(|| bad("carriers must be an object"))? {
        let labels: Vec<String> = serde_json::from_value(labels.clone()).map_err(|e| bad(e.to_string()))?;
        carriers.insert(parse_object(flavor, k)?, labels);
    }
    let mut actions = BTreeMap::new();
    if let Some(acts) = v.get("actions") {
        for (k, g) in acts.as_object().ok_or_else(|| bad("actions must be an object"))? {
            let arity: usize = k.parse().map_err(|_| bad(format!("bad arity {k:?}")))?;
            let g: Vec<Vec<u32>> = serde_json::from_value(g.clone()).map_err(|e| bad(e.to_string()))?;
            actions.insert(arity, g);
        }
    }
    let mut mult = BTreeMap::new();
    for (k, t) in field("mult")?.as_object().ok_or_else(|| bad("mult must be an object"))? {
        let m = parse_map(flavor, k)?;
        let mut dims = vec![carriers.get(m.target()).map(Vec::len).ok_or_else(|| bad(format!("no carrier for {k}")))?];
        for f in super::fiber_ordinals(&m) {
            dims.push(carriers.get(&f).map(Vec::len).ok_or_else(|| bad(format!("no carrier for a fiber of {k}")))?);
        }
        let mut data = Vec::new();
        flatten(t, &dims, &mut data)?;
        mult.insert(m, Table::new(dims, data)?);
    }
    FiniteOperad::from_parts(flavor, bound, carriers, unit, actions, mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::build::{endomorphism_symmetric_operad, graded_pair_operad};

    #[test]
    fn round_trip() {
        let e = endomorphism_symmetric_operad(2, 1).unwrap();
        assert_eq!(from_bundle(&to_bundle(&e)).unwrap(), e);
        let g = graded_pair_operad().unwrap();
        let b = to_bundle(&g);
        assert!(b["mult"].as_object().unwrap().contains_key("2:0->2:1/1,0"));
        assert_eq!(from_bundle(&b).unwrap(), g);
    }

    #[test]
    fn missing_table() {
        let e = endomorphism_symmetric_operad(2, 1).unwrap();
        let mut b = to_bundle(&e);
        b["mult"].as_object_mut().unwrap().remove("1+1");
        assert_eq!(from_bundle(&b).unwrap_err().code(), "MISSING_TABLE");
    }
}
