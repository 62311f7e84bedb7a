//! JSON interchange format for mechanisms.
//!
//! Top-level fields: `agents` (array of string ids), `domains` (map id to
//! ascending array of rationals), `root` (node id), `nodes` (map id to
//! either a `query` or a `leaf` object). Rationals are written as strings
//! ("p/q" or "p") and read from strings or JSON integers, so round trips
//! are exact.

use crate::model::{LeafNode, Mechanism, Node, QueryNode, Rat};
use num::{BigInt, One};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed mechanism file: {0}")]
    Malformed(String),
    #[error(
        "node {0} is a k-ary query; only binary queries are supported. \
         Any mechanism with k-ary queries has an equivalent binary form; \
         binarize the tree before loading"
    )]
    KaryQuery(String),
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Malformed(msg.into())
}

/// Parses a rational from a JSON value: integer, or string "p" / "p/q".
pub fn parse_rat(v: &Value) -> Result<Rat, FormatError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else {
                Err(bad(format!("non-integer number {n}; write exact rationals as \"p/q\" strings")))
            }
        }
        Value::String(s) => {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (s, "1"),
            };
            let p = BigInt::from_str(num).map_err(|_| bad(format!("bad rational {s:?}")))?;
            let q = BigInt::from_str(den).map_err(|_| bad(format!("bad rational {s:?}")))?;
            if q == BigInt::from(0) {
                return Err(bad(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        other => Err(bad(format!("expected rational, got {other}"))),
    }
}

/// Renders a rational as the interchange string form.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_array(v: &Value, what: &str) -> Result<Vec<Rat>, FormatError> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(parse_rat)
        .collect()
}

/// Parses a mechanism from interchange JSON text. Structural invariants are
/// not checked here; run [`crate::model::validate_mechanism`] afterwards.
pub fn load_mechanism(text: &str) -> Result<Mechanism, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| bad("top level must be an object"))?;

    let agents: Vec<String> = obj
        .get("agents")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing `agents` array"))?
        .iter()
        .map(|a| a.as_str().map(str::to_string).ok_or_else(|| bad("agent ids must be strings")))
        .collect::<Result<_, _>>()?;
    let agent_index: BTreeMap<&str, usize> =
        agents.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    if agent_index.len() != agents.len() {
        return Err(bad("duplicate agent id"));
    }

    let dom_obj = obj
        .get("domains")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing `domains` object"))?;
    let mut domains = vec![Vec::new(); agents.len()];
    for (id, arr) in dom_obj {
        let i = *agent_index
            .get(id.as_str())
            .ok_or_else(|| bad(format!("domain for unknown agent {id:?}")))?;
        domains[i] = rat_array(arr, &format!("domain of {id}"))?;
    }
    for (i, d) in domains.iter().enumerate() {
        if d.is_empty() {
            return Err(bad(format!("missing domain for agent {:?}", agents[i])));
        }
    }

    let node_obj = obj
        .get("nodes")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing `nodes` object"))?;
    let node_ids: Vec<String> = node_obj.keys().cloned().collect();
    let node_index: BTreeMap<&str, usize> =
        node_ids.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
    let root_id = obj
        .get("root")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing `root` node id"))?;
    let root = *node_index
        .get(root_id)
        .ok_or_else(|| bad(format!("root {root_id:?} not among nodes")))?;

    let mut nodes = Vec::with_capacity(node_ids.len());
    for id in &node_ids {
        let body = node_obj[id]
            .as_object()
            .ok_or_else(|| bad(format!("node {id:?} must be an object")))?;
        if let Some(q) = body.get("query") {
            let q = q.as_object().ok_or_else(|| bad(format!("query of {id:?} must be an object")))?;
            if q.contains_key("children") || q.contains_key("parts") {
                return Err(FormatError::KaryQuery(id.clone()));
            }
            let agent_id = q
                .get("agent")
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("node {id:?} missing query agent")))?;
            let agent = *agent_index
                .get(agent_id)
                .ok_or_else(|| bad(format!("node {id:?} queries unknown agent {agent_id:?}")))?;
            let child = |key: &str| -> Result<usize, FormatError> {
                let cid = q
                    .get(key)
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(format!("node {id:?} missing {key}")))?;
                node_index
                    .get(cid)
                    .copied()
                    .ok_or_else(|| bad(format!("node {id:?} references unknown child {cid:?}")))
            };
            nodes.push(Node::Query(QueryNode {
                agent,
                left: rat_array(
                    q.get("left").ok_or_else(|| bad(format!("node {id:?} missing left part")))?,
                    "left part",
                )?,
                right: rat_array(
                    q.get("right").ok_or_else(|| bad(format!("node {id:?} missing right part")))?,
                    "right part",
                )?,
                left_child: child("left_child")?,
                right_child: child("right_child")?,
            }));
        } else if let Some(l) = body.get("leaf") {
            let l = l.as_object().ok_or_else(|| bad(format!("leaf of {id:?} must be an object")))?;
            let read_map = |key: &str| -> Result<Option<Vec<Rat>>, FormatError> {
                match l.get(key) {
                    None => Ok(None),
                    Some(m) => {
                        let m = m
                            .as_object()
                            .ok_or_else(|| bad(format!("{key} of leaf {id:?} must be an object")))?;
                        let mut out = vec![Rat::from_integer(BigInt::from(0)); agents.len()];
                        for (aid, val) in m {
                            let i = *agent_index.get(aid.as_str()).ok_or_else(|| {
                                bad(format!("leaf {id:?} {key} names unknown agent {aid:?}"))
                            })?;
                            out[i] = parse_rat(val)?;
                        }
                        Ok(Some(out))
                    }
                }
            };
            let alloc = read_map("alloc")?
                .ok_or_else(|| bad(format!("leaf {id:?} missing alloc")))?;
            nodes.push(Node::Leaf(LeafNode { alloc, pay: read_map("pay")? }));
        } else {
            return Err(bad(format!("node {id:?} is neither a query nor a leaf")));
        }
    }

    Ok(Mechanism { agents, domains, nodes, node_ids, root })
}

/// Serializes a mechanism to interchange JSON.
pub fn save_mechanism(m: &Mechanism) -> Value {
    let domains: Map<String, Value> = m
        .agents
        .iter()
        .zip(&m.domains)
        .map(|(a, d)| (a.clone(), Value::Array(d.iter().map(|r| json!(rat_string(r))).collect())))
        .collect();
    let mut nodes = Map::new();
    for (u, node) in m.nodes.iter().enumerate() {
        let body = match node {
            Node::Query(q) => json!({
                "query": {
                    "agent": m.agents[q.agent],
                    "left": q.left.iter().map(rat_string).collect::<Vec<_>>(),
                    "right": q.right.iter().map(rat_string).collect::<Vec<_>>(),
                    "left_child": m.node_ids[q.left_child],
                    "right_child": m.node_ids[q.right_child],
                }
            }),
            Node::Leaf(l) => {
                let alloc: Map<String, Value> = m
                    .agents
                    .iter()
                    .zip(&l.alloc)
                    .map(|(a, r)| (a.clone(), json!(rat_string(r))))
                    .collect();
                match &l.pay {
                    None => json!({ "leaf": { "alloc": alloc } }),
                    Some(p) => {
                        let pay: Map<String, Value> = m
                            .agents
                            .iter()
                            .zip(p)
                            .map(|(a, r)| (a.clone(), json!(rat_string(r))))
                            .collect();
                        json!({ "leaf": { "alloc": alloc, "pay": pay } })
                    }
                }
            }
        };
        nodes.insert(m.node_ids[u].clone(), body);
    }
    json!({
        "agents": m.agents,
        "domains": domains,
        "root": m.node_ids[m.root],
        "nodes": nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_profile, rat, validate_mechanism};

    const SAMPLE: &str = r#"{
        "agents": ["1", "2"],
        "domains": {"1": [1, "3/2"], "2": ["2", 5]},
        "root": "r",
        "nodes": {
            "r": {"query": {"agent": "1", "left": [1], "right": ["3/2"],
                             "left_child": "a", "right_child": "b"}},
            "a": {"leaf": {"alloc": {"1": "2", "2": 0}}},
            "b": {"leaf": {"alloc": {"1": 1, "2": 0}, "pay": {"1": "-1/3"}}}
        }
    }"#;

    #[test]
    fn round_trip_preserves_evaluation() {
        let m = load_mechanism(SAMPLE).unwrap();
        validate_mechanism(&m).unwrap();
        let text = serde_json::to_string_pretty(&save_mechanism(&m)).unwrap();
        let m2 = load_mechanism(&text).unwrap();
        for idx in 0..m.profile_count() {
            let b = m.index_to_profile(idx);
            let (_, a1) = evaluate_profile(&m, &b).unwrap();
            let (_, a2) = evaluate_profile(&m2, &b).unwrap();
            assert_eq!(a1, a2);
        }
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rat(&json!("3/2")).unwrap(), rat(3) / rat(2));
        assert_eq!(parse_rat(&json!(-4)).unwrap(), rat(-4));
        assert_eq!(parse_rat(&json!("-6/4")).unwrap(), rat(-3) / rat(2));
        assert!(parse_rat(&json!(0.5)).is_err());
        assert!(parse_rat(&json!("1/0")).is_err());
    }

    #[test]
    fn kary_queries_are_rejected_with_guidance() {
        let text = r#"{
            "agents": ["1"],
            "domains": {"1": [1, 2, 3]},
            "root": "r",
            "nodes": {
                "r": {"query": {"agent": "1", "parts": [[1],[2],[3]],
                                 "children": ["a","b","c"]}},
                "a": {"leaf": {"alloc": {"1": 0}}},
                "b": {"leaf": {"alloc": {"1": 0}}},
                "c": {"leaf": {"alloc": {"1": 0}}}
            }
        }"#;
        match load_mechanism(text) {
            Err(FormatError::KaryQuery(id)) => assert_eq!(id, "r"),
            other => panic!("expected k-ary rejection, got {other:?}"),
        }
    }
}
