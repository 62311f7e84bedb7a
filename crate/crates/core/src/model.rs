//! Data model for single-parameter extensive-form mechanisms.
//!
//! A mechanism is a binary implementation tree: every internal node queries
//! one agent and splits her currently compatible subdomain into two nonempty
//! parts, every leaf fixes an outcome quantity per agent (plus optional
//! opaque payments). All numeric data are arbitrary-precision rationals, so
//! every comparison made by the verdicts in the sibling modules is exact.

use num::{BigRational, FromPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// Exact rational scalar used for types, outcomes, payments and weights.
pub type Rat = BigRational;

/// A full type profile, one value per agent (agent order as in `Mechanism::agents`).
pub type Profile = Vec<Rat>;

/// Outcome quantities per agent.
pub type Allocation = Vec<Rat>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_i64(n).expect("i64 always converts")
}

/// Shorthand for the rational n/d.
pub fn ratio(n: i64, d: i64) -> Rat {
    rat(n) / rat(d)
}

/// Internal query node. `left`/`right` are the two parts of the queried
/// agent's compatible subdomain; children are node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryNode {
    pub agent: usize,
    pub left: Vec<Rat>,
    pub right: Vec<Rat>,
    pub left_child: usize,
    pub right_child: usize,
}

/// Leaf node carrying the outcome. Payments are opaque data: no verdict in
/// this crate reads them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafNode {
    pub alloc: Allocation,
    pub pay: Option<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Query(QueryNode),
    Leaf(LeafNode),
}

/// An extensive-form mechanism over finite per-agent domains.
///
/// Node references are index-based; `node_ids` keeps the stable string ids
/// of the interchange format for reporting.
#[derive(Debug, Clone)]
pub struct Mechanism {
    pub agents: Vec<String>,
    /// Per-agent type domain, strictly ascending.
    pub domains: Vec<Vec<Rat>>,
    pub nodes: Vec<Node>,
    pub node_ids: Vec<String>,
    pub root: usize,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("mechanism is invalid: {0:?}")]
    Invalid(Vec<String>),
    #[error("unknown node index {0}")]
    UnknownNode(usize),
    #[error("unknown agent index {0}")]
    UnknownAgent(usize),
    #[error("profile outside domains: agent {agent} has no type {value}")]
    ProfileOutsideDomain { agent: usize, value: String },
    #[error("profile has {got} entries, mechanism has {want} agents")]
    ProfileArity { got: usize, want: usize },
    #[error("type {value} is not compatible with node {node}")]
    TypeNotCompatible { node: String, value: String },
}

impl Mechanism {
    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    /// Sizes of the per-agent domains.
    pub fn dims(&self) -> Vec<usize> {
        self.domains.iter().map(Vec::len).collect()
    }

    /// Number of profiles in the full box `D = ×D_i`.
    pub fn profile_count(&self) -> usize {
        self.dims().iter().product()
    }

    /// Mixed-radix encoding of a profile as a flat index (agent 0 is the
    /// most significant digit).
    pub fn profile_to_index(&self, b: &[Rat]) -> Result<usize, ModelError> {
        if b.len() != self.n_agents() {
            return Err(ModelError::ProfileArity { got: b.len(), want: self.n_agents() });
        }
        let mut idx = 0usize;
        for (i, v) in b.iter().enumerate() {
            let pos = self.domains[i]
                .iter()
                .position(|d| d == v)
                .ok_or_else(|| ModelError::ProfileOutsideDomain {
                    agent: i,
                    value: v.to_string(),
                })?;
            idx = idx * self.domains[i].len() + pos;
        }
        Ok(idx)
    }

    pub fn index_to_profile(&self, mut idx: usize) -> Profile {
        let mut digits = vec![0usize; self.n_agents()];
        for i in (0..self.n_agents()).rev() {
            let len = self.domains[i].len();
            digits[i] = idx % len;
            idx /= len;
        }
        digits
            .iter()
            .enumerate()
            .map(|(i, &d)| self.domains[i][d].clone())
            .collect()
    }

    pub fn node(&self, u: usize) -> Result<&Node, ModelError> {
        self.nodes.get(u).ok_or(ModelError::UnknownNode(u))
    }
}

/// Checks every structural invariant of a mechanism. Returns the full list
/// of violations; an empty list means the mechanism is valid.
pub fn validate_mechanism(m: &Mechanism) -> Result<(), ModelError> {
    let mut violations = Vec::new();
    let n = m.n_agents();
    if m.domains.len() != n {
        violations.push(format!(
            "domain table has {} entries for {} agents",
            m.domains.len(),
            n
        ));
        return Err(ModelError::Invalid(violations));
    }
    if m.node_ids.len() != m.nodes.len() {
        violations.push("node id table length differs from node table length".into());
    }
    for (i, d) in m.domains.iter().enumerate() {
        if d.len() < 2 {
            violations.push(format!("domain of agent {} has fewer than 2 types", m.agents[i]));
        }
        if !d.windows(2).all(|w| w[0] < w[1]) {
            violations.push(format!("domain of agent {} is not strictly ascending", m.agents[i]));
        }
    }
    if m.root >= m.nodes.len() {
        violations.push(format!("root index {} out of range", m.root));
        return Err(ModelError::Invalid(violations));
    }

    // Walk the tree from the root, carrying per-agent compatible subdomains.
    // Each node may be visited at most once (tree, not DAG).
    let mut seen = vec![false; m.nodes.len()];
    let mut stack: Vec<(usize, Vec<BTreeSet<usize>>)> = Vec::new();
    let full: Vec<BTreeSet<usize>> = m
        .domains
        .iter()
        .map(|d| (0..d.len()).collect())
        .collect();
    stack.push((m.root, full));
    while let Some((u, sub)) = stack.pop() {
        let id = m.node_ids.get(u).cloned().unwrap_or_else(|| u.to_string());
        if seen[u] {
            violations.push(format!("node {id} is reachable twice (not a tree)"));
            continue;
        }
        seen[u] = true;
        if sub.iter().any(|s| s.is_empty()) {
            violations.push(format!("node {id} has an empty compatible subdomain"));
            continue;
        }
        match &m.nodes[u] {
            Node::Leaf(leaf) => {
                if leaf.alloc.len() != n {
                    violations.push(format!("leaf {id} allocation arity mismatch"));
                }
                if leaf.alloc.iter().any(|a| a < &Rat::zero()) {
                    violations.push(format!("leaf {id} has a negative allocation entry"));
                }
                if let Some(p) = &leaf.pay {
                    if p.len() != n {
                        violations.push(format!("leaf {id} payment arity mismatch"));
                    }
                }
            }
            Node::Query(q) => {
                if q.agent >= n {
                    violations.push(format!("node {id} queries unknown agent {}", q.agent));
                    continue;
                }
                if q.left_child >= m.nodes.len() || q.right_child >= m.nodes.len() {
                    violations.push(format!("node {id} has a dangling child reference"));
                    continue;
                }
                let cur = &sub[q.agent];
                let mut to_pos = |vals: &[Rat], side: &str| -> Option<BTreeSet<usize>> {
                    let mut out = BTreeSet::new();
                    for v in vals {
                        match m.domains[q.agent].iter().position(|d| d == v) {
                            Some(p) => {
                                out.insert(p);
                            }
                            None => {
                                violations.push(format!(
                                    "node {id} {side} part contains {v}, not in agent domain"
                                ));
                                return None;
                            }
                        }
                    }
                    Some(out)
                };
                let mut vio = Vec::new();
                let left = to_pos(&q.left, "left");
                let right = to_pos(&q.right, "right");
                let (left, right) = match (left, right) {
                    (Some(l), Some(r)) => (l, r),
                    _ => continue,
                };
                if left.is_empty() || right.is_empty() {
                    vio.push(format!("node {id} has an empty part"));
                }
                if !left.is_disjoint(&right) {
                    vio.push(format!("node {id} parts are not disjoint"));
                }
                let union: BTreeSet<usize> = left.union(&right).cloned().collect();
                if &union != cur {
                    vio.push(format!(
                        "partition incomplete at node {id}: parts do not cover the compatible subdomain"
                    ));
                }
                violations.extend(vio.iter().cloned());
                if !vio.is_empty() {
                    continue;
                }
                let mut sub_l = sub.clone();
                sub_l[q.agent] = left;
                let mut sub_r = sub;
                sub_r[q.agent] = right;
                stack.push((q.left_child, sub_l));
                stack.push((q.right_child, sub_r));
            }
        }
    }
    for (u, s) in seen.iter().enumerate() {
        if !s {
            let id = m.node_ids.get(u).cloned().unwrap_or_else(|| u.to_string());
            violations.push(format!("node {id} is unreachable from the root"));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Invalid(violations))
    }
}

/// Walks the tree for profile `b` and returns the unique compatible leaf
/// (index) together with its allocation.
pub fn evaluate_profile<'m>(
    m: &'m Mechanism,
    b: &[Rat],
) -> Result<(usize, &'m Allocation), ModelError> {
    if b.len() != m.n_agents() {
        return Err(ModelError::ProfileArity { got: b.len(), want: m.n_agents() });
    }
    for (i, v) in b.iter().enumerate() {
        if !m.domains[i].contains(v) {
            return Err(ModelError::ProfileOutsideDomain { agent: i, value: v.to_string() });
        }
    }
    let mut u = m.root;
    loop {
        match m.node(u)? {
            Node::Leaf(l) => return Ok((u, &l.alloc)),
            Node::Query(q) => {
                u = if q.left.contains(&b[q.agent]) {
                    q.left_child
                } else if q.right.contains(&b[q.agent]) {
                    q.right_child
                } else {
                    return Err(ModelError::TypeNotCompatible {
                        node: m.node_ids[u].clone(),
                        value: b[q.agent].to_string(),
                    });
                };
            }
        }
    }
}

/// Per-agent compatible subdomains for every reachable node, computed in one
/// root-to-leaves pass. Entry `None` marks an unreachable node.
pub fn node_domains(m: &Mechanism) -> Vec<Option<Vec<Vec<Rat>>>> {
    let mut out: Vec<Option<Vec<Vec<Rat>>>> = vec![None; m.nodes.len()];
    let full: Vec<Vec<Rat>> = m.domains.clone();
    let mut stack = vec![(m.root, full)];
    while let Some((u, sub)) = stack.pop() {
        if let Node::Query(q) = &m.nodes[u] {
            let mut sub_l = sub.clone();
            sub_l[q.agent] = sub[q.agent]
                .iter()
                .filter(|v| q.left.contains(v))
                .cloned()
                .collect();
            let mut sub_r = sub.clone();
            sub_r[q.agent] = sub[q.agent]
                .iter()
                .filter(|v| q.right.contains(v))
                .cloned()
                .collect();
            stack.push((q.left_child, sub_l));
            stack.push((q.right_child, sub_r));
        }
        out[u] = Some(sub);
    }
    out
}

/// Compatible subdomains at a single node.
pub fn node_domain(m: &Mechanism, u: usize) -> Result<Vec<Vec<Rat>>, ModelError> {
    if u >= m.nodes.len() {
        return Err(ModelError::UnknownNode(u));
    }
    node_domains(m)[u].clone().ok_or(ModelError::UnknownNode(u))
}

/// Iterates over all co-profiles of agent `i` drawn from the given per-agent
/// subdomains. Each item is a full profile with slot `i` left as given.
fn co_profiles(sub: &[Vec<Rat>], i: usize, t: &Rat) -> Vec<Profile> {
    let mut out = vec![Vec::with_capacity(sub.len())];
    for (j, d) in sub.iter().enumerate() {
        let choices: Vec<&Rat> = if j == i { vec![t] } else { d.iter().collect() };
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in &choices {
                let mut p = prefix.clone();
                p.push((*c).clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The label of type `t` for agent `i` at node `u`: the set of outcome
/// quantities `i` can still receive for `t` in the subtree rooted at `u`,
/// computed by enumerating all compatible co-profiles.
pub fn labels(m: &Mechanism, u: usize, i: usize, t: &Rat) -> Result<BTreeSet<Rat>, ModelError> {
    if i >= m.n_agents() {
        return Err(ModelError::UnknownAgent(i));
    }
    let sub = node_domain(m, u)?;
    if !sub[i].contains(t) {
        return Err(ModelError::TypeNotCompatible {
            node: m.node_ids[u].clone(),
            value: t.to_string(),
        });
    }
    let mut out = BTreeSet::new();
    for b in co_profiles(&sub, i, t) {
        let (_, alloc) = evaluate_profile(m, &b)?;
        out.insert(alloc[i].clone());
    }
    Ok(out)
}

/// Like [`labels`], but also records one co-profile per outcome.
pub fn labels_with_buddies(
    m: &Mechanism,
    u: usize,
    i: usize,
    t: &Rat,
) -> Result<Vec<(Rat, Profile)>, ModelError> {
    let sub = node_domain(m, u)?;
    if !sub[i].contains(t) {
        return Err(ModelError::TypeNotCompatible {
            node: m.node_ids[u].clone(),
            value: t.to_string(),
        });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for b in co_profiles(&sub, i, t) {
        let (_, alloc) = evaluate_profile(m, &b)?;
        if seen.insert(alloc[i].clone()) {
            out.push((alloc[i].clone(), b));
        }
    }
    Ok(out)
}

/// All co-profiles compatible with node `u` for agent `i` holding type `t`.
pub fn compatible_profiles_with(
    m: &Mechanism,
    u: usize,
    i: usize,
    t: &Rat,
) -> Result<Vec<Profile>, ModelError> {
    let sub = node_domain(m, u)?;
    Ok(co_profiles(&sub, i, t))
}

/// Checks whether the labels of agent `i` are monotone at `u`: for every
/// pair `t > t'` in the compatible subdomain, every outcome in the label of
/// `t` is at most every outcome in the label of `t'`. On failure returns the
/// first violating type pair.
pub fn labels_monotone(
    m: &Mechanism,
    u: usize,
    i: usize,
) -> Result<(bool, Option<(Rat, Rat)>), ModelError> {
    let sub = node_domain(m, u)?;
    let dom = &sub[i];
    let lab: Vec<BTreeSet<Rat>> =
        dom.iter().map(|t| labels(m, u, i, t)).collect::<Result<_, _>>()?;
    for hi in 0..dom.len() {
        for lo in 0..hi {
            // dom is ascending: dom[hi] > dom[lo].
            let max_hi = lab[hi].iter().next_back();
            let min_lo = lab[lo].iter().next();
            if let (Some(a), Some(b)) = (max_hi, min_lo) {
                if a > b {
                    return Ok((false, Some((dom[hi].clone(), dom[lo].clone()))));
                }
            }
        }
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(alloc: Vec<i64>) -> Node {
        Node::Leaf(LeafNode { alloc: alloc.into_iter().map(rat).collect(), pay: None })
    }

    /// Root splits D_1 = {1,2} into {1} and {2}; agent 2 is never queried.
    fn two_leaf_mech() -> Mechanism {
        Mechanism {
            agents: vec!["1".into(), "2".into()],
            domains: vec![vec![rat(1), rat(2)], vec![rat(1), rat(2)]],
            nodes: vec![
                Node::Query(QueryNode {
                    agent: 0,
                    left: vec![rat(1)],
                    right: vec![rat(2)],
                    left_child: 1,
                    right_child: 2,
                }),
                leaf(vec![3, 0]),
                leaf(vec![1, 0]),
            ],
            node_ids: vec!["root".into(), "a".into(), "b".into()],
            root: 0,
        }
    }

    #[test]
    fn minimal_binary_tree_is_valid() {
        assert!(validate_mechanism(&two_leaf_mech()).is_ok());
    }

    #[test]
    fn single_leaf_is_valid() {
        let m = Mechanism {
            agents: vec!["1".into()],
            domains: vec![vec![rat(1), rat(2)]],
            nodes: vec![leaf(vec![0])],
            node_ids: vec!["only".into()],
            root: 0,
        };
        assert!(validate_mechanism(&m).is_ok());
        let (l, a) = evaluate_profile(&m, &[rat(2)]).unwrap();
        assert_eq!(l, 0);
        assert_eq!(a[0], rat(0));
    }

    #[test]
    fn incomplete_partition_is_rejected() {
        let mut m = two_leaf_mech();
        m.domains[0] = vec![rat(1), rat(2), rat(3)];
        let err = validate_mechanism(&m).unwrap_err();
        match err {
            ModelError::Invalid(v) => {
                assert!(v.iter().any(|s| s.contains("partition incomplete")), "{v:?}")
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn evaluation_partitions_the_profile_box() {
        let m = two_leaf_mech();
        let mut counts = vec![0usize; m.nodes.len()];
        for idx in 0..m.profile_count() {
            let b = m.index_to_profile(idx);
            let (l, _) = evaluate_profile(&m, &b).unwrap();
            counts[l] += 1;
        }
        assert_eq!(counts, vec![0, 2, 2]);
    }

    #[test]
    fn node_domain_restricts_along_answers() {
        let m = two_leaf_mech();
        let doms = node_domains(&m);
        assert_eq!(doms[0].as_ref().unwrap()[0], vec![rat(1), rat(2)]);
        assert_eq!(doms[1].as_ref().unwrap()[0], vec![rat(1)]);
        assert_eq!(doms[1].as_ref().unwrap()[1], vec![rat(1), rat(2)]);
        assert_eq!(doms[2].as_ref().unwrap()[0], vec![rat(2)]);
    }

    #[test]
    fn labels_enumerate_reachable_outcomes() {
        let m = two_leaf_mech();
        // Agent 1 gets 3 for type 1 and 1 for type 2, regardless of agent 2.
        assert_eq!(
            labels(&m, 0, 0, &rat(1)).unwrap().into_iter().collect::<Vec<_>>(),
            vec![rat(3)]
        );
        assert_eq!(
            labels(&m, 0, 0, &rat(2)).unwrap().into_iter().collect::<Vec<_>>(),
            vec![rat(1)]
        );
        // Agent 2's label at the root is the union over both of her types.
        assert_eq!(labels(&m, 0, 1, &rat(1)).unwrap().len(), 1);
    }

    #[test]
    fn monotone_labels_detected() {
        let m = two_leaf_mech();
        let (ok, _) = labels_monotone(&m, 0, 0).unwrap();
        assert!(ok);
        // Swap allocations so the larger type gets strictly more.
        let mut bad = two_leaf_mech();
        bad.nodes[1] = leaf(vec![1, 0]);
        bad.nodes[2] = leaf(vec![3, 0]);
        let (ok, pair) = labels_monotone(&bad, 0, 0).unwrap();
        assert!(!ok);
        assert_eq!(pair, Some((rat(2), rat(1))));
    }

    #[test]
    fn label_union_property() {
        // labels at a query node equal the union of child labels where the type survives.
        let m = two_leaf_mech();
        let root_lab = labels(&m, 0, 1, &rat(1)).unwrap();
        let left_lab = labels(&m, 1, 1, &rat(1)).unwrap();
        let right_lab = labels(&m, 2, 1, &rat(1)).unwrap();
        let union: BTreeSet<Rat> = left_lab.union(&right_lab).cloned().collect();
        assert_eq!(root_lab, union);
    }
}
