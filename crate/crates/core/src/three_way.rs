//! Ordered-query checking and rewriting, plus the pivot classifier.
//!
//! A binary query is ordered when the part holding the smallest compatible
//! type contains only types below the other part and the label sets are
//! inversely ordered. [`order_transform`] rewrites every type-interleaved
//! query into a chain of ordered ones without changing the allocation on any
//! profile. [`classify_three_way`] then decides the three-way greedy
//! property: all queries ordered and, for every node and every
//! label-inverted type pair of a bystander agent, every pivot pair is
//! extreme. On ordered mechanisms this verdict coincides with the absence of
//! negative cycles in the per-agent OSP-graphs.

use crate::model::{
    self, evaluate_profile, node_domain, node_domains, validate_mechanism, Mechanism, Node,
    Profile, QueryNode, Rat,
};
use crate::osp_graph::{
    shortest_walks_from, AntimonotonePair, GraphError, OspGraph, WalkWeight,
};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThreeWayError {
    #[error("node {0} is not a query node")]
    NotAQuery(usize),
    #[error("pivot legs are missing a direct edge between {from} and {to}")]
    MissingEdge { from: usize, to: usize },
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Decides whether the query at `u` is ordered. Convention: L is the part
/// containing the minimum compatible type. Returns the first violating
/// `(l, r)` type pair, either because `l > r` (type interleaving) or because
/// some label of `r` exceeds some label of `l`.
pub fn is_ordered_query(
    m: &Mechanism,
    u: usize,
) -> Result<(bool, Option<(Rat, Rat)>), ThreeWayError> {
    let q = match m.node(u)? {
        Node::Query(q) => q,
        Node::Leaf(_) => return Err(ThreeWayError::NotAQuery(u)),
    };
    let sub = node_domain(m, u)?;
    let cur = &sub[q.agent];
    let left: Vec<&Rat> = cur.iter().filter(|t| q.left.contains(t)).collect();
    let right: Vec<&Rat> = cur.iter().filter(|t| q.right.contains(t)).collect();
    // cur is ascending, so cur[0] is the minimum compatible type.
    let (low, high) =
        if left.contains(&&cur[0]) { (left, right) } else { (right, left) };
    for &l in &low {
        for &r in &high {
            if l > r {
                return Ok((false, Some((l.clone(), r.clone()))));
            }
        }
    }
    let labels = |t: &Rat| model::labels(m, u, q.agent, t);
    for &l in &low {
        let lab_l = labels(l)?;
        let min_l = lab_l.iter().next().expect("labels are nonempty");
        for &r in &high {
            let lab_r = labels(r)?;
            let max_r = lab_r.iter().next_back().expect("labels are nonempty");
            if max_r > min_l {
                return Ok((false, Some((l.clone(), r.clone()))));
            }
        }
    }
    Ok((true, None))
}

/// Record of one rewritten query: the original node and the alternating
/// blocks (side flag true = the part holding the minimum type) in ascending
/// type order.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    pub node: usize,
    /// (belongs to the minimum-holding side, types of the block).
    pub blocks: Vec<(bool, Vec<Rat>)>,
}

struct Rebuilder<'m> {
    m: &'m Mechanism,
    nodes: Vec<Node>,
    plans: Vec<TransformPlan>,
}

impl Rebuilder<'_> {
    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Rebuilds the subtree at original node `u` under the per-agent
    /// compatible subdomains `sub`, re-pruning queries that `sub` has made
    /// trivial and replacing interleaved queries by ordered chains.
    fn rebuild(&mut self, u: usize, sub: &[Vec<Rat>]) -> usize {
        let q = match &self.m.nodes[u] {
            Node::Leaf(l) => return self.push(Node::Leaf(l.clone())),
            Node::Query(q) => q,
        };
        let a = q.agent;
        let l_cur: Vec<Rat> = sub[a].iter().filter(|t| q.left.contains(t)).cloned().collect();
        let r_cur: Vec<Rat> = sub[a].iter().filter(|t| q.right.contains(t)).cloned().collect();
        if l_cur.is_empty() {
            return self.rebuild(q.right_child, sub);
        }
        if r_cur.is_empty() {
            return self.rebuild(q.left_child, sub);
        }
        // Alternating maximal runs of the ascending compatible subdomain.
        let mut blocks: Vec<(bool, Vec<Rat>)> = Vec::new();
        for t in &sub[a] {
            let is_low = l_cur.contains(t) == l_cur.contains(&sub[a][0]);
            match blocks.last_mut() {
                Some((side, block)) if *side == is_low => block.push(t.clone()),
                _ => blocks.push((is_low, vec![t.clone()])),
            }
        }
        if blocks.len() <= 2 {
            // Types are not interleaved; keep a binary query with re-pruned parts.
            let mut sub_l = sub.to_vec();
            sub_l[a] = l_cur.clone();
            let mut sub_r = sub.to_vec();
            sub_r[a] = r_cur.clone();
            let left_child = self.rebuild(q.left_child, &sub_l);
            let right_child = self.rebuild(q.right_child, &sub_r);
            return self.push(Node::Query(QueryNode {
                agent: a,
                left: l_cur,
                right: r_cur,
                left_child,
                right_child,
            }));
        }
        self.plans.push(TransformPlan { node: u, blocks: blocks.clone() });
        // One copy of the matching original subtree per block, then a chain
        // of queries splitting the blocks off front to back.
        let children: Vec<usize> = blocks
            .iter()
            .map(|(is_low, block)| {
                let child = if l_cur.contains(&block[0]) { q.left_child } else { q.right_child };
                debug_assert_eq!(*is_low, l_cur.contains(&block[0]) == l_cur.contains(&sub[a][0]));
                let mut sub_b = sub.to_vec();
                sub_b[a] = block.clone();
                self.rebuild(child, &sub_b)
            })
            .collect();
        let k = blocks.len();
        let mut right_child = children[k - 1];
        let mut right_part = blocks[k - 1].1.clone();
        for j in (0..k - 1).rev() {
            right_child = self.push(Node::Query(QueryNode {
                agent: a,
                left: blocks[j].1.clone(),
                right: right_part.clone(),
                left_child: children[j],
                right_child,
            }));
            let mut part = blocks[j].1.clone();
            part.extend(right_part);
            right_part = part;
        }
        right_child
    }
}

/// Rewrites every type-interleaved query into the ordered chain of block
/// queries, attaching a re-pruned copy of the original child subtree under
/// each block. The allocation on every profile is preserved. Input without
/// interleaved queries is returned unchanged with an empty plan list.
pub fn order_transform(
    m: &Mechanism,
) -> Result<(Mechanism, Vec<TransformPlan>), ThreeWayError> {
    validate_mechanism(m)?;
    let doms = node_domains(m);
    let mut any = false;
    for (u, node) in m.nodes.iter().enumerate() {
        if let (Node::Query(q), Some(sub)) = (node, &doms[u]) {
            let cur = &sub[q.agent];
            let in_left: Vec<bool> = cur.iter().map(|t| q.left.contains(t)).collect();
            let runs = 1 + in_left.windows(2).filter(|w| w[0] != w[1]).count();
            if runs > 2 {
                any = true;
                break;
            }
        }
    }
    if !any {
        return Ok((m.clone(), Vec::new()));
    }
    let mut b = Rebuilder { m, nodes: Vec::new(), plans: Vec::new() };
    let root = b.rebuild(m.root, &m.domains);
    let node_ids = (0..b.nodes.len()).map(|i| format!("t{i}")).collect();
    let out = Mechanism {
        agents: m.agents.clone(),
        domains: m.domains.clone(),
        nodes: b.nodes,
        node_ids,
        root,
    };
    debug_assert!(validate_mechanism(&out).is_ok());
    Ok((out, b.plans))
}

/// A pivot pair for a label-inverted type pair `(b1, b2)` of agent `i` at
/// node `u`: types `up_type` and `down_type` split off at strict ancestors
/// of `u` by queries to `i`, with a label `z >= y` at the upper ancestor and
/// a label `q <= x` at the lower one. Buddies are full profiles realizing
/// each of the four outcomes.
#[derive(Debug, Clone)]
pub struct PivotReport {
    pub node: usize,
    pub agent: usize,
    pub b1: Rat,
    pub b2: Rat,
    pub y: Rat,
    pub x: Rat,
    pub buddy_y: Profile,
    pub buddy_x: Profile,
    pub up_node: usize,
    pub down_node: usize,
    pub up_type: Rat,
    pub down_type: Rat,
    pub z: Rat,
    pub q: Rat,
    pub buddy_z: Profile,
    pub buddy_q: Profile,
}

impl PivotReport {
    /// Delta = z - y, the upper outcome gap.
    pub fn gap_up(&self) -> Rat {
        &self.z - &self.y
    }

    /// Lambda = x - q, the lower outcome gap.
    pub fn gap_down(&self) -> Rat {
        &self.x - &self.q
    }

    /// delta = y - x, the inversion gap; strictly positive.
    pub fn inversion(&self) -> Rat {
        &self.y - &self.x
    }

    /// Anchors match the inverted outcomes exactly: z = y and q = x.
    pub fn is_anchor(&self) -> bool {
        self.gap_up().is_zero() && self.gap_down().is_zero()
    }

    /// down_type > b1 and b2 > up_type.
    pub fn size_ok(&self) -> bool {
        self.down_type > self.b1 && self.b2 > self.up_type
    }

    /// Lambda (down_type - b1) + Delta (b2 - up_type) >= delta (b1 - b2).
    pub fn gap_inequality(&self) -> bool {
        self.gap_down() * (&self.down_type - &self.b1)
            + self.gap_up() * (&self.b2 - &self.up_type)
            >= self.inversion() * (&self.b1 - &self.b2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotVerdict {
    /// z = y and q = x; the direct four-cycle through the buddies weighs
    /// (y - x)(b2 - b1) < 0, so anchors always defeat the mechanism.
    Anchor,
    /// Every four-leg tour through the buddies has non-negative weight.
    Extreme,
    Violating,
}

#[derive(Debug, Clone)]
pub struct PivotClassification {
    pub verdict: PivotVerdict,
    /// Sum of the four shortest-walk infima, or for anchors the direct
    /// four-edge tour weight. `None` when some leg contains a negative
    /// cycle.
    pub minimum: Option<Rat>,
    /// down_type > b1 and b2 > up_type.
    pub size_ok: bool,
    /// Lambda (down_type - b1) + Delta (b2 - up_type) >= delta (b1 - b2).
    pub gap_inequality: bool,
}

fn profile_index(g: &OspGraph, p: &Profile) -> usize {
    let mut idx = 0usize;
    for (i, v) in p.iter().enumerate() {
        let pos = g.domains[i].iter().position(|d| d == v).expect("profile in box");
        idx = idx * g.dims[i] + pos;
    }
    idx
}

fn classify_with_cache(
    g: &OspGraph,
    r: &PivotReport,
    cache: &mut BTreeMap<usize, Vec<WalkWeight>>,
) -> Result<PivotClassification, ThreeWayError> {
    let v1 = profile_index(g, &r.buddy_y);
    let vd = profile_index(g, &r.buddy_q);
    let v2 = profile_index(g, &r.buddy_x);
    let vu = profile_index(g, &r.buddy_z);
    for (from, to) in [(v1, vd), (vd, v2), (v2, vu), (vu, v1)] {
        if !g.has_edge(from, to) {
            return Err(ThreeWayError::MissingEdge { from, to });
        }
    }
    let size_ok = r.size_ok();
    let gap_inequality = r.gap_inequality();
    if r.is_anchor() {
        // The direct tour already weighs (y - x)(b2 - b1) < 0; walk infima
        // would all be minus infinity along the induced negative cycle.
        let mut direct = Rat::zero();
        for (from, to) in [(v1, vd), (vd, v2), (v2, vu), (vu, v1)] {
            direct += g.edge_weight(from, to).expect("checked above");
        }
        debug_assert!(direct < Rat::zero());
        return Ok(PivotClassification {
            verdict: PivotVerdict::Anchor,
            minimum: Some(direct),
            size_ok,
            gap_inequality,
        });
    }
    let mut total = Rat::zero();
    let mut neg_infinity = false;
    for (from, to) in [(v1, vd), (vd, v2), (v2, vu), (vu, v1)] {
        let walks = cache
            .entry(from)
            .or_insert_with(|| shortest_walks_from(g, from));
        match &walks[to] {
            WalkWeight::Finite(w) => total += w,
            WalkWeight::NegInfinity => neg_infinity = true,
            WalkWeight::Unreachable => {
                unreachable!("direct edge exists, target must be reachable")
            }
        }
    }
    let (verdict, minimum) = if neg_infinity {
        (PivotVerdict::Violating, None)
    } else if total >= Rat::zero() {
        (PivotVerdict::Extreme, Some(total))
    } else {
        (PivotVerdict::Violating, Some(total))
    };
    Ok(PivotClassification { verdict, minimum, size_ok, gap_inequality })
}

/// Classifies one pivot pair against the graph: anchor, extreme, or
/// violating, together with the minimum tour value and the size and gap
/// side conditions.
pub fn classify_pivot(
    g: &OspGraph,
    r: &PivotReport,
) -> Result<PivotClassification, ThreeWayError> {
    let mut cache = BTreeMap::new();
    classify_with_cache(g, r, &mut cache)
}

/// Path of node indices from the root down to `u` (inclusive).
fn path_to(m: &Mechanism, u: usize) -> Vec<usize> {
    let mut parent: Vec<Option<usize>> = vec![None; m.nodes.len()];
    for (v, node) in m.nodes.iter().enumerate() {
        if let Node::Query(q) = node {
            parent[q.left_child] = Some(v);
            parent[q.right_child] = Some(v);
        }
    }
    let mut path = vec![u];
    let mut cur = u;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// All (outcome, full profile) realizations of agent `i` holding type `t`
/// against every co-profile compatible with node `v`.
fn outcome_profiles(
    m: &Mechanism,
    v: usize,
    i: usize,
    t: &Rat,
) -> Result<Vec<(Rat, Profile)>, ThreeWayError> {
    let mut out = Vec::new();
    for p in model::compatible_profiles_with(m, v, i, t)? {
        let (_, alloc) = evaluate_profile(m, &p)?;
        out.push((alloc[i].clone(), p));
    }
    Ok(out)
}

/// Enumerates every pivot pair for the given label-inverted pair of agent
/// `i` at `u`: all strict ancestors of `u` where `i` was queried, all types
/// split away from the surviving branch there, all qualifying labels with
/// all realizing buddies. Empty when `i` never diverged above `u`.
pub fn find_pivots(
    m: &Mechanism,
    i: usize,
    u: usize,
    pair: &AntimonotonePair,
) -> Result<Vec<PivotReport>, ThreeWayError> {
    let path = path_to(m, u);
    let doms = node_domains(m);
    let mut ups: Vec<(usize, Rat, Rat, Profile)> = Vec::new();
    let mut downs: Vec<(usize, Rat, Rat, Profile)> = Vec::new();
    for w in path.windows(2) {
        let (v, taken) = (w[0], w[1]);
        let q = match &m.nodes[v] {
            Node::Query(q) if q.agent == i => q,
            _ => continue,
        };
        let away = if q.left_child == taken { &q.right } else { &q.left };
        let sub = doms[v].as_ref().expect("path nodes are reachable");
        for s in sub[i].iter().filter(|s| away.contains(s)) {
            for (out, prof) in outcome_profiles(m, v, i, s)? {
                if out >= pair.y {
                    ups.push((v, s.clone(), out.clone(), prof.clone()));
                }
                if out <= pair.x {
                    downs.push((v, s.clone(), out, prof));
                }
            }
        }
    }
    let mut reports = Vec::new();
    for (up_node, up_type, z, buddy_z) in &ups {
        for (down_node, down_type, q_out, buddy_q) in &downs {
            reports.push(PivotReport {
                node: u,
                agent: i,
                b1: pair.t_hi.clone(),
                b2: pair.t_lo.clone(),
                y: pair.y.clone(),
                x: pair.x.clone(),
                buddy_y: pair.buddy_hi.clone(),
                buddy_x: pair.buddy_lo.clone(),
                up_node: *up_node,
                down_node: *down_node,
                up_type: up_type.clone(),
                down_type: down_type.clone(),
                z: z.clone(),
                q: q_out.clone(),
                buddy_z: buddy_z.clone(),
                buddy_q: buddy_q.clone(),
            });
        }
    }
    Ok(reports)
}

/// Every label inversion of agent `i` at node `u` with every buddy
/// combination: type pairs `t_hi > t_lo` and outcomes `y > x` with `y`
/// reachable for `t_hi` and `x` for `t_lo`.
pub fn antimonotone_inversions(
    m: &Mechanism,
    i: usize,
    u: usize,
) -> Result<Vec<AntimonotonePair>, ThreeWayError> {
    let sub = node_domain(m, u)?;
    let dom = &sub[i];
    let real: Vec<Vec<(Rat, Profile)>> =
        dom.iter().map(|t| outcome_profiles(m, u, i, t)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for hi in 0..dom.len() {
        for lo in 0..hi {
            for (y, buddy_hi) in &real[hi] {
                for (x, buddy_lo) in &real[lo] {
                    if y > x {
                        out.push(AntimonotonePair {
                            t_hi: dom[hi].clone(),
                            t_lo: dom[lo].clone(),
                            y: y.clone(),
                            x: x.clone(),
                            buddy_hi: buddy_hi.clone(),
                            buddy_lo: buddy_lo.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum Violation {
    NonOrderedQuery { node: usize, pair: (Rat, Rat) },
    Pivot { report: PivotReport, class: PivotClassification },
}

#[derive(Debug, Clone)]
pub struct ThreeWayReport {
    /// Per query node: ordered verdict.
    pub ordered_nodes: Vec<(usize, bool)>,
    /// Number of pivot pairs examined.
    pub examined_pivots: usize,
    pub three_way: bool,
    pub violation: Option<Violation>,
}

/// Full three-way greedy verdict: every query ordered, and for every node
/// `u`, bystander agent `i != i(u)` and label inversion of `i` at `u`, every
/// pivot pair classifies as extreme. Stops at the first violation.
pub fn classify_three_way(m: &Mechanism) -> Result<ThreeWayReport, ThreeWayError> {
    validate_mechanism(m)?;
    let mut ordered_nodes = Vec::new();
    let mut first_bad: Option<Violation> = None;
    for (u, node) in m.nodes.iter().enumerate() {
        if let Node::Query(_) = node {
            let (ok, pair) = is_ordered_query(m, u)?;
            ordered_nodes.push((u, ok));
            if !ok && first_bad.is_none() {
                first_bad =
                    Some(Violation::NonOrderedQuery { node: u, pair: pair.unwrap() });
            }
        }
    }
    if let Some(v) = first_bad {
        return Ok(ThreeWayReport {
            ordered_nodes,
            examined_pivots: 0,
            three_way: false,
            violation: Some(v),
        });
    }
    let mut examined = 0usize;
    for i in 0..m.n_agents() {
        let g = crate::osp_graph::build_osp_graph(m, i)?;
        let mut cache: BTreeMap<usize, Vec<WalkWeight>> = BTreeMap::new();
        for (u, node) in m.nodes.iter().enumerate() {
            match node {
                Node::Query(q) if q.agent != i => {}
                _ => continue,
            }
            for pair in antimonotone_inversions(m, i, u)? {
                for report in find_pivots(m, i, u, &pair)? {
                    examined += 1;
                    let class = classify_with_cache(&g, &report, &mut cache)?;
                    if class.verdict != PivotVerdict::Extreme {
                        return Ok(ThreeWayReport {
                            ordered_nodes,
                            examined_pivots: examined,
                            three_way: false,
                            violation: Some(Violation::Pivot { report, class }),
                        });
                    }
                }
            }
        }
    }
    Ok(ThreeWayReport {
        ordered_nodes,
        examined_pivots: examined,
        three_way: true,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{anchor_fixture, greedy_fixture, interleaved_constant_fixture};
    use crate::model::rat;
    use crate::osp_graph::{build_osp_graph, check_cmon};

    #[test]
    fn greedy_fixture_queries_are_ordered() {
        let m = greedy_fixture();
        for (u, node) in m.nodes.iter().enumerate() {
            if matches!(node, Node::Query(_)) {
                let (ok, pair) = is_ordered_query(&m, u).unwrap();
                assert!(ok, "node {u} not ordered: {pair:?}");
            }
        }
    }

    #[test]
    fn interleaved_fixture_root_is_not_ordered() {
        let m = interleaved_constant_fixture();
        let (ok, pair) = is_ordered_query(&m, 0).unwrap();
        assert!(!ok);
        assert_eq!(pair, Some((rat(3), rat(2))));
    }

    #[test]
    fn anchor_fixture_queries_are_ordered() {
        // Splitting the extremes off first keeps every query ordered even
        // though the mechanism is not cycle monotone.
        let m = anchor_fixture();
        for (u, node) in m.nodes.iter().enumerate() {
            if matches!(node, Node::Query(_)) {
                assert!(is_ordered_query(&m, u).unwrap().0);
            }
        }
    }

    #[test]
    fn transform_splits_interleaved_query_into_blocks() {
        let m = interleaved_constant_fixture();
        let (out, plans) = order_transform(&m).unwrap();
        assert_eq!(plans.len(), 1);
        assert_eq!(plans[0].node, 0);
        let blocks: Vec<Vec<Rat>> =
            plans[0].blocks.iter().map(|(_, b)| b.clone()).collect();
        assert_eq!(blocks, vec![vec![rat(1)], vec![rat(2)], vec![rat(3)]]);
        for (u, node) in out.nodes.iter().enumerate() {
            if matches!(node, Node::Query(_)) {
                assert!(is_ordered_query(&out, u).unwrap().0);
            }
        }
        for v in 0..m.profile_count() {
            let p = m.index_to_profile(v);
            assert_eq!(
                evaluate_profile(&m, &p).unwrap().1,
                evaluate_profile(&out, &p).unwrap().1
            );
        }
    }

    #[test]
    fn transform_is_identity_on_ordered_input() {
        let m = greedy_fixture();
        let (out, plans) = order_transform(&m).unwrap();
        assert!(plans.is_empty());
        assert_eq!(out.nodes.len(), m.nodes.len());
    }

    #[test]
    fn greedy_fixture_is_three_way() {
        let m = greedy_fixture();
        let rep = classify_three_way(&m).unwrap();
        assert!(rep.three_way);
        assert!(rep.violation.is_none());
        assert!(rep.ordered_nodes.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn anchor_fixture_pivot_is_an_anchor() {
        let m = anchor_fixture();
        let rep = classify_three_way(&m).unwrap();
        assert!(!rep.three_way);
        match rep.violation {
            Some(Violation::Pivot { report, class }) => {
                assert!(report.is_anchor());
                assert_eq!(class.verdict, PivotVerdict::Anchor);
                assert_eq!(class.minimum, Some(rat(-6)));
                assert!(class.size_ok);
                assert!(!class.gap_inequality);
                assert_eq!(report.b1, rat(5));
                assert_eq!(report.b2, rat(2));
                assert_eq!(report.y, rat(3));
                assert_eq!(report.x, rat(1));
            }
            other => panic!("expected a pivot violation, got {other:?}"),
        }
    }

    #[test]
    fn verdict_matches_cycle_monotonicity_on_ordered_fixtures() {
        for m in [greedy_fixture(), anchor_fixture()] {
            let rep = classify_three_way(&m).unwrap();
            let cmon = (0..m.n_agents())
                .all(|i| check_cmon(&build_osp_graph(&m, i).unwrap()).0);
            assert_eq!(rep.three_way, cmon);
        }
    }

    #[test]
    fn gap_inequality_arithmetic() {
        // Lambda = 0, Delta = 2, delta = 1: 0*(3-2) + 2*(1-0) = 2 >= 1*(2-1).
        let buddy = vec![rat(0), rat(0)];
        let r = PivotReport {
            node: 0,
            agent: 0,
            b1: rat(2),
            b2: rat(1),
            y: rat(1),
            x: rat(0),
            buddy_y: buddy.clone(),
            buddy_x: buddy.clone(),
            up_node: 0,
            down_node: 0,
            up_type: rat(0),
            down_type: rat(3),
            z: rat(3),
            q: rat(0),
            buddy_z: buddy.clone(),
            buddy_q: buddy,
        };
        assert_eq!(r.gap_up(), rat(2));
        assert_eq!(r.gap_down(), rat(0));
        assert_eq!(r.inversion(), rat(1));
        assert!(!r.is_anchor());
        assert!(r.size_ok());
        assert!(r.gap_inequality());
    }
}
