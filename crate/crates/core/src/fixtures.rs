//! Small hand-built mechanisms used by tests and as CLI demo inputs.

use crate::model::{rat, LeafNode, Mechanism, Node, QueryNode, Rat};

fn leaf(alloc: Vec<i64>) -> Node {
    Node::Leaf(LeafNode { alloc: alloc.into_iter().map(rat).collect(), pay: None })
}

fn query(agent: usize, left: Vec<i64>, right: Vec<i64>, lc: usize, rc: usize) -> Node {
    Node::Query(QueryNode {
        agent,
        left: left.into_iter().map(rat).collect(),
        right: right.into_iter().map(rat).collect(),
        left_child: lc,
        right_child: rc,
    })
}

fn ints(vals: &[i64]) -> Vec<Rat> {
    vals.iter().copied().map(rat).collect()
}

/// A mechanism whose graph for agent 1 contains an anchored four-cycle.
///
/// Agent 1 has domain {1, 2, 5, 7}. The tree splits off 7 (constant outcome
/// 1), then 1 (constant outcome 3), and finally lets agent 2 decide between
/// outcome 3 and outcome 1 for the surviving types {2, 5}. Types 5 and 2 are
/// never separated, yet type 5 can reach outcome 3 while type 2 can reach
/// outcome 1: a label inversion with y = 3, x = 1. The earlier splits supply
/// anchors (type 7 with label 1, type 1 with label 3), and the direct
/// four-cycle through them weighs (3 - 1)(2 - 5) = -6.
pub fn anchor_fixture() -> Mechanism {
    Mechanism {
        agents: vec!["1".into(), "2".into()],
        domains: vec![ints(&[1, 2, 5, 7]), ints(&[0, 1])],
        nodes: vec![
            query(0, vec![7], vec![1, 2, 5], 1, 2),
            leaf(vec![1, 0]),
            query(0, vec![1], vec![2, 5], 3, 4),
            leaf(vec![3, 0]),
            query(1, vec![0], vec![1], 5, 6),
            leaf(vec![3, 0]),
            leaf(vec![1, 0]),
        ],
        node_ids: ["root", "high", "low", "small", "mid", "y", "x"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        root: 0,
    }
}

/// The anchor fixture with one extra split: when agent 2 answers 1, types 2
/// and 5 of agent 1 are separated into equal-allocation leaves. Outcomes are
/// unchanged, so the anchored four-cycle survives, but the graph now has the
/// edges (7,x) -> (5,1) -> (2,1) needed to expand the cycle's middle hop
/// through a profile of intermediate type.
pub fn expansion_fixture() -> Mechanism {
    Mechanism {
        agents: vec!["1".into(), "2".into()],
        domains: vec![ints(&[1, 2, 5, 7]), ints(&[0, 1])],
        nodes: vec![
            query(0, vec![7], vec![1, 2, 5], 1, 2),
            leaf(vec![1, 0]),
            query(0, vec![1], vec![2, 5], 3, 4),
            leaf(vec![3, 0]),
            query(1, vec![0], vec![1], 5, 6),
            leaf(vec![3, 0]),
            query(0, vec![2], vec![5], 7, 8),
            leaf(vec![1, 0]),
            leaf(vec![1, 0]),
        ],
        node_ids: ["root", "high", "low", "small", "mid", "y", "xsplit", "x2", "x5"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        root: 0,
    }
}

/// Two machines, two identical jobs, shared domain {1, 2}. Machine 1 is
/// asked whether her type is the small one; on yes she receives both jobs,
/// otherwise machine 2 gets the same question and the jobs are split on a
/// second no. A minimal greedy (ascending) mechanism.
pub fn greedy_fixture() -> Mechanism {
    Mechanism {
        agents: vec!["1".into(), "2".into()],
        domains: vec![ints(&[1, 2]), ints(&[1, 2])],
        nodes: vec![
            query(0, vec![1], vec![2], 1, 2),
            leaf(vec![2, 0]),
            query(1, vec![1], vec![2], 3, 4),
            leaf(vec![0, 2]),
            leaf(vec![1, 1]),
        ],
        node_ids: ["root", "all1", "next", "all2", "split"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        root: 0,
    }
}

/// A constant-allocation mechanism whose root query interleaves the types
/// of agent 1 ({1,3} against {2}). Every verdict passes (all weights are
/// zero) but the query is not ordered.
pub fn interleaved_constant_fixture() -> Mechanism {
    Mechanism {
        agents: vec!["1".into(), "2".into()],
        domains: vec![ints(&[1, 2, 3]), ints(&[0, 1])],
        nodes: vec![
            query(0, vec![1, 3], vec![2], 1, 2),
            leaf(vec![1, 1]),
            leaf(vec![1, 1]),
        ],
        node_ids: ["root", "odd", "even"].iter().map(|s| s.to_string()).collect(),
        root: 0,
    }
}
