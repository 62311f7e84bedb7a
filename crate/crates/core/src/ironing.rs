//! Sequence-weight algebra and the three witness-ironing operations:
//! positive path expansion, path reduction and path replacement.
//!
//! For a sequence of profiles (x^1, ..., x^l) and an agent i the weight is
//!
//!   w_i(x^1, ..., x^l) = sum_{j=1}^{l-1} x_i^j (f_i(x^{j+1}) - f_i(x^j)).
//!
//! When the sequence is a path of the OSP-graph this is exactly the path
//! weight. The reduction and replacement bounds hold for abstract sequences
//! (no edge requirement) as long as every outcome is non-negative, matching
//! the model-level allocation constraint; only [`minimize_witness`]
//! re-imposes edge existence before rewriting a cycle. All three operations are implemented
//! as checked certificates: both sides of each inequality are evaluated
//! exactly, so a faulty precondition can never silently corrupt a witness.

use crate::model::Rat;
use crate::osp_graph::{CycleWitness, OspGraph};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IroningError {
    #[error("sequence must have at least {0} profiles")]
    TooShort(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a good sequence: interior element {0} satisfies neither clause")]
    NotGood(usize),
    #[error("weight bound does not hold: lhs {lhs} < rhs {rhs}")]
    BoundFailed { lhs: Rat, rhs: Rat },
}

/// One element of an abstract profile sequence, reduced to the only data the
/// weight algebra reads: the agent's type and her outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqItem {
    pub type_i: Rat,
    pub outcome: Rat,
}

/// An abstract sequence of profiles viewed through one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSeq {
    pub items: Vec<SeqItem>,
}

impl ProfileSeq {
    pub fn new(items: Vec<(Rat, Rat)>) -> Self {
        ProfileSeq {
            items: items.into_iter().map(|(t, f)| SeqItem { type_i: t, outcome: f }).collect(),
        }
    }

    /// Views a vertex sequence of an OSP-graph as an abstract sequence.
    pub fn from_graph(g: &OspGraph, vertices: &[usize]) -> Self {
        ProfileSeq {
            items: vertices
                .iter()
                .map(|&v| SeqItem { type_i: g.agent_type(v), outcome: g.outcome[v].clone() })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Exact sequence weight; requires at least two profiles.
pub fn seq_weight(s: &ProfileSeq) -> Result<Rat, IroningError> {
    if s.len() < 2 {
        return Err(IroningError::TooShort(2));
    }
    let mut w = Rat::zero();
    for pair in s.items.windows(2) {
        w += &pair[0].type_i * (&pair[1].outcome - &pair[0].outcome);
    }
    Ok(w)
}

/// Which clause of the good-sequence condition an interior element meets:
/// (i) its type is at least the start type and its outcome at most the end
/// outcome, or (ii) the mirrored inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodTag {
    ClauseI,
    ClauseII,
    Both,
    Neither,
}

/// Tags every interior element of the sequence (a, b^1, ..., b^l, c) and
/// reports whether all of them satisfy a clause.
pub fn is_good_sequence(s: &ProfileSeq) -> Result<(bool, Vec<GoodTag>), IroningError> {
    if s.len() < 3 {
        return Err(IroningError::TooShort(3));
    }
    let a = &s.items[0];
    let c = &s.items[s.len() - 1];
    let mut tags = Vec::with_capacity(s.len() - 2);
    let mut good = true;
    for b in &s.items[1..s.len() - 1] {
        let i = a.type_i <= b.type_i && c.outcome >= b.outcome;
        let ii = a.type_i >= b.type_i && c.outcome <= b.outcome;
        let tag = match (i, ii) {
            (true, true) => GoodTag::Both,
            (true, false) => GoodTag::ClauseI,
            (false, true) => GoodTag::ClauseII,
            (false, false) => {
                good = false;
                GoodTag::Neither
            }
        };
        tags.push(tag);
    }
    Ok((good, tags))
}

/// A verified weight bound: `lhs >= rhs` with `slack = lhs - rhs >= 0`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
}

fn require_nonneg_outcomes(items: &[SeqItem]) -> Result<(), IroningError> {
    if items.iter().any(|it| it.outcome < Rat::zero()) {
        return Err(IroningError::Precondition(
            "all outcomes must be non-negative".into(),
        ));
    }
    Ok(())
}

/// Path reduction: for a good sequence (a, b^1, ..., b^l, c) with
/// non-negative outcomes, certifies that the sequence weight is at least the
/// weight of the two-profile sequence (a, c).
///
/// The bound is guaranteed when the interior types are monotone (ascending
/// under clause (i), descending under clause (ii)); for mixed interiors the
/// clause conditions alone do not imply it, so both sides are evaluated
/// exactly and `BoundFailed` is returned instead of a false certificate.
pub fn reduce_path(s: &ProfileSeq) -> Result<Certificate, IroningError> {
    require_nonneg_outcomes(&s.items)?;
    let (good, tags) = is_good_sequence(s)?;
    if !good {
        let bad = tags.iter().position(|t| *t == GoodTag::Neither).unwrap();
        return Err(IroningError::NotGood(bad + 1));
    }
    let lhs = seq_weight(s)?;
    let shortcut =
        ProfileSeq { items: vec![s.items[0].clone(), s.items[s.len() - 1].clone()] };
    let rhs = seq_weight(&shortcut)?;
    if lhs < rhs {
        return Err(IroningError::BoundFailed { lhs, rhs });
    }
    let slack = &lhs - &rhs;
    Ok(Certificate { lhs, rhs, slack })
}

/// Path replacement: under the bracketing precondition on `d` and with all
/// outcomes non-negative, certifies that the sequence weight of
/// (a, b^1, ..., b^l, c) is at least that of (a, d, c). As with
/// [`reduce_path`] the bound is guaranteed for monotone interiors and
/// verified exactly otherwise.
pub fn replace_path(s: &ProfileSeq, d: &SeqItem) -> Result<Certificate, IroningError> {
    if s.len() < 3 {
        return Err(IroningError::TooShort(3));
    }
    require_nonneg_outcomes(&s.items)?;
    require_nonneg_outcomes(std::slice::from_ref(d))?;
    let a = &s.items[0];
    let c = &s.items[s.len() - 1];
    let interior = &s.items[1..s.len() - 1];
    let ascending = a.type_i <= d.type_i
        && c.outcome >= d.outcome
        && interior.iter().all(|b| d.type_i <= b.type_i && d.outcome >= b.outcome);
    let descending = a.type_i >= d.type_i
        && c.outcome <= d.outcome
        && interior.iter().all(|b| d.type_i >= b.type_i && d.outcome <= b.outcome);
    if !ascending && !descending {
        return Err(IroningError::Precondition(
            "profile d does not bracket the interior in either direction".into(),
        ));
    }
    let lhs = seq_weight(s)?;
    let repl = ProfileSeq { items: vec![a.clone(), d.clone(), c.clone()] };
    let rhs = seq_weight(&repl)?;
    if lhs < rhs {
        return Err(IroningError::BoundFailed { lhs, rhs });
    }
    let slack = &lhs - &rhs;
    Ok(Certificate { lhs, rhs, slack })
}

/// Positive path expansion applied to a cycle of an OSP-graph.
///
/// Replaces the hop `vertices[k] -> vertices[k+1]` (call the endpoints a and
/// c) with the two-edge path a -> b -> c. Under the preconditions the new
/// cycle is no heavier, and the exact identity
/// `w(C) - w(C') = (f_i(c) - f_i(b)) (a_i - b_i)` is re-verified.
pub fn expand_path(
    g: &OspGraph,
    c: &CycleWitness,
    hop: usize,
    mid: usize,
) -> Result<(CycleWitness, Rat), IroningError> {
    if hop >= c.len() {
        return Err(IroningError::Precondition(format!("hop index {hop} out of range")));
    }
    let a = c.vertices[hop];
    let end = c.vertices[(hop + 1) % c.len()];
    if g.outcome[a] > g.outcome[end] {
        return Err(IroningError::Precondition("f_i(a) <= f_i(c) required".into()));
    }
    if !g.has_edge(a, mid) || !g.has_edge(mid, end) {
        return Err(IroningError::Precondition("edges (a,b) and (b,c) must exist".into()));
    }
    let (ta, tb, tc) = (g.agent_type(a), g.agent_type(mid), g.agent_type(end));
    if !(ta >= tb && tb >= tc) {
        return Err(IroningError::Precondition("a_i >= b_i >= c_i required".into()));
    }
    let mut vertices = c.vertices.clone();
    vertices.insert(hop + 1, mid);
    let expanded = CycleWitness::from_vertices(g, vertices)
        .expect("expansion hops are edges of the graph");
    let diff = &c.weight - &expanded.weight;
    let identity = (&g.outcome[end] - &g.outcome[mid]) * (&ta - &tb);
    assert_eq!(diff, identity, "expansion identity must hold exactly");
    Ok((expanded, diff))
}

/// Shrinks a negative cycle by repeatedly applying, until fixpoint, the two
/// graph-level ironing corollaries: replacing a good subpath with the direct
/// edge when that edge exists, and replacing a subpath with a two-edge
/// detour through a bracketing profile. Longer subpaths are tried first and
/// the direct edge is preferred, so the result is as short as the two
/// operations allow. The output is re-validated as a negative cycle of the
/// graph after every step.
pub fn minimize_witness(g: &OspGraph, c: &CycleWitness) -> CycleWitness {
    let mut cur = c.clone();
    'outer: loop {
        let len = cur.len();
        if len < 3 {
            break;
        }
        // A subpath of span k covers vertices p, p+1, ..., p+k-1 (cyclic)
        // with k-2 interior elements.
        for span in (3..=len).rev() {
            let shortcut_len = len - (span - 2);
            for p in 0..len {
                let sub: Vec<usize> =
                    (0..span).map(|o| cur.vertices[(p + o) % len]).collect();
                let a = sub[0];
                let end = sub[span - 1];
                if a == end {
                    continue;
                }
                let seq = ProfileSeq::from_graph(g, &sub);
                // Direct edge first.
                if shortcut_len >= 2 && g.has_edge(a, end) {
                    if let Ok((true, _)) = is_good_sequence(&seq) {
                        let mut vertices = vec![a, end];
                        vertices.extend(
                            (span..len).map(|o| cur.vertices[(p + o) % len]),
                        );
                        if all_distinct(&vertices) {
                            let next = CycleWitness::from_vertices(g, vertices)
                                .expect("shortcut edge exists");
                            if next.weight < Rat::zero() {
                                cur = next;
                                continue 'outer;
                            }
                        }
                    }
                }
                // Two-edge detour; only useful when it shortens the cycle.
                if span >= 4 {
                    for d in 0..g.n_vertices() {
                        if d == a || d == end || !g.has_edge(a, d) || !g.has_edge(d, end) {
                            continue;
                        }
                        let item = SeqItem {
                            type_i: g.agent_type(d),
                            outcome: g.outcome[d].clone(),
                        };
                        if replace_path(&seq, &item).is_err() {
                            continue;
                        }
                        let mut vertices = vec![a, d, end];
                        vertices.extend(
                            (span..len).map(|o| cur.vertices[(p + o) % len]),
                        );
                        if all_distinct(&vertices) {
                            let next = CycleWitness::from_vertices(g, vertices)
                                .expect("detour edges exist");
                            if next.weight < Rat::zero() {
                                cur = next;
                                continue 'outer;
                            }
                        }
                    }
                }
            }
        }
        break;
    }
    debug_assert!(cur.weight < Rat::zero());
    cur
}

fn all_distinct(vs: &[usize]) -> bool {
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    fn seq(items: &[(i64, i64)]) -> ProfileSeq {
        ProfileSeq::new(items.iter().map(|&(t, f)| (rat(t), rat(f))).collect())
    }

    #[test]
    fn weight_of_constant_outcomes_is_zero() {
        assert_eq!(seq_weight(&seq(&[(1, 2), (5, 2), (3, 2)])).unwrap(), rat(0));
    }

    #[test]
    fn weight_single_hop() {
        // x_i^1 = 3, outcome jumps 2 -> 5.
        assert_eq!(seq_weight(&seq(&[(3, 2), (0, 5)])).unwrap(), rat(9));
    }

    #[test]
    fn weight_two_hops() {
        // a_i=1, b_i=2, outcomes (0, 1, 3): 1*1 + 2*2 = 5.
        assert_eq!(seq_weight(&seq(&[(1, 0), (2, 1), (7, 3)])).unwrap(), rat(5));
    }

    #[test]
    fn good_sequence_tags() {
        // Equalities satisfy both clauses.
        let s = seq(&[(1, 0), (1, 5), (9, 5)]);
        let (good, tags) = is_good_sequence(&s).unwrap();
        assert!(good);
        assert_eq!(tags, vec![GoodTag::Both]);

        let s = seq(&[(1, 0), (3, 4), (9, 5)]);
        let (good, tags) = is_good_sequence(&s).unwrap();
        assert!(good);
        assert_eq!(tags, vec![GoodTag::ClauseI]);

        let s = seq(&[(1, 0), (2, 6), (9, 5)]);
        let (good, tags) = is_good_sequence(&s).unwrap();
        assert!(!good);
        assert_eq!(tags, vec![GoodTag::Neither]);
    }

    #[test]
    fn reduction_certificate() {
        // a=(1,0), interior (2,3), (3,2), c=(.,4): lhs = 1*3 + 2*(-1) + 3*2 = 7,
        // rhs = 1*4 = 4.
        let s = seq(&[(1, 0), (2, 3), (3, 2), (9, 4)]);
        let cert = reduce_path(&s).unwrap();
        assert_eq!(cert.lhs, rat(7));
        assert_eq!(cert.rhs, rat(4));
        assert_eq!(cert.slack, rat(3));
    }

    #[test]
    fn reduction_rejects_bad_sequences() {
        let s = seq(&[(1, 0), (2, 6), (9, 5)]);
        assert!(matches!(reduce_path(&s), Err(IroningError::NotGood(1))));
    }

    #[test]
    fn reduction_rejects_negative_outcomes() {
        let s = seq(&[(1, -1), (2, 0), (9, 5)]);
        assert!(matches!(reduce_path(&s), Err(IroningError::Precondition(_))));
    }

    #[test]
    fn replacement_certificate() {
        // a=(1,0), interior (3,2), c=(.,4), d=(2,3): lhs = 1*2 + 3*2 = 8,
        // rhs = 1*3 + 2*1 = 5.
        let s = seq(&[(1, 0), (3, 2), (9, 4)]);
        let d = SeqItem { type_i: rat(2), outcome: rat(3) };
        let cert = replace_path(&s, &d).unwrap();
        assert_eq!(cert.lhs, rat(8));
        assert_eq!(cert.rhs, rat(5));
        assert_eq!(cert.slack, rat(3));
    }

    #[test]
    fn expansion_on_the_anchored_cycle() {
        use crate::fixtures::expansion_fixture;
        use crate::osp_graph::{build_osp_graph, check_2cmon};
        use crate::scheduling::anchors_cycle_demo;

        let m = expansion_fixture();
        let g = build_osp_graph(&m, 0).unwrap();
        assert!(check_2cmon(&g).ok);
        let c = anchors_cycle_demo(&m, 0).unwrap().unwrap();
        assert_eq!(c.weight, rat(-6));
        // The hop between the two equal-outcome anchors admits the type-5
        // profile with agent 2 at 1 as a midpoint.
        let mid = m
            .profile_to_index(&vec![rat(5), rat(1)])
            .unwrap();
        let hop = (0..c.len())
            .find(|&k| {
                g.agent_type(c.vertices[k]) == rat(7)
                    && g.agent_type(c.vertices[(k + 1) % c.len()]) == rat(2)
            })
            .unwrap();
        let (expanded, diff) = expand_path(&g, &c, hop, mid).unwrap();
        assert_eq!(diff, rat(0));
        assert_eq!(expanded.len(), 5);
        assert_eq!(expanded.weight, c.weight);
    }

    #[test]
    fn replacement_rejects_unbracketed_d() {
        let s = seq(&[(1, 0), (3, 2), (9, 4)]);
        let d = SeqItem { type_i: rat(5), outcome: rat(1) };
        assert!(replace_path(&s, &d).is_err());
    }
}
