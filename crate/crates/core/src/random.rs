//! Seeded random generators: mechanisms for cross-validation against the
//! independent oracles, and abstract sequences for the weight-algebra
//! checks. All generators are deterministic given the RNG state.

use crate::ironing::{ProfileSeq, SeqItem};
use crate::model::{rat, LeafNode, Mechanism, Node, QueryNode, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fresh deterministic RNG for a test seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Domain size per agent; domains are the integers 0..k.
    pub domain_sizes: Vec<usize>,
    pub max_depth: usize,
    /// Leaf allocations are drawn uniformly from 0..=max_alloc.
    pub max_alloc: i64,
    /// Restrict splits to a single cut point (low types left, high right).
    pub ordered_splits: bool,
    /// Chance to stop early at an internal position.
    pub leaf_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            domain_sizes: vec![3, 3],
            max_depth: 6,
            max_alloc: 2,
            ordered_splits: false,
            leaf_prob: 0.3,
        }
    }
}

/// Generates a random valid mechanism: a binary tree of partition queries
/// over the configured domains with uniform random leaf allocations.
pub fn random_mechanism<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Mechanism {
    let domains: Vec<Vec<Rat>> = cfg
        .domain_sizes
        .iter()
        .map(|&k| (0..k as i64).map(rat).collect())
        .collect();
    let mut nodes = Vec::new();
    let root = gen_node(rng, cfg, &domains, 0, &mut nodes);
    let node_ids = (0..nodes.len()).map(|i| format!("n{i}")).collect();
    Mechanism {
        agents: (1..=domains.len()).map(|i| i.to_string()).collect(),
        domains,
        nodes,
        node_ids,
        root,
    }
}

fn gen_node<R: Rng>(
    rng: &mut R,
    cfg: &GenConfig,
    sub: &[Vec<Rat>],
    depth: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let splittable: Vec<usize> = sub
        .iter()
        .enumerate()
        .filter(|(_, d)| d.len() >= 2)
        .map(|(i, _)| i)
        .collect();
    if depth >= cfg.max_depth || splittable.is_empty() || rng.gen_bool(cfg.leaf_prob) {
        let alloc = sub.iter().map(|_| rat(rng.gen_range(0..=cfg.max_alloc))).collect();
        nodes.push(Node::Leaf(LeafNode { alloc, pay: None }));
        return nodes.len() - 1;
    }
    let agent = splittable[rng.gen_range(0..splittable.len())];
    let d = &sub[agent];
    let (left, right) = if cfg.ordered_splits {
        let cut = rng.gen_range(1..d.len());
        (d[..cut].to_vec(), d[cut..].to_vec())
    } else {
        loop {
            let mask: Vec<bool> = (0..d.len()).map(|_| rng.gen_bool(0.5)).collect();
            if mask.iter().any(|b| *b) && mask.iter().any(|b| !*b) {
                let left: Vec<Rat> = d
                    .iter()
                    .zip(&mask)
                    .filter(|(_, m)| **m)
                    .map(|(t, _)| t.clone())
                    .collect();
                let right: Vec<Rat> = d
                    .iter()
                    .zip(&mask)
                    .filter(|(_, m)| !**m)
                    .map(|(t, _)| t.clone())
                    .collect();
                break (left, right);
            }
        }
    };
    let mut sub_l = sub.to_vec();
    sub_l[agent] = left.clone();
    let mut sub_r = sub.to_vec();
    sub_r[agent] = right.clone();
    let left_child = gen_node(rng, cfg, &sub_l, depth + 1, nodes);
    let right_child = gen_node(rng, cfg, &sub_r, depth + 1, nodes);
    nodes.push(Node::Query(QueryNode { agent, left, right, left_child, right_child }));
    nodes.len() - 1
}

/// A uniform small rational with denominator up to 10.
pub fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    crate::model::ratio(rng.gen_range(-20..=20), rng.gen_range(1..=10))
}

/// A uniform small non-negative rational. Outcomes are allocation sizes, so
/// the weight bounds only hold when they are non-negative.
pub fn random_outcome<R: Rng>(rng: &mut R) -> Rat {
    crate::model::ratio(rng.gen_range(0..=20), rng.gen_range(1..=10))
}

fn plus_nonneg<R: Rng>(rng: &mut R, base: &Rat) -> Rat {
    base + crate::model::ratio(rng.gen_range(0..=15), rng.gen_range(1..=10))
}

fn minus_clamped<R: Rng>(rng: &mut R, base: &Rat) -> Rat {
    let v = base - crate::model::ratio(rng.gen_range(0..=15), rng.gen_range(1..=10));
    if v < num::Zero::zero() {
        num::Zero::zero()
    } else {
        v
    }
}

fn minus_any<R: Rng>(rng: &mut R, base: &Rat) -> Rat {
    base - crate::model::ratio(rng.gen_range(0..=15), rng.gen_range(1..=10))
}

/// Random good sequence with a monotone interior, so the reduction bound is
/// guaranteed to hold: ascending types with outcomes capped by the final
/// outcome, or the descending mirror image.
pub fn random_good_sequence<R: Rng>(rng: &mut R, interior: usize) -> ProfileSeq {
    let a = SeqItem { type_i: random_rat(rng), outcome: random_outcome(rng) };
    let c = SeqItem { type_i: random_rat(rng), outcome: random_outcome(rng) };
    let ascending = rng.gen_bool(0.5);
    let mut items = vec![a.clone()];
    let mut prev_type = a.type_i.clone();
    for _ in 0..interior {
        let item = if ascending {
            SeqItem {
                type_i: plus_nonneg(rng, &prev_type),
                outcome: minus_clamped(rng, &c.outcome),
            }
        } else {
            SeqItem {
                type_i: minus_any(rng, &prev_type),
                outcome: plus_nonneg(rng, &c.outcome),
            }
        };
        prev_type = item.type_i.clone();
        items.push(item);
    }
    items.push(c);
    ProfileSeq { items }
}

/// Random sequence plus a replacement profile `d` bracketing its monotone
/// interior in one of the two admissible directions.
pub fn random_replacement_case<R: Rng>(
    rng: &mut R,
    interior: usize,
) -> (ProfileSeq, SeqItem) {
    let a = SeqItem { type_i: random_rat(rng), outcome: random_outcome(rng) };
    let c = SeqItem { type_i: random_rat(rng), outcome: random_outcome(rng) };
    let ascending = rng.gen_bool(0.5);
    let d = if ascending {
        SeqItem { type_i: plus_nonneg(rng, &a.type_i), outcome: minus_clamped(rng, &c.outcome) }
    } else {
        SeqItem { type_i: minus_any(rng, &a.type_i), outcome: plus_nonneg(rng, &c.outcome) }
    };
    let mut items = vec![a];
    let mut prev_type = d.type_i.clone();
    for _ in 0..interior {
        let item = if ascending {
            SeqItem { type_i: plus_nonneg(rng, &prev_type), outcome: minus_clamped(rng, &d.outcome) }
        } else {
            SeqItem { type_i: minus_any(rng, &prev_type), outcome: plus_nonneg(rng, &d.outcome) }
        };
        prev_type = item.type_i.clone();
        items.push(item);
    }
    items.push(c);
    (ProfileSeq { items }, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ironing::{is_good_sequence, reduce_path, replace_path};
    use crate::model::validate_mechanism;

    #[test]
    fn generated_mechanisms_are_valid() {
        let mut r = rng(7);
        for _ in 0..100 {
            let m = random_mechanism(&mut r, &GenConfig::default());
            validate_mechanism(&m).unwrap();
        }
    }

    #[test]
    fn ordered_split_config_yields_contiguous_parts() {
        let mut r = rng(8);
        let cfg = GenConfig { ordered_splits: true, ..GenConfig::default() };
        for _ in 0..50 {
            let m = random_mechanism(&mut r, &cfg);
            for node in &m.nodes {
                if let Node::Query(q) = node {
                    let max_left = q.left.iter().max().unwrap();
                    let min_right = q.right.iter().min().unwrap();
                    assert!(max_left < min_right);
                }
            }
        }
    }

    #[test]
    fn generated_sequences_satisfy_their_preconditions() {
        let mut r = rng(9);
        for _ in 0..200 {
            let k = r.gen_range(1..=3);
            let s = random_good_sequence(&mut r, k);
            let (good, _) = is_good_sequence(&s).unwrap();
            assert!(good);
            reduce_path(&s).unwrap();

            let k = r.gen_range(1..=3);
            let (s, d) = random_replacement_case(&mut r, k);
            replace_path(&s, &d).unwrap();
        }
    }
}
