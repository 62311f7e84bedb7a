//! Related-machines scheduling: makespan arithmetic, a brute-force optimum,
//! and a four-type descending/ascending mechanism compiled into an
//! implementation tree.
//!
//! The mechanism works over a shared four-value domain B < L < H < T. A
//! descending phase removes the slowest half of the machines (they receive
//! zero jobs): a special machine i* is asked top-down about T, the others
//! get split queries {B,L} versus {H,T} and an L round. The ascending phase
//! then assigns the m identical jobs greedily over the surviving half, with
//! i* deliberately ranked last for the B round and first for the L round.
//! The tree is produced by running the decision procedure once per type
//! profile, recording every query that is not already determined by earlier
//! answers, and merging the transcripts; determinism makes the merge a tree.

use crate::model::{
    evaluate_profile, rat, LeafNode, Mechanism, Node, Profile, QueryNode, Rat,
};
use crate::osp_graph::{build_osp_graph, CycleWitness, GraphError, OspGraph};
use num::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Job counts per machine.
pub type JobAllocation = Vec<usize>;

/// Guards for the brute-force optimum.
pub const OPT_MAX_MACHINES: usize = 8;
pub const OPT_MAX_JOBS: usize = 16;

#[derive(Debug, Error)]
pub enum SchedError {
    #[error("{0}")]
    Precondition(String),
    #[error("brute-force guard exceeded: n {n} > {OPT_MAX_MACHINES} or m {m} > {OPT_MAX_JOBS}")]
    Guard { n: usize, m: usize },
    #[error("size mismatch: {0} loads against {1} machine types")]
    SizeMismatch(usize, usize),
    #[error("leaf allocation is not a job count vector summing to {m}")]
    BadLeaf { m: usize },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An instance: n machines, m identical jobs, one shared ascending domain.
#[derive(Debug, Clone)]
pub struct SchedulingInstance {
    pub n: usize,
    pub m: usize,
    pub domain: Vec<Rat>,
}

/// Completion time of the slowest machine: max over i of b_i * loads_i.
pub fn makespan(loads: &[usize], b: &[Rat]) -> Result<Rat, SchedError> {
    if loads.len() != b.len() {
        return Err(SchedError::SizeMismatch(loads.len(), b.len()));
    }
    let mut best = Rat::zero();
    for (l, t) in loads.iter().zip(b) {
        let v = t * rat(*l as i64);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Exact minimum makespan over all ways to place `m` jobs on the machines,
/// with the lexicographically smallest optimal load vector as witness.
pub fn optimal_makespan(b: &[Rat], m: usize) -> Result<(Rat, JobAllocation), SchedError> {
    let n = b.len();
    if n == 0 {
        return Err(SchedError::Precondition("no machines".into()));
    }
    if n > OPT_MAX_MACHINES || m > OPT_MAX_JOBS {
        return Err(SchedError::Guard { n, m });
    }
    let mut best: Option<(Rat, JobAllocation)> = None;
    let mut loads = vec![0usize; n];
    // Load vectors are visited in ascending lexicographic order, and only a
    // strict improvement replaces the incumbent, so the witness is the
    // lexicographically smallest optimum.
    fn go(
        b: &[Rat],
        loads: &mut Vec<usize>,
        i: usize,
        left: usize,
        cur_max: &Rat,
        best: &mut Option<(Rat, JobAllocation)>,
    ) {
        if let Some((w, _)) = best {
            if cur_max >= w {
                return;
            }
        }
        if i == b.len() - 1 {
            loads[i] = left;
            let v = &b[i] * rat(left as i64);
            let total = if &v > cur_max { v } else { cur_max.clone() };
            if best.as_ref().map_or(true, |(w, _)| &total < w) {
                *best = Some((total, loads.clone()));
            }
            return;
        }
        for k in 0..=left {
            loads[i] = k;
            let v = &b[i] * rat(k as i64);
            let next = if &v > cur_max { &v } else { cur_max };
            let next = next.clone();
            go(b, loads, i + 1, left - k, &next, best);
        }
        loads[i] = 0;
    }
    go(b, &mut loads, 0, m, &Rat::zero(), &mut best);
    Ok(best.expect("at least one placement exists"))
}

/// One recorded query of the decision procedure: the queried machine, the
/// two parts of her current compatible subdomain, and the true answer.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Step {
    agent: usize,
    yes_part: Vec<Rat>,
    no_part: Vec<Rat>,
    answer: bool,
}

struct Exec<'a> {
    profile: &'a [Rat],
    sub: Vec<Vec<Rat>>,
    steps: Vec<Step>,
}

impl Exec<'_> {
    /// Asks machine `i` whether her type lies in `part`. Queries whose
    /// answer is already determined by the compatible subdomain are skipped
    /// (the tree format forbids no-op partitions).
    fn ask(&mut self, i: usize, part: &[Rat]) -> bool {
        let inter: Vec<Rat> =
            self.sub[i].iter().filter(|t| part.contains(t)).cloned().collect();
        if inter.len() == self.sub[i].len() {
            return true;
        }
        if inter.is_empty() {
            return false;
        }
        let answer = part.contains(&self.profile[i]);
        let no_part: Vec<Rat> =
            self.sub[i].iter().filter(|t| !part.contains(t)).cloned().collect();
        self.steps.push(Step {
            agent: i,
            yes_part: inter.clone(),
            no_part: no_part.clone(),
            answer,
        });
        self.sub[i] = if answer { inter } else { no_part };
        answer
    }

    /// Ascending round robin over `order`: each machine whose smallest
    /// still-possible type is at most `limit` is asked whether she has it;
    /// the first yes wins all jobs. Fails when every minimum exceeds
    /// `limit`.
    fn greedy(&mut self, limit: &Rat, order: &[usize]) -> Option<usize> {
        loop {
            let mut any = false;
            for &j in order {
                let min = self.sub[j][0].clone();
                if &min > limit {
                    continue;
                }
                any = true;
                if self.ask(j, &[min]) {
                    return Some(j);
                }
            }
            if !any {
                return None;
            }
        }
    }
}

fn run_mechanism(
    profile: &[Rat],
    domain: &[Rat],
    m: usize,
    flawed: bool,
) -> (Vec<Step>, JobAllocation) {
    let n = profile.len();
    let half = n / 2; // n is even
    let (b_t, l_t, h_t, t_t) = (&domain[0], &domain[1], &domain[2], &domain[3]);
    let mut ex = Exec {
        profile,
        sub: vec![domain.to_vec(); n],
        steps: Vec::new(),
    };
    let mut alive = vec![true; n];
    let count = |alive: &[bool]| alive.iter().filter(|a| **a).count();
    fn alive_ids(alive: &[bool]) -> Vec<usize> {
        alive.iter().enumerate().filter(|(_, a)| **a).map(|(i, _)| i).collect()
    }
    let mut i_star = 0usize;
    // 0 = B, 1 = L, 2 = H, 3 = T.
    let mut t = 3usize;

    // Descending rounds: push i* forward while she keeps admitting T.
    let mut yes = true;
    while yes && count(&alive) > half {
        yes = ex.ask(i_star, &[t_t.clone()]);
        if yes {
            alive[i_star] = false;
            i_star += 1;
        }
    }
    if count(&alive) > half {
        t = 2;
    }
    // Split round from i*+1: stop at the first {B,L} answer, which also
    // takes over the special role.
    let mut i = i_star + 1;
    let mut ht = true;
    let mut last_low: Option<usize> = None;
    while ht && count(&alive) > half && i < n {
        if ex.ask(i, &[b_t.clone(), l_t.clone()]) {
            last_low = Some(i);
            ht = false;
        } else {
            alive[i] = false;
            i += 1;
        }
    }
    if count(&alive) > half {
        t = 1;
        // When nobody was split-queried in the round above there is no
        // low-answering machine to promote; the special role is unchanged.
        if let Some(j) = last_low {
            i_star = j;
        }
    }
    // Second split round over all alive machines; the cursor always
    // advances past a queried machine.
    let ids: Vec<usize> = alive_ids(&alive);
    for j in ids {
        if count(&alive) <= half {
            break;
        }
        if !ex.ask(j, &[b_t.clone(), l_t.clone()]) {
            alive[j] = false;
        }
    }
    // L round: machines admitting exactly L are removed.
    let ids: Vec<usize> = alive_ids(&alive);
    for j in ids {
        if count(&alive) <= half {
            break;
        }
        if ex.ask(j, &[l_t.clone()]) {
            alive[j] = false;
        }
    }
    if count(&alive) > half {
        t = 0;
    }

    // Ascending phase.
    let mut loads = vec![0usize; n];
    let survivors: Vec<usize> = alive_ids(&alive);
    let others: Vec<usize> = survivors.iter().copied().filter(|&j| j != i_star).collect();
    if count(&alive) > half {
        // Even split over the survivors; the earliest machines get the
        // remainder jobs.
        let k = survivors.len();
        for (pos, &j) in survivors.iter().enumerate() {
            loads[j] = m / k + usize::from(pos < m % k);
        }
    } else if t < 2 {
        if let Some(w) = ex.greedy(b_t, &survivors) {
            loads[w] = m;
        } else {
            let mut winner = None;
            for &j in &others {
                if ex.ask(j, &[l_t.clone()]) {
                    winner = Some(j);
                    break;
                }
            }
            if let Some(j) = winner {
                loads[i_star] = m.div_ceil(2);
                loads[j] = m / 2;
            } else {
                loads[i_star] = m;
            }
        }
    } else {
        let mut order_b: Vec<usize> = others.clone();
        let mut order_l: Vec<usize> = vec![i_star];
        if flawed {
            // Deliberately wrong timing: i* first for the B round and last
            // for the L round.
            order_b.insert(0, i_star);
            order_l = others.clone();
            order_l.push(i_star);
        } else {
            order_b.push(i_star);
            order_l.extend(&others);
        }
        if let Some(w) = ex.greedy(b_t, &order_b) {
            loads[w] = m;
        } else if let Some(w) = ex.greedy(l_t, &order_l) {
            loads[w] = m;
        } else {
            let mut winner = None;
            for &j in &others {
                if ex.ask(j, &[h_t.clone()]) {
                    winner = Some(j);
                    break;
                }
            }
            if let Some(j) = winner {
                loads[i_star] = m.div_ceil(2);
                loads[j] = m / 2;
            } else if t == 2 {
                loads[i_star] = m;
            } else {
                loads[i_star] = m.div_ceil(2);
                loads[others[0]] = m / 2;
            }
        }
    }
    debug_assert_eq!(loads.iter().sum::<usize>(), m);
    (ex.steps, loads)
}

/// Validates the mechanism parameters: n even and at least 4, m at least n,
/// and a strictly ascending four-value domain.
pub fn check_m4_preconditions(n: usize, m: usize, domain: &[Rat]) -> Result<(), SchedError> {
    if n < 4 || n % 2 != 0 {
        return Err(SchedError::Precondition("n must be even and >= 4".into()));
    }
    if m < n {
        return Err(SchedError::Precondition("m >= n required".into()));
    }
    if domain.len() != 4 {
        return Err(SchedError::Precondition("domain must hold exactly 4 values".into()));
    }
    if !domain.windows(2).all(|w| w[0] < w[1]) {
        return Err(SchedError::Precondition("domain must be strictly ascending".into()));
    }
    Ok(())
}

struct Run {
    steps: Vec<Step>,
    loads: JobAllocation,
}

fn merge_runs(runs: &[&Run], depth: usize, n: usize, nodes: &mut Vec<Node>) -> usize {
    let first = runs[0];
    if first.steps.len() == depth {
        for r in runs {
            assert_eq!(r.steps.len(), depth, "deterministic procedure must agree");
            assert_eq!(r.loads, first.loads, "merged leaves must share the allocation");
        }
        let alloc = first.loads.iter().map(|&l| rat(l as i64)).collect();
        nodes.push(Node::Leaf(LeafNode { alloc, pay: None }));
        return nodes.len() - 1;
    }
    let step = &first.steps[depth];
    let mut yes_runs = Vec::new();
    let mut no_runs = Vec::new();
    for r in runs {
        let s = &r.steps[depth];
        assert_eq!(
            (&s.agent, &s.yes_part, &s.no_part),
            (&step.agent, &step.yes_part, &step.no_part),
            "deterministic procedure must ask the same next query"
        );
        if s.answer {
            yes_runs.push(*r);
        } else {
            no_runs.push(*r);
        }
    }
    let left_child = merge_runs(&yes_runs, depth + 1, n, nodes);
    let right_child = merge_runs(&no_runs, depth + 1, n, nodes);
    nodes.push(Node::Query(QueryNode {
        agent: step.agent,
        left: step.yes_part.clone(),
        right: step.no_part.clone(),
        left_child,
        right_child,
    }));
    nodes.len() - 1
}

fn build_tree(
    n: usize,
    m: usize,
    domain: &[Rat],
    flawed: bool,
) -> Result<Mechanism, SchedError> {
    check_m4_preconditions(n, m, domain)?;
    let total = 4usize.pow(n as u32);
    let mut runs = Vec::with_capacity(total);
    for idx in 0..total {
        let mut profile = vec![Rat::zero(); n];
        let mut rest = idx;
        for i in (0..n).rev() {
            profile[i] = domain[rest % 4].clone();
            rest /= 4;
        }
        let (steps, loads) = run_mechanism(&profile, domain, m, flawed);
        runs.push(Run { steps, loads });
    }
    let mut nodes = Vec::new();
    let refs: Vec<&Run> = runs.iter().collect();
    let root = merge_runs(&refs, 0, n, &mut nodes);
    let node_ids = (0..nodes.len()).map(|i| format!("n{i}")).collect();
    Ok(Mechanism {
        agents: (1..=n).map(|i| i.to_string()).collect(),
        domains: vec![domain.to_vec(); n],
        nodes,
        node_ids,
        root,
    })
}

/// Compiles the descending/ascending mechanism into an implementation tree.
pub fn build_m4(n: usize, m: usize, domain: &[Rat]) -> Result<Mechanism, SchedError> {
    build_tree(n, m, domain, false)
}

/// The deliberately broken variant: the special machine is ranked first in
/// the ascending B round and last in the L round, which creates an anchored
/// four-cycle of weight (L - H) * m in her graph.
pub fn build_m4_flawed(n: usize, m: usize, domain: &[Rat]) -> Result<Mechanism, SchedError> {
    build_tree(n, m, domain, true)
}

#[derive(Debug, Clone)]
pub struct RatioRow {
    pub profile: Profile,
    pub mech_makespan: Rat,
    pub opt_makespan: Rat,
    pub ratio: Rat,
}

#[derive(Debug, Clone)]
pub struct RatioReport {
    pub worst_ratio: Rat,
    pub worst_profile: Profile,
    pub rows: Vec<RatioRow>,
}

fn leaf_loads(alloc: &[Rat], m: usize) -> Result<JobAllocation, SchedError> {
    let mut loads = Vec::with_capacity(alloc.len());
    let mut sum = 0usize;
    for a in alloc {
        let l = if a.is_integer() { a.numer().to_usize() } else { None };
        let l = l.ok_or(SchedError::BadLeaf { m })?;
        sum += l;
        loads.push(l);
    }
    if sum != m {
        return Err(SchedError::BadLeaf { m });
    }
    Ok(loads)
}

/// Worst-case ratio of the mechanism's makespan to the optimum over the
/// whole profile box, with the full per-profile table. The optimum is
/// memoized by sorted profile (machines with equal types are symmetric).
pub fn approximation_ratio(mech: &Mechanism, m: usize) -> Result<RatioReport, SchedError> {
    let mut memo: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    let mut rows = Vec::with_capacity(mech.profile_count());
    let mut worst: Option<(Rat, Profile)> = None;
    for idx in 0..mech.profile_count() {
        let b = mech.index_to_profile(idx);
        let (_, alloc) = evaluate_profile(mech, &b)?;
        let loads = leaf_loads(alloc, m)?;
        let ms = makespan(&loads, &b)?;
        let mut key = b.clone();
        key.sort();
        let opt = match memo.get(&key) {
            Some(v) => v.clone(),
            None => {
                let (v, _) = optimal_makespan(&b, m)?;
                memo.insert(key, v.clone());
                v
            }
        };
        if opt.is_zero() {
            return Err(SchedError::Precondition("optimal makespan is zero".into()));
        }
        let ratio = &ms / &opt;
        if worst.as_ref().map_or(true, |(w, _)| &ratio > w) {
            worst = Some((ratio.clone(), b.clone()));
        }
        rows.push(RatioRow { profile: b, mech_makespan: ms, opt_makespan: opt, ratio });
    }
    let (worst_ratio, worst_profile) = worst.expect("profile box is nonempty");
    Ok(RatioReport { worst_ratio, worst_profile, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundKind {
    FiveTypes,
    FourTypes,
}

/// A hard-instance domain: consecutive values separated by more than the
/// required gap factor, using the smallest integers that satisfy the strict
/// inequalities.
#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub domain: Vec<Rat>,
    pub m: usize,
    pub gap: usize,
}

pub fn lower_bound_domain(
    n: usize,
    kind: LowerBoundKind,
) -> Result<LowerBoundInstance, SchedError> {
    let (len, m, gap) = match kind {
        LowerBoundKind::FiveTypes => {
            if n < 2 {
                return Err(SchedError::Precondition("n must be at least 2".into()));
            }
            (5, n, n * n)
        }
        LowerBoundKind::FourTypes => {
            if n < 4 || n % 2 != 0 {
                return Err(SchedError::Precondition("n must be even and >= 4".into()));
            }
            let m = (n / 2 + 1) * n;
            (4, m, m * n)
        }
    };
    let mut domain = vec![rat(1)];
    for _ in 1..len {
        let next = domain.last().unwrap() * rat(gap as i64) + rat(1);
        domain.push(next);
    }
    debug_assert!(domain.windows(2).all(|w| w[1] > &w[0] * rat(gap as i64)));
    Ok(LowerBoundInstance { domain, m, gap })
}

/// Searches agent `i`'s graph for an anchored four-cycle: two profiles with
/// inverted type and outcome that share no edge, joined through two anchor
/// profiles matching their outcomes exactly. Such a cycle always has weight
/// (outcome gap) * (type gap) < 0; the factorization is re-checked before
/// returning.
pub fn anchors_cycle_demo(
    mech: &Mechanism,
    i: usize,
) -> Result<Option<CycleWitness>, GraphError> {
    let g = build_osp_graph(mech, i)?;
    Ok(find_anchor_cycle(&g))
}

fn find_anchor_cycle(g: &OspGraph) -> Option<CycleWitness> {
    let n = g.n_vertices();
    let types: Vec<Rat> = (0..n).map(|v| g.agent_type(v)).collect();
    for c0 in 0..n {
        for c2 in 0..n {
            if types[c0] <= types[c2]
                || g.outcome[c0] <= g.outcome[c2]
                || g.has_edge(c0, c2)
                || g.has_edge(c2, c0)
            {
                continue;
            }
            for &c1 in &g.out_adj[c0] {
                if g.outcome[c1] != g.outcome[c2]
                    || types[c1] <= types[c0]
                    || !g.has_edge(c1, c2)
                {
                    continue;
                }
                for &c3 in &g.out_adj[c2] {
                    if g.outcome[c3] != g.outcome[c0]
                        || types[c3] >= types[c2]
                        || !g.has_edge(c3, c0)
                    {
                        continue;
                    }
                    let w = CycleWitness::from_vertices(g, vec![c0, c1, c2, c3])
                        .expect("all four hops were checked");
                    let factored =
                        (&g.outcome[c0] - &g.outcome[c2]) * (&types[c2] - &types[c0]);
                    assert_eq!(w.weight, factored, "anchored cycle weight must factor");
                    debug_assert!(w.weight < Rat::zero());
                    return Some(w);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_mechanism;

    fn dom(vals: &[i64]) -> Vec<Rat> {
        vals.iter().copied().map(rat).collect()
    }

    #[test]
    fn makespan_examples() {
        assert_eq!(makespan(&[0, 4], &dom(&[7, 2])).unwrap(), rat(8));
        assert_eq!(makespan(&[3, 1], &dom(&[2, 3])).unwrap(), rat(6));
        // Uniform types, even split.
        assert_eq!(makespan(&[2, 2, 2], &dom(&[5, 5, 5])).unwrap(), rat(10));
        assert!(makespan(&[1], &dom(&[1, 2])).is_err());
    }

    #[test]
    fn optimum_examples() {
        let (v, loads) = optimal_makespan(&dom(&[3]), 5).unwrap();
        assert_eq!(v, rat(15));
        assert_eq!(loads, vec![5]);

        let (v, loads) = optimal_makespan(&dom(&[1, 2]), 4).unwrap();
        assert_eq!(v, rat(3));
        assert_eq!(loads, vec![3, 1]);

        // Uniform types: balanced split, t * ceil(m/n).
        let (v, _) = optimal_makespan(&dom(&[4, 4, 4]), 7).unwrap();
        assert_eq!(v, rat(12));

        assert!(matches!(
            optimal_makespan(&dom(&[1, 1]), 99),
            Err(SchedError::Guard { .. })
        ));
    }

    #[test]
    fn optimum_is_a_lower_bound() {
        let b = dom(&[1, 3, 10, 35]);
        let (opt, witness) = optimal_makespan(&b, 6).unwrap();
        assert_eq!(makespan(&witness, &b).unwrap(), opt);
        for loads in [[6, 0, 0, 0], [3, 3, 0, 0], [2, 2, 1, 1], [0, 0, 3, 3]] {
            assert!(makespan(&loads, &b).unwrap() >= opt);
        }
    }

    #[test]
    fn m4_preconditions() {
        let d = dom(&[1, 3, 10, 35]);
        let err = build_m4(3, 4, &d).unwrap_err();
        assert!(err.to_string().contains("n must be even and >= 4"));
        let err = build_m4(4, 2, &d).unwrap_err();
        assert!(err.to_string().contains("m >= n required"));
        let err = build_m4(4, 4, &dom(&[3, 1, 10, 35])).unwrap_err();
        assert!(err.to_string().contains("ascending"));
    }

    #[test]
    fn m4_tree_is_valid_and_root_queries_first_machine_about_top_type() {
        let d = dom(&[1, 3, 10, 35]);
        let m4 = build_m4(4, 4, &d).unwrap();
        validate_mechanism(&m4).unwrap();
        match &m4.nodes[m4.root] {
            Node::Query(q) => {
                assert_eq!(q.agent, 0);
                let (mut l, mut r) = (q.left.clone(), q.right.clone());
                l.sort();
                r.sort();
                assert_eq!(l, dom(&[35]));
                assert_eq!(r, dom(&[1, 3, 10]));
            }
            Node::Leaf(_) => panic!("root must be a query"),
        }
    }

    #[test]
    fn m4_outcome_traces() {
        let d = dom(&[1, 3, 10, 35]);
        let m4 = build_m4(4, 4, &d).unwrap();
        // All-smallest: nobody is removed, even split.
        let (_, alloc) = evaluate_profile(&m4, &dom(&[1, 1, 1, 1])).unwrap();
        assert_eq!(alloc, &dom(&[1, 1, 1, 1]));
        // All-largest: machines 1 and 2 drop out, the special machine 3 and
        // machine 4 share the jobs.
        let (_, alloc) = evaluate_profile(&m4, &dom(&[35, 35, 35, 35])).unwrap();
        assert_eq!(alloc, &dom(&[0, 0, 2, 2]));
    }

    #[test]
    fn m4_leaves_always_place_all_jobs() {
        let d = dom(&[1, 3, 10, 35]);
        for (n, m) in [(4usize, 4usize), (4, 7)] {
            let m4 = build_m4(n, m, &d).unwrap();
            for node in &m4.nodes {
                if let Node::Leaf(l) = node {
                    let total: Rat = l.alloc.iter().sum();
                    assert_eq!(total, rat(m as i64));
                }
            }
        }
    }

    #[test]
    fn lower_bound_domains() {
        let five = lower_bound_domain(4, LowerBoundKind::FiveTypes).unwrap();
        assert_eq!(five.m, 4);
        assert_eq!(five.domain, dom(&[1, 17, 273, 4369, 69905]));
        let four = lower_bound_domain(4, LowerBoundKind::FourTypes).unwrap();
        assert_eq!(four.m, 12);
        assert_eq!(four.domain, dom(&[1, 49, 2353, 112945]));
        assert!(lower_bound_domain(1, LowerBoundKind::FiveTypes).is_err());
        assert!(lower_bound_domain(5, LowerBoundKind::FourTypes).is_err());
    }

    #[test]
    fn anchored_cycle_absent_in_small_fixtures() {
        let m = crate::fixtures::greedy_fixture();
        assert!(anchors_cycle_demo(&m, 0).unwrap().is_none());
        assert!(anchors_cycle_demo(&m, 1).unwrap().is_none());
    }

    #[test]
    fn anchored_cycle_found_in_anchor_fixture() {
        let m = crate::fixtures::anchor_fixture();
        let w = anchors_cycle_demo(&m, 0).unwrap().expect("fixture has an anchored cycle");
        assert_eq!(w.weight, rat(-6));
    }
}
