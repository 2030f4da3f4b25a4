//! Probability that a node stays intact when the ill-behaved set `B` is
//! random.
//!
//! `P(v intact) = Σ p(B)` over the sets `B` that some DSet avoiding `v`
//! contains. The conditional form divides by `P(v ∉ B)`, since an intact
//! node is always well-behaved.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{FbasError, Result};
use crate::fbas::Fbas;
use crate::intact::intact_nodes_unchecked;
use crate::nodeset::{NodeId, NodeSet};
use crate::quorums::{quorum_intersection, quorum_intersection_without, QuorumEnumerator, View};
use crate::trust::{build_trust_graph, restrict_unchecked, scc_partition};

/// Default node-count guard for summing over every `B ⊆ V`.
pub const DEFAULT_EXACT_GUARD: usize = 16;

/// Default cap on maximal DSets for inclusion–exclusion.
pub const DEFAULT_MAX_DSETS: usize = 20;

/// Samples per independently seeded Monte Carlo block.
pub const MC_BLOCK: u64 = 1024;

const MASS_TOLERANCE: f64 = 1e-12;

/// A probability model for the ill-behaved set `B`.
#[derive(Clone, Debug, PartialEq)]
pub enum FailureDistribution {
    /// At most one node fails: `p(∅) = p_empty`, `p({v}) = p_single[v]`.
    AtMostOne { p_empty: f64, p_single: Vec<f64> },
    /// Node `v` fails with probability `p[v]`, independently.
    Independent { p: Vec<f64> },
    /// Organizations fail independently; `tables[i]` is a distribution over
    /// subsets of `orgs[i]`.
    Grouped {
        orgs: Vec<NodeSet>,
        tables: Vec<Vec<(NodeSet, f64)>>,
    },
    /// Organization `i` turns fully Byzantine with probability `r[i]`;
    /// otherwise each of its nodes fails with probability `q[i]`.
    GroupedByzantine {
        orgs: Vec<NodeSet>,
        q: Vec<f64>,
        r: Vec<f64>,
    },
    /// An explicit table of `(B, p(B))`.
    Explicit { table: Vec<(NodeSet, f64)> },
}

fn check_prob(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(FbasError::InvalidDistribution(format!(
            "{what} = {x} is not in [0, 1]"
        )))
    }
}

fn check_total(total: f64, what: &str) -> Result<()> {
    if (total - 1.0).abs() <= MASS_TOLERANCE {
        Ok(())
    } else {
        Err(FbasError::InvalidDistribution(format!(
            "{what} sums to {total}, not 1"
        )))
    }
}

fn check_table(table: &[(NodeSet, f64)], within: &NodeSet, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (b, p) in table {
        check_prob(*p, what)?;
        if !b.is_subset(within) {
            return Err(FbasError::InvalidDistribution(format!(
                "{what} has an entry outside its node set"
            )));
        }
        if !seen.insert(*b) {
            return Err(FbasError::InvalidDistribution(format!("{what} repeats a set")));
        }
    }
    check_total(table.iter().map(|(_, p)| p).sum(), what)
}

fn check_partition(orgs: &[NodeSet], universe: usize) -> Result<()> {
    let mut covered = NodeSet::empty();
    for o in orgs {
        if o.is_empty() {
            return Err(FbasError::PartitionInvalid("empty organization".into()));
        }
        if o.intersects(&covered) {
            return Err(FbasError::PartitionInvalid("organizations overlap".into()));
        }
        covered = covered.union(o);
    }
    if covered != NodeSet::full(universe) {
        return Err(FbasError::PartitionInvalid(
            "organizations do not cover every node".into(),
        ));
    }
    Ok(())
}

fn byzantine_org_mass(org: &NodeSet, q: f64, r: f64, part: &NodeSet) -> f64 {
    let m = org.len() as i32;
    let k = part.len() as i32;
    let scattered = (1.0 - r) * q.powi(k) * (1.0 - q).powi(m - k);
    if part == org {
        r + (1.0 - r) * q.powi(m)
    } else {
        scattered
    }
}

impl FailureDistribution {
    /// Checks ranges, total mass and, for grouped models, that the
    /// organizations partition the `universe` nodes.
    pub fn validate(&self, universe: usize) -> Result<()> {
        let all = NodeSet::full(universe);
        match self {
            FailureDistribution::AtMostOne { p_empty, p_single } => {
                if p_single.len() != universe {
                    return Err(FbasError::InvalidDistribution(format!(
                        "{} single-node probabilities for {universe} nodes",
                        p_single.len()
                    )));
                }
                check_prob(*p_empty, "p(∅)")?;
                for p in p_single {
                    check_prob(*p, "p({v})")?;
                }
                check_total(p_empty + p_single.iter().sum::<f64>(), "the distribution")
            }
            FailureDistribution::Independent { p } => {
                if p.len() != universe {
                    return Err(FbasError::InvalidDistribution(format!(
                        "{} node probabilities for {universe} nodes",
                        p.len()
                    )));
                }
                p.iter().try_for_each(|x| check_prob(*x, "p_v"))
            }
            FailureDistribution::Grouped { orgs, tables } => {
                check_partition(orgs, universe)?;
                if orgs.len() != tables.len() {
                    return Err(FbasError::InvalidDistribution(
                        "one table per organization is required".into(),
                    ));
                }
                orgs.iter()
                    .zip(tables)
                    .try_for_each(|(o, t)| check_table(t, o, "an organization table"))
            }
            FailureDistribution::GroupedByzantine { orgs, q, r } => {
                check_partition(orgs, universe)?;
                if orgs.len() != q.len() || orgs.len() != r.len() {
                    return Err(FbasError::InvalidDistribution(
                        "one q and one r per organization are required".into(),
                    ));
                }
                q.iter().try_for_each(|x| check_prob(*x, "q"))?;
                r.iter().try_for_each(|x| check_prob(*x, "r"))
            }
            FailureDistribution::Explicit { table } => check_table(table, &all, "the table"),
        }
    }

    /// `p(B)`.
    pub fn mass(&self, b: &NodeSet) -> f64 {
        match self {
            FailureDistribution::AtMostOne { p_empty, p_single } => match b.len() {
                0 => *p_empty,
                1 => p_single[b.first().unwrap().0],
                _ => 0.0,
            },
            FailureDistribution::Independent { p } => p
                .iter()
                .enumerate()
                .map(|(v, &pv)| if b.contains(NodeId(v)) { pv } else { 1.0 - pv })
                .product(),
            FailureDistribution::Grouped { orgs, tables } => orgs
                .iter()
                .zip(tables)
                .map(|(o, t)| {
                    let part = b.intersection(o);
                    t.iter().find(|(s, _)| *s == part).map_or(0.0, |(_, p)| *p)
                })
                .product(),
            FailureDistribution::GroupedByzantine { orgs, q, r } => orgs
                .iter()
                .enumerate()
                .map(|(i, o)| byzantine_org_mass(o, q[i], r[i], &b.intersection(o)))
                .product(),
            FailureDistribution::Explicit { table } => {
                table.iter().find(|(s, _)| s == b).map_or(0.0, |(_, p)| *p)
            }
        }
    }

    /// Draws one `B`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> NodeSet {
        fn categorical<R: Rng>(rng: &mut R, table: &[(NodeSet, f64)]) -> NodeSet {
            let mut x: f64 = rng.gen();
            for (b, p) in table {
                if x < *p {
                    return *b;
                }
                x -= p;
            }
            // rounding left a sliver of mass unassigned; use the last
            // non-zero entry
            table
                .iter()
                .rev()
                .find(|(_, p)| *p > 0.0)
                .map_or(NodeSet::empty(), |(b, _)| *b)
        }
        match self {
            FailureDistribution::AtMostOne { p_empty, p_single } => {
                let mut x: f64 = rng.gen();
                if x < *p_empty {
                    return NodeSet::empty();
                }
                x -= p_empty;
                for (v, p) in p_single.iter().enumerate() {
                    if x < *p {
                        return NodeSet::singleton(NodeId(v));
                    }
                    x -= p;
                }
                p_single
                    .iter()
                    .rposition(|p| *p > 0.0)
                    .map_or(NodeSet::empty(), |v| NodeSet::singleton(NodeId(v)))
            }
            FailureDistribution::Independent { p } => p
                .iter()
                .enumerate()
                .filter(|(_, &pv)| rng.gen::<f64>() < pv)
                .map(|(v, _)| NodeId(v))
                .collect(),
            FailureDistribution::Grouped { tables, .. } => tables
                .iter()
                .fold(NodeSet::empty(), |acc, t| acc.union(&categorical(rng, t))),
            FailureDistribution::GroupedByzantine { orgs, q, r } => {
                let mut b = NodeSet::empty();
                for (i, o) in orgs.iter().enumerate() {
                    if rng.gen::<f64>() < r[i] {
                        b = b.union(o);
                    } else {
                        for v in o.iter() {
                            if rng.gen::<f64>() < q[i] {
                                b.insert(v);
                            }
                        }
                    }
                }
                b
            }
            FailureDistribution::Explicit { table } => categorical(rng, table),
        }
    }

    /// Every `B` with positive mass, paired with `p(B)`.
    fn support(&self, universe: usize) -> Vec<(NodeSet, f64)> {
        let positive = |v: Vec<(NodeSet, f64)>| v.into_iter().filter(|(_, p)| *p > 0.0).collect();
        match self {
            FailureDistribution::AtMostOne { p_empty, p_single } => {
                let mut v = vec![(NodeSet::empty(), *p_empty)];
                v.extend(
                    p_single
                        .iter()
                        .enumerate()
                        .map(|(u, p)| (NodeSet::singleton(NodeId(u)), *p)),
                );
                positive(v)
            }
            FailureDistribution::Independent { p } => {
                let mut acc = vec![(NodeSet::empty(), 1.0)];
                for (v, &pv) in p.iter().enumerate() {
                    let mut next = Vec::with_capacity(acc.len() * 2);
                    for (b, m) in &acc {
                        if pv < 1.0 {
                            next.push((*b, m * (1.0 - pv)));
                        }
                        if pv > 0.0 {
                            let mut with = *b;
                            with.insert(NodeId(v));
                            next.push((with, m * pv));
                        }
                    }
                    acc = next;
                }
                debug_assert!(acc.len() <= 1 << universe.min(63));
                acc
            }
            FailureDistribution::Grouped { tables, .. } => {
                product_support(tables.iter().map(|t| positive(t.clone())).collect())
            }
            FailureDistribution::GroupedByzantine { orgs, q, r } => {
                let per_org = orgs
                    .iter()
                    .enumerate()
                    .map(|(i, o)| {
                        let members: Vec<NodeId> = o.iter().collect();
                        positive(
                            (0u64..1 << members.len())
                                .map(|mask| {
                                    let part: NodeSet = members
                                        .iter()
                                        .enumerate()
                                        .filter(|(j, _)| mask >> j & 1 == 1)
                                        .map(|(_, v)| *v)
                                        .collect();
                                    (part, byzantine_org_mass(o, q[i], r[i], &part))
                                })
                                .collect(),
                        )
                    })
                    .collect();
                product_support(per_org)
            }
            FailureDistribution::Explicit { table } => positive(table.clone()),
        }
    }

    /// The distribution of `B ∩ keep`, re-indexed through `project`, for
    /// grouped models whose organizations lie inside or outside `keep`.
    fn restricted(&self, keep: &NodeSet, project: impl Fn(&NodeSet) -> NodeSet) -> Option<Self> {
        match self {
            FailureDistribution::Grouped { orgs, tables } => {
                let (o, t) = orgs
                    .iter()
                    .zip(tables)
                    .filter(|(o, _)| o.is_subset(keep))
                    .map(|(o, t)| (project(o), t.iter().map(|(b, p)| (project(b), *p)).collect()))
                    .unzip();
                Some(FailureDistribution::Grouped { orgs: o, tables: t })
            }
            FailureDistribution::GroupedByzantine { orgs, q, r } => {
                let idx: Vec<usize> = (0..orgs.len()).filter(|&i| orgs[i].is_subset(keep)).collect();
                Some(FailureDistribution::GroupedByzantine {
                    orgs: idx.iter().map(|&i| project(&orgs[i])).collect(),
                    q: idx.iter().map(|&i| q[i]).collect(),
                    r: idx.iter().map(|&i| r[i]).collect(),
                })
            }
            _ => None,
        }
    }
}

fn product_support(parts: Vec<Vec<(NodeSet, f64)>>) -> Vec<(NodeSet, f64)> {
    let mut acc = vec![(NodeSet::empty(), 1.0)];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (b, m) in &acc {
            for (s, p) in &part {
                next.push((b.union(s), m * p));
            }
        }
        acc = next;
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub enum Method {
    Exact,
    InclusionExclusion,
    MonteCarlo { samples: u64, seed: u64, std_error: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntactProbability {
    pub node: NodeId,
    pub p_intact: f64,
    /// `None` when `v` is ill-behaved with probability 1.
    pub p_intact_given_well_behaved: Option<f64>,
    pub method: Method,
}

fn conditional(p_intact: f64, p_well: f64) -> Option<f64> {
    (p_well > 0.0).then(|| (p_intact / p_well).min(1.0))
}

fn require_intersection(f: &Fbas) -> Result<()> {
    if quorum_intersection(f).intersects {
        Ok(())
    } else {
        Err(FbasError::NoQuorumIntersection)
    }
}

fn check_node(f: &Fbas, v: NodeId) -> Result<()> {
    if v.0 < f.universe() {
        Ok(())
    } else {
        Err(FbasError::UnknownNode(v.0))
    }
}

/// Memoizes smallest DSets. If `M` is the smallest DSet containing `B`,
/// it is also the smallest one containing any `B'` with `B ⊆ B' ⊆ M`.
struct DsetCache<'a> {
    f: &'a Fbas,
    known: Vec<(NodeSet, NodeSet)>,
    exact: HashMap<NodeSet, NodeSet>,
}

impl<'a> DsetCache<'a> {
    fn new(f: &'a Fbas) -> Self {
        DsetCache {
            f,
            known: Vec::new(),
            exact: HashMap::new(),
        }
    }

    fn smallest_dset(&mut self, b: &NodeSet) -> NodeSet {
        if let Some(m) = self.exact.get(b) {
            return *m;
        }
        if let Some((_, m)) = self
            .known
            .iter()
            .rev()
            .find(|(lo, hi)| lo.is_subset(b) && b.is_subset(hi))
        {
            return *m;
        }
        let m = intact_nodes_unchecked(self.f, b).smallest_dset;
        self.known.push((*b, m));
        self.exact.insert(*b, m);
        m
    }
}

/// Exact `P(v intact)` for every node, summing over the support of `dist`.
pub fn intact_probabilities_exact(
    f: &Fbas,
    dist: &FailureDistribution,
    guard: usize,
) -> Result<Vec<IntactProbability>> {
    dist.validate(f.universe())?;
    let n = f.universe();
    let enumerative = matches!(
        dist,
        FailureDistribution::Independent { .. }
            | FailureDistribution::Grouped { .. }
            | FailureDistribution::GroupedByzantine { .. }
    );
    if enumerative && n > guard {
        return Err(FbasError::InstanceTooLarge {
            size: n,
            limit: guard,
        });
    }
    require_intersection(f)?;
    if let FailureDistribution::AtMostOne { p_empty, p_single } = dist {
        return Ok(at_most_one(f, *p_empty, p_single));
    }
    let mut cache = DsetCache::new(f);
    let mut intact = vec![0.0; n];
    let mut well = vec![0.0; n];
    for (b, p) in dist.support(n) {
        let m = cache.smallest_dset(&b);
        for v in 0..n {
            let v = NodeId(v);
            if !m.contains(v) {
                intact[v.0] += p;
            }
            if !b.contains(v) {
                well[v.0] += p;
            }
        }
    }
    Ok((0..n)
        .map(|v| IntactProbability {
            node: NodeId(v),
            p_intact: intact[v],
            p_intact_given_well_behaved: conditional(intact[v], well[v]),
            method: Method::Exact,
        })
        .collect())
}

/// `p(∅) + Σ p({u})` over the `u` for which `v` is `{u}`-intact.
fn at_most_one(f: &Fbas, p_empty: f64, p_single: &[f64]) -> Vec<IntactProbability> {
    let n = f.universe();
    let befouled_by: Vec<NodeSet> = (0..n)
        .map(|u| intact_nodes_unchecked(f, &NodeSet::singleton(NodeId(u))).smallest_dset)
        .collect();
    (0..n)
        .map(|v| {
            let node = NodeId(v);
            let p_intact = p_empty
                + (0..n)
                    .filter(|&u| !befouled_by[u].contains(node))
                    .map(|u| p_single[u])
                    .sum::<f64>();
            IntactProbability {
                node,
                p_intact,
                p_intact_given_well_behaved: conditional(p_intact, 1.0 - p_single[v]),
                method: Method::Exact,
            }
        })
        .collect()
}

pub fn intact_probability_exact(
    f: &Fbas,
    v: NodeId,
    dist: &FailureDistribution,
) -> Result<IntactProbability> {
    check_node(f, v)?;
    Ok(intact_probabilities_exact(f, dist, DEFAULT_EXACT_GUARD)?.swap_remove(v.0))
}

/// Inclusion-minimal quorums `Q ∋ v` such that `F` without `V ∖ Q` has
/// quorum intersection; their complements are the maximal DSets avoiding
/// `v`.
pub fn maximal_dsets_avoiding(f: &Fbas, v: NodeId, cap: usize) -> Result<Vec<NodeSet>> {
    check_node(f, v)?;
    let all = f.nodes();
    let view = View::new(f, NodeSet::empty());
    let mut complements: Vec<NodeSet> = Vec::new();
    for (seen, q) in QuorumEnumerator::containing(view, NodeSet::singleton(v)).enumerate() {
        if seen >= crate::quorums::DEFAULT_QUORUM_CAP {
            return Err(FbasError::TooManyQuorums {
                cap: crate::quorums::DEFAULT_QUORUM_CAP,
            });
        }
        if complements.iter().any(|c| c.is_subset(&q)) {
            continue;
        }
        if quorum_intersection_without(f, &all.difference(&q)).intersects {
            complements.retain(|c| !q.is_subset(c));
            complements.push(q);
        }
    }
    if complements.len() > cap {
        return Err(FbasError::TooManyMaximalDsets { cap });
    }
    let mut out: Vec<NodeSet> = complements.iter().map(|q| all.difference(q)).collect();
    out.sort_unstable();
    Ok(out)
}

/// Exact `P(v intact)` for independent failures by inclusion–exclusion over
/// the maximal DSets avoiding `v`: `P(B ⊆ X) = Π_{u ∉ X} (1 - p_u)`.
pub fn intact_probability_incl_excl(
    f: &Fbas,
    v: NodeId,
    dist: &FailureDistribution,
) -> Result<IntactProbability> {
    intact_probability_incl_excl_capped(f, v, dist, DEFAULT_MAX_DSETS)
}

pub fn intact_probability_incl_excl_capped(
    f: &Fbas,
    v: NodeId,
    dist: &FailureDistribution,
    cap: usize,
) -> Result<IntactProbability> {
    let FailureDistribution::Independent { p } = dist else {
        return Err(FbasError::PreconditionViolation(
            "inclusion-exclusion needs independent failures".into(),
        ));
    };
    dist.validate(f.universe())?;
    check_node(f, v)?;
    require_intersection(f)?;
    let maximal = maximal_dsets_avoiding(f, v, cap)?;
    let all = f.nodes();
    let inside = |x: &NodeSet| -> f64 { all.difference(x).iter().map(|u| 1.0 - p[u.0]).product() };
    let m = maximal.len();
    let mut total = 0.0;
    for mask in 1u64..1 << m {
        let mut x = all;
        for (i, d) in maximal.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x = x.intersection(d);
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * inside(&x);
    }
    Ok(IntactProbability {
        node: v,
        p_intact: total,
        p_intact_given_well_behaved: conditional(total, 1.0 - p[v.0]),
        method: Method::InclusionExclusion,
    })
}

/// Exact `P(v intact)` for grouped models. When every organization lies in
/// one strongly connected component, only the smallest trust cluster
/// containing `v` and the organizations inside it matter, so the sum runs
/// there.
pub fn intact_probability_grouped(
    f: &Fbas,
    v: NodeId,
    dist: &FailureDistribution,
) -> Result<IntactProbability> {
    intact_probability_grouped_guarded(f, v, dist, DEFAULT_EXACT_GUARD)
}

pub fn intact_probability_grouped_guarded(
    f: &Fbas,
    v: NodeId,
    dist: &FailureDistribution,
    guard: usize,
) -> Result<IntactProbability> {
    let orgs = match dist {
        FailureDistribution::Grouped { orgs, .. } | FailureDistribution::GroupedByzantine { orgs, .. } => {
            orgs
        }
        _ => {
            return Err(FbasError::PreconditionViolation(
                "the grouped path needs a grouped distribution".into(),
            ))
        }
    };
    dist.validate(f.universe())?;
    check_node(f, v)?;
    let g = build_trust_graph(f);
    let p = scc_partition(&g);
    let orgs_in_sccs = orgs.iter().all(|o| p.components.iter().any(|c| o.is_subset(c)));
    let cluster = g.reachable_from(&NodeSet::singleton(v));
    if !orgs_in_sccs || cluster == f.nodes() {
        return Ok(intact_probabilities_exact(f, dist, guard)?.swap_remove(v.0));
    }
    let sub = restrict_unchecked(f, &cluster);
    let local = dist
        .restricted(&cluster, |s| sub.project(s))
        .expect("grouped variants restrict");
    let local_v = sub.local_id(v).expect("v is in its own cluster");
    let mut r = intact_probabilities_exact(&sub.fbas, &local, guard)?.swap_remove(local_v.0);
    r.node = v;
    Ok(r)
}

/// Monte Carlo estimates for `target` (or every node).
///
/// Sample `i` belongs to block `i / 1024`; block `j` draws from ChaCha8
/// seeded with `seed` on stream `j`. Blocks run in parallel and only integer
/// counts are merged, so the estimate depends on `seed` and `samples`
/// alone, not on the number of threads.
pub fn intact_probability_mc(
    f: &Fbas,
    target: Option<NodeId>,
    dist: &FailureDistribution,
    samples: u64,
    seed: u64,
) -> Result<Vec<IntactProbability>> {
    dist.validate(f.universe())?;
    if let Some(v) = target {
        check_node(f, v)?;
    }
    if samples == 0 {
        return Err(FbasError::PreconditionViolation(
            "need at least one sample".into(),
        ));
    }
    require_intersection(f)?;
    let n = f.universe();
    let blocks = samples.div_ceil(MC_BLOCK);
    let (intact, well) = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let size = MC_BLOCK.min(samples - block * MC_BLOCK);
            let mut cache = DsetCache::new(f);
            let mut intact = vec![0u64; n];
            let mut well = vec![0u64; n];
            for _ in 0..size {
                let b = dist.sample(&mut rng);
                let m = cache.smallest_dset(&b);
                for v in 0..n {
                    intact[v] += u64::from(!m.contains(NodeId(v)));
                    well[v] += u64::from(!b.contains(NodeId(v)));
                }
            }
            (intact, well)
        })
        .reduce(
            || (vec![0; n], vec![0; n]),
            |(mut a, mut b), (c, d)| {
                a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                (a, b)
            },
        );
    let nodes: Vec<usize> = match target {
        Some(v) => vec![v.0],
        None => (0..n).collect(),
    };
    Ok(nodes
        .into_iter()
        .map(|v| {
            let p = intact[v] as f64 / samples as f64;
            IntactProbability {
                node: NodeId(v),
                p_intact: p,
                p_intact_given_well_behaved: (well[v] > 0).then(|| intact[v] as f64 / well[v] as f64),
                method: Method::MonteCarlo {
                    samples,
                    seed,
                    std_error: (p * (1.0 - p) / samples as f64).sqrt(),
                },
            }
        })
        .collect())
}

/// `e³ (p_A({a₂}) + p_A({a₃}) + 3 - 2e)`: the intactness probability of
/// `a₁` in the four-organization hierarchy, where `e` is the probability
/// that an organization has no ill-behaved node.
pub fn closed_form_hierarchy_4org(e: f64, p_a2: f64, p_a3: f64) -> f64 {
    e.powi(3) * (p_a2 + p_a3 + 3.0 - 2.0 * e)
}

/// [`closed_form_hierarchy_4org`] under the grouped Byzantine model with
/// the same `q` and `r` for every organization.
pub fn closed_form_hierarchy_4org_byzantine(q: f64, r: f64) -> f64 {
    let e = (1.0 - r) * (1.0 - q).powi(3);
    let single = (1.0 - r) * q * (1.0 - q).powi(2);
    closed_form_hierarchy_4org(e, single, single)
}

/// Intactness probability of any node of the symmetric FBAS `(V, 8)` on
/// four organizations of three nodes, under the grouped Byzantine model.
/// The ill-behaved sets that keep `v` intact are those of at most three
/// other nodes, grouped by how `p(B)` factorizes.
pub fn closed_form_symmetric_12_8(q: f64, r: f64) -> f64 {
    let all_orgs_scattered = (1.0 - r).powi(4);
    let scattered = |k: i32| all_orgs_scattered * q.powi(k) * (1.0 - q).powi(12 - k);
    scattered(0)
        + 11.0 * scattered(1)
        + 55.0 * scattered(2)
        + 162.0 * scattered(3)
        + 3.0 * (1.0 - r).powi(3) * (1.0 - q).powi(9) * (r + (1.0 - r) * q.powi(3))
}

/// The grouped Byzantine model with the same `q` and `r` for every
/// organization.
pub fn uniform_grouped_byzantine(orgs: Vec<NodeSet>, q: f64, r: f64) -> FailureDistribution {
    let k = orgs.len();
    FailureDistribution::GroupedByzantine {
        orgs,
        q: vec![q; k],
        r: vec![r; k],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nodeset::set_of;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn at_most_one_on_symmetric_four() {
        let f = catalog::symmetric(4, 3);
        let dist = FailureDistribution::AtMostOne {
            p_empty: 0.6,
            p_single: vec![0.2, 0.1, 0.1, 0.0],
        };
        let r = intact_probabilities_exact(&f, &dist, 16).unwrap();
        let want = [0.8, 0.9, 0.9, 1.0];
        for (x, w) in r.iter().zip(want) {
            assert!(close(x.p_intact, w, 1e-12), "{x:?}");
            assert!(close(x.p_intact_given_well_behaved.unwrap(), 1.0, 1e-12));
        }
    }

    #[test]
    fn independent_on_symmetric_four() {
        let f = catalog::symmetric(4, 3);
        let dist = FailureDistribution::Independent {
            p: vec![0.2, 0.1, 0.1, 0.0],
        };
        let r = intact_probabilities_exact(&f, &dist, 16).unwrap();
        let want = [(0.792, 0.99), (0.882, 0.98), (0.882, 0.98), (0.954, 0.954)];
        for (x, (p, c)) in r.iter().zip(want) {
            assert!(close(x.p_intact, p, 1e-9), "{x:?}");
            assert!(close(x.p_intact_given_well_behaved.unwrap(), c, 1e-9), "{x:?}");
        }
        for x in &r {
            let ie = intact_probability_incl_excl(&f, x.node, &dist).unwrap();
            assert!(close(ie.p_intact, x.p_intact, 1e-12));
        }
        assert_eq!(
            maximal_dsets_avoiding(&f, NodeId(0), 20).unwrap(),
            vec![set_of(&[1]), set_of(&[2]), set_of(&[3])]
        );
    }

    #[test]
    fn hub_independent_formula() {
        let f = catalog::hub_and_two_triads();
        let p = vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.25, 0.12];
        let dist = FailureDistribution::Independent { p: p.clone() };
        let r = intact_probabilities_exact(&f, &dist, 16).unwrap();
        let want = (1.0 - p[0]) * (1.0 - p[1]) * (1.0 - p[2]) * (1.0 - p[6]);
        assert!(close(r[0].p_intact, want, 1e-12));
        assert!(close(r[6].p_intact_given_well_behaved.unwrap(), 1.0, 1e-12));
        let ie = intact_probability_incl_excl(&f, NodeId(0), &dist).unwrap();
        assert!(close(ie.p_intact, want, 1e-12));
    }

    #[test]
    fn zero_failures_mean_certainty() {
        let f = catalog::symmetric(5, 4);
        let dist = FailureDistribution::Independent { p: vec![0.0; 5] };
        let ie = intact_probability_incl_excl(&f, NodeId(2), &dist).unwrap();
        assert!(close(ie.p_intact, 1.0, 1e-12));
    }

    #[test]
    fn certain_failure_has_no_conditional() {
        let f = catalog::symmetric(4, 3);
        let dist = FailureDistribution::Independent {
            p: vec![1.0, 0.0, 0.0, 0.0],
        };
        let r = intact_probabilities_exact(&f, &dist, 16).unwrap();
        assert_eq!(r[0].p_intact, 0.0);
        assert_eq!(r[0].p_intact_given_well_behaved, None);
    }

    #[test]
    fn closed_forms_at_q_one_tenth_r_one_hundredth() {
        assert!(close(closed_form_hierarchy_4org(1.0, 0.0, 0.0), 1.0, 1e-15));
        assert!(close(
            closed_form_hierarchy_4org_byzantine(0.1, 0.01),
            0.65,
            0.005
        ));
        assert!(close(closed_form_symmetric_12_8(0.1, 0.01), 0.86, 0.005));
    }

    #[test]
    fn explicit_point_mass() {
        let f = catalog::hub_and_two_triads();
        let dist = FailureDistribution::Explicit {
            table: vec![(NodeSet::empty(), 1.0)],
        };
        let mc = intact_probability_mc(&f, None, &dist, 2000, 1).unwrap();
        assert!(mc.iter().all(|x| x.p_intact == 1.0));
    }

    #[test]
    fn validation() {
        let bad = FailureDistribution::AtMostOne {
            p_empty: 0.5,
            p_single: vec![0.2, 0.2],
        };
        assert!(matches!(bad.validate(2), Err(FbasError::InvalidDistribution(_))));
        let overlap = uniform_grouped_byzantine(vec![set_of(&[0, 1]), set_of(&[1, 2])], 0.1, 0.1);
        assert!(matches!(overlap.validate(3), Err(FbasError::PartitionInvalid(_))));
        let short = uniform_grouped_byzantine(vec![set_of(&[0, 1])], 0.1, 0.1);
        assert!(matches!(short.validate(3), Err(FbasError::PartitionInvalid(_))));
        let neg = FailureDistribution::Independent { p: vec![-0.1] };
        assert!(neg.validate(1).is_err());
    }

    #[test]
    fn byzantine_support_sums_to_one() {
        let dist = uniform_grouped_byzantine(vec![set_of(&[0, 1, 2]), set_of(&[3, 4])], 0.2, 0.05);
        let total: f64 = dist.support(5).iter().map(|(_, p)| p).sum();
        assert!(close(total, 1.0, 1e-12));
        for (b, p) in dist.support(5) {
            assert!(close(dist.mass(&b), p, 1e-15));
        }
    }

    #[test]
    fn mc_is_thread_count_independent() {
        let f = catalog::symmetric(4, 3);
        let dist = FailureDistribution::Independent {
            p: vec![0.2, 0.1, 0.1, 0.0],
        };
        let a = intact_probability_mc(&f, None, &dist, 5000, 42).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| intact_probability_mc(&f, None, &dist, 5000, 42).unwrap());
        assert_eq!(a, b);
    }
}
