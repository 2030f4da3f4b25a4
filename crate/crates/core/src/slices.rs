//! Threshold-tree quorum slice definitions.
//!
//! A definition `(t, N, C)` picks `t` members out of its validators `N` and
//! child definitions `C`; a slice is the union of one choice per picked
//! member. Nodes run a *personalized* definition that puts themselves at the
//! top level.

use std::collections::HashSet;

use crate::combin::{binomial, for_each_combination};
use crate::error::{FbasError, Result};
use crate::fbas::{make_general, make_simple, Fbas, SliceRule};
use crate::nodeset::{NameTable, NodeId, NodeSet, MAX_NODES};

pub use crate::combin::k_subsets;

/// Default cap on the number of distinct slices one definition may generate.
pub const DEFAULT_GENERATION_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuorumSliceDefinition {
    pub threshold: usize,
    pub validators: NodeSet,
    pub inner: Vec<QuorumSliceDefinition>,
}

/// A named group of nodes run by one operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Organization {
    pub name: String,
    pub members: NodeSet,
}

impl QuorumSliceDefinition {
    pub fn new(threshold: usize, validators: NodeSet, inner: Vec<QuorumSliceDefinition>) -> Self {
        QuorumSliceDefinition {
            threshold,
            validators,
            inner,
        }
    }

    /// A leaf `(t, N, ∅)`.
    pub fn leaf(threshold: usize, validators: NodeSet) -> Self {
        Self::new(threshold, validators, Vec::new())
    }

    /// Union of the validators of every vertex.
    pub fn all_validators(&self) -> NodeSet {
        self.inner
            .iter()
            .fold(self.validators, |acc, c| acc.union(&c.all_validators()))
    }

    /// Checks threshold bounds and pairwise disjointness of validator sets.
    pub fn validate(&self) -> Result<()> {
        fn walk(d: &QuorumSliceDefinition, seen: &mut NodeSet) -> Result<()> {
            let members = d.validators.len() + d.inner.len();
            if d.threshold > members {
                return Err(FbasError::InvalidDefinition(format!(
                    "threshold {} exceeds {} members",
                    d.threshold, members
                )));
            }
            if seen.intersects(&d.validators) {
                let dup = seen.intersection(&d.validators).first().unwrap();
                return Err(FbasError::InvalidDefinition(format!(
                    "node {dup} appears in two vertices"
                )));
            }
            *seen = seen.union(&d.validators);
            d.inner.iter().try_for_each(|c| walk(c, seen))
        }
        walk(self, &mut NodeSet::empty())
    }
}

/// All unions `m_1 ∪ … ∪ m_k` with one `m_i` from each `M_i`, deduplicated
/// and sorted. The empty family yields `{∅}`.
pub fn product_set_union(families: &[Vec<NodeSet>]) -> Vec<NodeSet> {
    let refs: Vec<&[NodeSet]> = families.iter().map(Vec::as_slice).collect();
    product_union_capped(&refs, usize::MAX).expect("uncapped")
}

fn product_union_capped(families: &[&[NodeSet]], cap: usize) -> Result<Vec<NodeSet>> {
    let mut acc: Vec<NodeSet> = vec![NodeSet::empty()];
    for fam in families {
        let mut next = HashSet::with_capacity(acc.len() * fam.len());
        for a in &acc {
            for m in fam.iter() {
                next.insert(a.union(m));
                if next.len() > cap {
                    return Err(FbasError::ExpansionTooLarge {
                        needed: next.len() as u128,
                        cap,
                    });
                }
            }
        }
        acc = next.into_iter().collect();
    }
    acc.sort_unstable();
    Ok(acc)
}

/// Generates the slices `s(d)`, sorted and without duplicates.
pub fn generate_slices(d: &QuorumSliceDefinition) -> Result<Vec<NodeSet>> {
    generate_slices_capped(d, DEFAULT_GENERATION_CAP)
}

pub fn generate_slices_capped(d: &QuorumSliceDefinition, cap: usize) -> Result<Vec<NodeSet>> {
    d.validate()?;
    generate_rec(d, cap)
}

fn generate_rec(d: &QuorumSliceDefinition, cap: usize) -> Result<Vec<NodeSet>> {
    let mut options: Vec<Vec<NodeSet>> = d.validators.iter().map(|v| vec![NodeSet::singleton(v)]).collect();
    for c in &d.inner {
        options.push(generate_rec(c, cap)?);
    }
    let mut out: HashSet<NodeSet> = HashSet::new();
    let mut failure = None;
    for_each_combination(options.len(), d.threshold, |idx| {
        if failure.is_some() {
            return;
        }
        let picked: Vec<&[NodeSet]> = idx.iter().map(|&i| options[i].as_slice()).collect();
        match product_union_capped(&picked, cap) {
            Ok(slices) => {
                out.extend(slices);
                if out.len() > cap {
                    failure = Some(FbasError::ExpansionTooLarge {
                        needed: out.len() as u128,
                        cap,
                    });
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out: Vec<NodeSet> = out.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// `R_v(d)`: removes `v` from the vertex holding it and lowers that
/// vertex's threshold by one (saturating at 0).
pub fn remove_node(d: &QuorumSliceDefinition, v: NodeId) -> QuorumSliceDefinition {
    if d.validators.contains(v) {
        let mut validators = d.validators;
        validators.remove(v);
        QuorumSliceDefinition::new(d.threshold.saturating_sub(1), validators, d.inner.clone())
    } else {
        QuorumSliceDefinition::new(
            d.threshold,
            d.validators,
            d.inner.iter().map(|c| remove_node(c, v)).collect(),
        )
    }
}

/// Whether some slice of `s(d)` lies inside `avail`: at least `t` members
/// of the vertex are available (validators) or satisfied (children).
pub fn tree_satisfied(d: &QuorumSliceDefinition, avail: &NodeSet) -> bool {
    let mut count = d.validators.intersection_len(avail);
    if count >= d.threshold {
        return true;
    }
    for c in &d.inner {
        if tree_satisfied(c, avail) {
            count += 1;
            if count >= d.threshold {
                return true;
            }
        }
    }
    false
}

/// Whether some slice of `s(d)` that contains `v` lies inside `avail`.
///
/// Validator sets are disjoint, so exactly one member of each vertex on the
/// path to `v` can supply it; that member is forced and `t - 1` others must
/// be satisfied.
pub fn tree_satisfied_containing(d: &QuorumSliceDefinition, avail: &NodeSet, v: NodeId) -> bool {
    if !avail.contains(v) || d.threshold == 0 {
        return false;
    }
    let need = d.threshold - 1;
    let forced_child = if d.validators.contains(v) {
        None
    } else {
        match d.inner.iter().position(|c| c.all_validators().contains(v)) {
            Some(i) => Some(i),
            None => return false,
        }
    };
    let mut others = d.validators.intersection_len(avail) - usize::from(forced_child.is_none());
    for (i, c) in d.inner.iter().enumerate() {
        if others >= need {
            break;
        }
        if Some(i) != forced_child && tree_satisfied(c, avail) {
            others += 1;
        }
    }
    if others < need {
        return false;
    }
    match forced_child {
        None => true,
        Some(i) => tree_satisfied_containing(&d.inner[i], avail, v),
    }
}

/// Renames validators through `forward`, dropping unmapped ones.
pub(crate) fn map_definition(d: &QuorumSliceDefinition, forward: &[Option<NodeId>]) -> QuorumSliceDefinition {
    QuorumSliceDefinition::new(
        d.threshold,
        d.validators
            .iter()
            .filter_map(|v| forward.get(v.0).copied().flatten())
            .collect(),
        d.inner.iter().map(|c| map_definition(c, forward)).collect(),
    )
}

/// `(2, {v}, {R_v(d)})`: the definition node `v` actually runs.
pub fn personalize(d: &QuorumSliceDefinition, v: NodeId) -> QuorumSliceDefinition {
    QuorumSliceDefinition::new(2, NodeSet::singleton(v), vec![remove_node(d, v)])
}

/// Builds a general FBAS where node `v` uses the personalization of
/// `definitions[v]`.
pub fn fbas_from_definitions(definitions: &[QuorumSliceDefinition], cap: usize) -> Result<Fbas> {
    let n = definitions.len();
    let all = NodeSet::full(n.min(MAX_NODES));
    let mut slices = Vec::with_capacity(n);
    let mut rules = Vec::with_capacity(n);
    for (i, d) in definitions.iter().enumerate() {
        if let Some(bad) = d.all_validators().difference(&all).first() {
            return Err(FbasError::UnknownNode(bad.0));
        }
        let p = personalize(d, NodeId(i));
        slices.push(generate_slices_capped(&p, cap)?);
        rules.push(SliceRule::Tree(p));
    }
    with_rules(make_general(n, slices)?, rules)
}

fn with_rules(f: Fbas, rules: Vec<SliceRule>) -> Result<Fbas> {
    match f {
        Fbas::General(g) => Ok(Fbas::General(g.with_rules(rules))),
        simple => Ok(simple),
    }
}

/// Builds a general FBAS whose slices are the sets of `s(d)` containing the
/// node, over `universe` nodes.
pub fn fbas_from_definition_pool(universe: usize, d: &QuorumSliceDefinition) -> Result<Fbas> {
    let pool = generate_slices(d)?;
    let f = fbas_from_slice_pool(universe, &pool)?;
    let rules = (0..universe)
        .map(|v| SliceRule::TreeContaining(d.clone(), NodeId(v)))
        .collect();
    with_rules(f, rules)
}

/// Builds a general FBAS from a pool of sets: `S(v) = {U ∈ pool | v ∈ U}`.
pub fn fbas_from_slice_pool(universe: usize, pool: &[NodeSet]) -> Result<Fbas> {
    let mut slices = vec![Vec::new(); universe];
    for s in pool {
        for v in s.iter() {
            if v.0 >= universe {
                return Err(FbasError::UnknownNode(v.0));
            }
            slices[v.0].push(*s);
        }
    }
    for list in &mut slices {
        list.sort_unstable();
        list.dedup();
    }
    make_general(universe, slices)
}

/// An FBAS generated from organizations together with its naming.
#[derive(Clone, Debug)]
pub struct OrgFbas {
    pub fbas: Fbas,
    pub names: NameTable,
    pub organizations: Vec<Organization>,
    /// The shared, not yet personalized definition.
    pub definition: QuorumSliceDefinition,
}

fn org_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("O{}", i + 1)
    }
}

fn member_name(org: &str, j: usize) -> String {
    if org.len() == 1 {
        format!("{}{}", org.to_lowercase(), j + 1)
    } else {
        format!("{}_{}", org.to_lowercase(), j + 1)
    }
}

/// Lays out `org_sizes.len()` organizations on consecutive ids and returns
/// their names and member sets.
pub fn org_layout(org_sizes: &[usize]) -> Result<(NameTable, Vec<Organization>)> {
    let total: usize = org_sizes.iter().sum();
    if total > MAX_NODES {
        return Err(FbasError::UniverseTooLarge(total));
    }
    let mut names = Vec::with_capacity(total);
    let mut orgs = Vec::with_capacity(org_sizes.len());
    let mut next = 0;
    for (i, &size) in org_sizes.iter().enumerate() {
        let name = org_name(i);
        let mut members = NodeSet::empty();
        for j in 0..size {
            names.push(member_name(&name, j));
            members.insert(NodeId(next));
            next += 1;
        }
        orgs.push(Organization { name, members });
    }
    Ok((NameTable::new(names)?, orgs))
}

/// The two-level definition `(t, ∅, {(t_1, A_1, ∅), …})` over organizations.
pub fn org_definition(
    orgs: &[Organization],
    org_thresholds: &[usize],
    root_threshold: usize,
) -> Result<QuorumSliceDefinition> {
    if orgs.len() != org_thresholds.len() {
        return Err(FbasError::PreconditionViolation(format!(
            "{} organizations but {} thresholds",
            orgs.len(),
            org_thresholds.len()
        )));
    }
    let d = QuorumSliceDefinition::new(
        root_threshold,
        NodeSet::empty(),
        orgs.iter()
            .zip(org_thresholds)
            .map(|(o, &t)| QuorumSliceDefinition::leaf(t, o.members))
            .collect(),
    );
    d.validate()?;
    Ok(d)
}

/// Organizations sharing the definition `(t, ∅, {(t_i, A_i, ∅)})`, each node
/// using its personalization.
pub fn generate_org_fbas(
    org_sizes: &[usize],
    org_thresholds: &[usize],
    root_threshold: usize,
) -> Result<OrgFbas> {
    if org_sizes.is_empty() || org_sizes.contains(&0) {
        return Err(FbasError::PreconditionViolation(
            "every organization needs at least one node".into(),
        ));
    }
    let (names, organizations) = org_layout(org_sizes)?;
    let definition = org_definition(&organizations, org_thresholds, root_threshold)?;
    let n = names.len();
    let fbas = fbas_from_definitions(&vec![definition.clone(); n], DEFAULT_GENERATION_CAP)?;
    Ok(OrgFbas {
        fbas,
        names,
        organizations,
        definition,
    })
}

/// The symmetric simple FBAS `(V, k)` on `n` nodes.
pub fn generate_symmetric(n: usize, k: usize) -> Result<Fbas> {
    if n == 0 {
        return Err(FbasError::EmptyUniverse);
    }
    if k < 1 || k > n {
        return Err(FbasError::ThresholdOutOfRange {
            node: NodeId(0),
            threshold: k,
            max: n,
        });
    }
    make_simple(n, vec![NodeSet::full(n); n], vec![k; n])
}

/// Upper bound on `|s(d)|` before deduplication; used to reject hopeless
/// requests early.
pub fn slice_count_bound(d: &QuorumSliceDefinition) -> u128 {
    let mut counts: Vec<u128> = vec![1; d.validators.len()];
    counts.extend(d.inner.iter().map(slice_count_bound));
    // sum over t-subsets of the product of their counts; bounded crudely
    let max = counts.iter().copied().max().unwrap_or(1);
    binomial(counts.len(), d.threshold).saturating_mul(max.saturating_pow(d.threshold as u32))
}
