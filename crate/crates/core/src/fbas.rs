//! The two FBAS representations and the operations every analysis needs from
//! them: slice containment, size, expansion, and re-indexing onto a subset of
//! the nodes.

use std::collections::HashSet;

use crate::combin::{binomial, for_each_combination};
use crate::error::{FbasError, Result};
use crate::nodeset::{NodeId, NodeSet, MAX_NODES};
use crate::slices::{self, QuorumSliceDefinition};

/// Default cap on the number of slices [`expand_simple`] may generate.
pub const DEFAULT_EXPANSION_CAP: usize = 1_000_000;

/// An FBAS given by explicit quorum slices per node.
///
/// When the slices were generated from threshold trees, the trees are kept
/// as [`SliceRule`]s and slice containment is decided by evaluating them
/// instead of scanning thousands of explicit slices. The explicit list stays
/// the source of truth for equality, size and the trust graph.
#[derive(Clone, Debug)]
pub struct GeneralFbas {
    universe: usize,
    slices: Vec<Vec<NodeSet>>,
    rules: Option<Vec<SliceRule>>,
}

impl PartialEq for GeneralFbas {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.slices == other.slices
    }
}

impl Eq for GeneralFbas {}

/// A compact description of one node's slices that answers "is some slice
/// contained in this set" without enumerating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceRule {
    /// `S(v) = s(d)`.
    Tree(QuorumSliceDefinition),
    /// `S(v) = {s ∈ s(d) | v ∈ s}`.
    TreeContaining(QuorumSliceDefinition, NodeId),
    /// No compact form; scan the explicit list.
    Listed,
}

impl SliceRule {
    /// `None` when the explicit list has to be scanned.
    #[inline]
    fn satisfied_by(&self, avail: &NodeSet) -> Option<bool> {
        match self {
            SliceRule::Tree(d) => Some(slices::tree_satisfied(d, avail)),
            SliceRule::TreeContaining(d, v) => Some(slices::tree_satisfied_containing(d, avail, *v)),
            SliceRule::Listed => None,
        }
    }

    fn renumbered(&self, forward: &[Option<NodeId>]) -> Option<SliceRule> {
        Some(match self {
            SliceRule::Tree(d) => SliceRule::Tree(slices::map_definition(d, forward)),
            SliceRule::TreeContaining(d, v) => {
                SliceRule::TreeContaining(slices::map_definition(d, forward), forward[v.0]?)
            }
            SliceRule::Listed => SliceRule::Listed,
        })
    }
}

/// An FBAS where the slices of `v` are all `n(v)`-subsets of `q(v)` that
/// contain `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFbas {
    universe: usize,
    q: Vec<NodeSet>,
    n: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fbas {
    General(GeneralFbas),
    Simple(SimpleFbas),
}

fn check_universe(universe: usize) -> Result<()> {
    if universe > MAX_NODES {
        return Err(FbasError::UniverseTooLarge(universe));
    }
    Ok(())
}

impl GeneralFbas {
    /// Validates and builds an explicit FBAS. A universe of 0 is accepted
    /// here so that deleting every node stays representable.
    pub fn new(universe: usize, slices: Vec<Vec<NodeSet>>) -> Result<Self> {
        check_universe(universe)?;
        if slices.len() != universe {
            return Err(FbasError::PreconditionViolation(format!(
                "{} slice lists for {} nodes",
                slices.len(),
                universe
            )));
        }
        let all = NodeSet::full(universe);
        for (i, list) in slices.iter().enumerate() {
            let node = NodeId(i);
            if list.is_empty() {
                return Err(FbasError::EmptySliceSet { node });
            }
            let mut seen = HashSet::with_capacity(list.len());
            for s in list {
                if !s.is_subset(&all) {
                    let bad = s.difference(&all).first().expect("non-empty difference");
                    return Err(FbasError::UnknownNode(bad.0));
                }
                if !s.contains(node) {
                    return Err(FbasError::MembershipViolation { node });
                }
                if !seen.insert(*s) {
                    return Err(FbasError::DuplicateSlice { node });
                }
            }
        }
        Ok(GeneralFbas {
            universe,
            slices,
            rules: None,
        })
    }

    /// Attaches containment rules. The caller guarantees that rule `v`
    /// describes exactly `slices(v)`.
    pub(crate) fn with_rules(mut self, rules: Vec<SliceRule>) -> Self {
        debug_assert_eq!(rules.len(), self.universe);
        self.rules = Some(rules);
        self
    }

    pub fn has_rules(&self) -> bool {
        self.rules.is_some()
    }

    /// Whether some slice of `v` is contained in `avail`, scanning the
    /// explicit list even when rules are present.
    pub fn scan_slice_within(&self, v: NodeId, avail: &NodeSet) -> bool {
        self.slices[v.0].iter().any(|s| s.is_subset(avail))
    }

    /// Re-indexes onto `keep`, whose members' slices must all lie inside
    /// `keep`. Rules survive because nodes outside `keep` never occur in a
    /// slice of a kept node.
    pub(crate) fn restrict_closed(&self, keep: &NodeSet) -> (GeneralFbas, Vec<NodeId>) {
        let (members, forward) = renumbering(self.universe, keep);
        let slices = members
            .iter()
            .map(|p| self.slices[p.0].iter().map(|s| map_set(s, &forward)).collect())
            .collect();
        let rules = self.rules.as_ref().and_then(|rules| {
            members
                .iter()
                .map(|p| rules[p.0].renumbered(&forward))
                .collect::<Option<Vec<_>>>()
        });
        let g = GeneralFbas {
            universe: members.len(),
            slices,
            rules,
        };
        (g, members)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn slices(&self, v: NodeId) -> &[NodeSet] {
        &self.slices[v.0]
    }

    pub fn all_slices(&self) -> &[Vec<NodeSet>] {
        &self.slices
    }
}

impl SimpleFbas {
    pub fn new(universe: usize, q: Vec<NodeSet>, n: Vec<usize>) -> Result<Self> {
        check_universe(universe)?;
        if q.len() != universe || n.len() != universe {
            return Err(FbasError::PreconditionViolation(format!(
                "q has {} entries and n has {} for {} nodes",
                q.len(),
                n.len(),
                universe
            )));
        }
        let all = NodeSet::full(universe);
        for (i, (qv, &nv)) in q.iter().zip(n.iter()).enumerate() {
            let node = NodeId(i);
            if !qv.is_subset(&all) {
                let bad = qv.difference(&all).first().expect("non-empty difference");
                return Err(FbasError::UnknownNode(bad.0));
            }
            if !qv.contains(node) {
                return Err(FbasError::MembershipViolation { node });
            }
            if nv < 1 || nv > qv.len() {
                return Err(FbasError::ThresholdOutOfRange {
                    node,
                    threshold: nv,
                    max: qv.len(),
                });
            }
        }
        Ok(SimpleFbas { universe, q, n })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn quorum_set(&self, v: NodeId) -> NodeSet {
        self.q[v.0]
    }

    pub fn threshold(&self, v: NodeId) -> usize {
        self.n[v.0]
    }

    /// True if this is the symmetric FBAS `(V, k)` for some `k`.
    pub fn symmetric_threshold(&self) -> Option<usize> {
        let all = NodeSet::full(self.universe);
        let k = *self.n.first()?;
        (self.q.iter().all(|q| *q == all) && self.n.iter().all(|&n| n == k)).then_some(k)
    }
}

/// Builds a general FBAS. Requires at least one node.
pub fn make_general(universe: usize, slices: Vec<Vec<NodeSet>>) -> Result<Fbas> {
    if universe == 0 {
        return Err(FbasError::EmptyUniverse);
    }
    GeneralFbas::new(universe, slices).map(Fbas::General)
}

/// Builds a simple FBAS `(V, q, n)`. Requires at least one node.
pub fn make_simple(universe: usize, q: Vec<NodeSet>, n: Vec<usize>) -> Result<Fbas> {
    if universe == 0 {
        return Err(FbasError::EmptyUniverse);
    }
    SimpleFbas::new(universe, q, n).map(Fbas::Simple)
}

/// Expands a simple FBAS into explicit slices.
pub fn expand_simple(f: &SimpleFbas, cap: usize) -> Result<GeneralFbas> {
    let mut slices = Vec::with_capacity(f.universe);
    for v in 0..f.universe {
        let node = NodeId(v);
        let others: Vec<NodeId> = f.q[v].iter().filter(|&u| u != node).collect();
        let k = f.n[v] - 1;
        let needed = binomial(others.len(), k);
        if needed > cap as u128 {
            return Err(FbasError::ExpansionTooLarge { needed, cap });
        }
        let mut list = Vec::with_capacity(needed as usize);
        for_each_combination(others.len(), k, |idx| {
            let mut s = NodeSet::singleton(node);
            for &i in idx {
                s.insert(others[i]);
            }
            list.push(s);
        });
        slices.push(list);
    }
    GeneralFbas::new(f.universe, slices)
}

impl Fbas {
    pub fn universe(&self) -> usize {
        match self {
            Fbas::General(g) => g.universe,
            Fbas::Simple(s) => s.universe,
        }
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.universe())
    }

    pub fn is_simple(&self) -> bool {
        matches!(self, Fbas::Simple(_))
    }

    /// Whether `v` has a slice contained in `avail`.
    ///
    /// With `avail = U ∪ D` this decides slice containment in `F^D`: for
    /// explicit slices `s ∖ D ⊆ U ⟺ s ⊆ U ∪ D`, and for simple FBAS the
    /// count `|(U ∪ D) ∩ q(v)| ≥ n(v)` is exact.
    #[inline]
    pub fn has_slice_within(&self, v: NodeId, avail: &NodeSet) -> bool {
        match self {
            Fbas::General(g) => g
                .rules
                .as_ref()
                .and_then(|rules| rules[v.0].satisfied_by(avail))
                .unwrap_or_else(|| g.scan_slice_within(v, avail)),
            Fbas::Simple(s) => s.q[v.0].intersection_len(avail) >= s.n[v.0],
        }
    }

    /// Nodes `u` such that `u ∈ s` for some slice `s` of `v`.
    pub fn trusted_by(&self, v: NodeId) -> NodeSet {
        match self {
            Fbas::General(g) => g.slices[v.0].iter().fold(NodeSet::empty(), |acc, s| acc.union(s)),
            Fbas::Simple(s) => s.q[v.0],
        }
    }

    /// `‖v‖`: total slice size for explicit slices, `|q(v)|` for simple FBAS.
    pub fn node_size(&self, v: NodeId) -> usize {
        match self {
            Fbas::General(g) => g.slices[v.0].iter().map(NodeSet::len).sum(),
            Fbas::Simple(s) => s.q[v.0].len(),
        }
    }

    /// `‖F‖ = |V| + Σ ‖v‖`.
    pub fn size(&self) -> usize {
        self.universe()
            + (0..self.universe())
                .map(|v| self.node_size(NodeId(v)))
                .sum::<usize>()
    }

    /// Explicit slices, expanding a simple FBAS under `cap`.
    pub fn to_general(&self, cap: usize) -> Result<GeneralFbas> {
        match self {
            Fbas::General(g) => Ok(g.clone()),
            Fbas::Simple(s) => expand_simple(s, cap),
        }
    }
}

/// Size of an FBAS, see [`Fbas::size`].
pub fn fbas_size(f: &Fbas) -> usize {
    f.size()
}

/// An FBAS over a subset of another FBAS's nodes, re-indexed densely.
///
/// `members[i]` is the parent id of local node `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubFbas {
    pub fbas: Fbas,
    pub members: Vec<NodeId>,
}

impl SubFbas {
    /// Maps a local set to parent ids.
    pub fn lift(&self, s: &NodeSet) -> NodeSet {
        s.iter().map(|v| self.members[v.0]).collect()
    }

    /// Maps the parent-id members of `s` that belong to this subsystem to
    /// local ids; other members are dropped.
    pub fn project(&self, s: &NodeSet) -> NodeSet {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, p)| s.contains(**p))
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    pub fn local_id(&self, parent: NodeId) -> Option<NodeId> {
        self.members.iter().position(|&p| p == parent).map(NodeId)
    }
}

/// Renumbers the members of `keep` to `0..|keep|`; returns the forward map
/// indexed by parent id.
pub(crate) fn renumbering(universe: usize, keep: &NodeSet) -> (Vec<NodeId>, Vec<Option<NodeId>>) {
    let members: Vec<NodeId> = keep.iter().collect();
    let mut forward = vec![None; universe];
    for (i, p) in members.iter().enumerate() {
        forward[p.0] = Some(NodeId(i));
    }
    (members, forward)
}

pub(crate) fn map_set(s: &NodeSet, forward: &[Option<NodeId>]) -> NodeSet {
    s.iter().filter_map(|v| forward[v.0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nodeset::set_of;

    #[test]
    fn hub_and_triads_is_valid_and_sized() {
        let f = catalog::hub_and_two_triads();
        assert_eq!(f.universe(), 7);
        assert_eq!(f.size(), 32);
    }

    #[test]
    fn rejects_slice_without_owner() {
        let r = make_general(2, vec![vec![set_of(&[1])], vec![set_of(&[1])]]);
        assert_eq!(r, Err(FbasError::MembershipViolation { node: NodeId(0) }));
    }

    #[test]
    fn rejects_empty_slice_list() {
        let r = make_general(2, vec![vec![set_of(&[0])], vec![]]);
        assert_eq!(r, Err(FbasError::EmptySliceSet { node: NodeId(1) }));
    }

    #[test]
    fn rejects_out_of_range_member() {
        let r = make_general(2, vec![vec![set_of(&[0, 5])], vec![set_of(&[1])]]);
        assert_eq!(r, Err(FbasError::UnknownNode(5)));
    }

    #[test]
    fn rejects_duplicate_slices() {
        let r = make_general(1, vec![vec![set_of(&[0]), set_of(&[0])]]);
        assert_eq!(r, Err(FbasError::DuplicateSlice { node: NodeId(0) }));
    }

    #[test]
    fn single_node_fbas() {
        let f = make_general(1, vec![vec![set_of(&[0])]]).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(make_general(0, vec![]), Err(FbasError::EmptyUniverse));
    }

    #[test]
    fn simple_validation() {
        let all = NodeSet::full(4);
        let f = make_simple(4, vec![all; 4], vec![3; 4]).unwrap();
        assert_eq!(f.size(), 20);
        let bad = make_simple(3, vec![set_of(&[0, 1, 2]); 3], vec![4, 1, 1]);
        assert!(matches!(
            bad,
            Err(FbasError::ThresholdOutOfRange {
                threshold: 4,
                max: 3,
                ..
            })
        ));
        let zero = make_simple(1, vec![set_of(&[0])], vec![0]);
        assert!(matches!(zero, Err(FbasError::ThresholdOutOfRange { .. })));
        let missing = make_simple(2, vec![set_of(&[1]), set_of(&[1])], vec![1, 1]);
        assert_eq!(missing, Err(FbasError::MembershipViolation { node: NodeId(0) }));
        // every node alone
        let singles = make_simple(3, (0..3).map(|i| set_of(&[i])).collect(), vec![1; 3]);
        assert!(singles.is_ok());
    }

    #[test]
    fn expansion_counts() {
        let Fbas::Simple(s) = catalog::symmetric(3, 2) else {
            unreachable!()
        };
        let g = expand_simple(&s, DEFAULT_EXPANSION_CAP).unwrap();
        assert_eq!(g.slices(NodeId(0)), &[set_of(&[0, 1]), set_of(&[0, 2])]);

        let Fbas::Simple(s) = catalog::symmetric(4, 3) else {
            unreachable!()
        };
        let g = expand_simple(&s, DEFAULT_EXPANSION_CAP).unwrap();
        for v in 0..4 {
            // brute force: 3-subsets of 4 nodes that contain v
            let brute = (0u64..16)
                .filter(|m| m.count_ones() == 3 && m >> v & 1 == 1)
                .count();
            assert_eq!(g.slices(NodeId(v)).len(), brute);
            assert_eq!(brute, 3);
        }

        let Fbas::Simple(s) = catalog::symmetric(5, 5) else {
            unreachable!()
        };
        let g = expand_simple(&s, DEFAULT_EXPANSION_CAP).unwrap();
        for v in 0..5 {
            assert_eq!(g.slices(NodeId(v)), &[NodeSet::full(5)]);
        }

        let Fbas::Simple(s) = catalog::symmetric(30, 15) else {
            unreachable!()
        };
        assert!(matches!(
            expand_simple(&s, 1000),
            Err(FbasError::ExpansionTooLarge { .. })
        ));
    }

    #[test]
    fn sub_fbas_maps() {
        let sub = SubFbas {
            fbas: catalog::symmetric(2, 1),
            members: vec![NodeId(3), NodeId(5)],
        };
        assert_eq!(sub.lift(&set_of(&[1])), set_of(&[5]));
        assert_eq!(sub.project(&set_of(&[1, 3, 5])), set_of(&[0, 1]));
        assert_eq!(sub.local_id(NodeId(5)), Some(NodeId(1)));
    }
}
