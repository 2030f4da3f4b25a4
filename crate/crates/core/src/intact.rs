//! Dispensable sets (DSets) and intactness.
//!
//! `D` is a DSet when `F^D` has quorum intersection and `V ∖ D` is a quorum
//! (or `D = V`). A node `v` is `B`-intact when some DSet contains the
//! ill-behaved set `B` but not `v`; otherwise `v` is befouled.

use crate::error::{FbasError, Result};
use crate::fbas::{map_set, renumbering, Fbas, GeneralFbas, SubFbas};
use crate::nodeset::{NodeId, NodeSet};
use crate::quorums::{quorum_intersection, quorum_intersection_without, QuorumEnumerator, View};
use crate::trust::{build_trust_graph, is_trust_cluster, restrict_unchecked};

/// Default node-count guard for the exact `B`-intact set check.
pub const DEFAULT_B_INTACT_GUARD: usize = 20;

/// Default node-count guard for listing every DSet.
pub const DEFAULT_DSET_GUARD: usize = 16;

/// Explicit `F^D` over `V ∖ D`, re-indexed densely. Slices are cut by `D`
/// and deduplicated; deleting every node gives the empty FBAS.
pub fn delete_nodes(f: &GeneralFbas, d: &NodeSet) -> Result<SubFbas> {
    let all = NodeSet::full(f.universe());
    if let Some(bad) = d.difference(&all).first() {
        return Err(FbasError::UnknownNode(bad.0));
    }
    let keep = all.difference(d);
    let (members, forward) = renumbering(f.universe(), &keep);
    let slices = members
        .iter()
        .map(|p| {
            let mut list: Vec<NodeSet> = f
                .slices(*p)
                .iter()
                .map(|s| map_set(&s.difference(d), &forward))
                .collect();
            list.sort_unstable();
            list.dedup();
            list
        })
        .collect();
    Ok(SubFbas {
        fbas: Fbas::General(GeneralFbas::new(members.len(), slices)?),
        members,
    })
}

pub fn is_dset(f: &Fbas, d: &NodeSet) -> Result<bool> {
    let all = f.nodes();
    if let Some(bad) = d.difference(&all).first() {
        return Err(FbasError::UnknownNode(bad.0));
    }
    Ok(is_dset_unchecked(f, d))
}

pub(crate) fn is_dset_unchecked(f: &Fbas, d: &NodeSet) -> bool {
    let rest = f.nodes().difference(d);
    if rest.is_empty() {
        return true;
    }
    View::new(f, NodeSet::empty()).is_quorum(&rest) && quorum_intersection_without(f, d).intersects
}

/// Every DSet, by testing all subsets. Exponential; guarded by node count.
pub fn all_dsets(f: &Fbas, guard: usize) -> Result<Vec<NodeSet>> {
    let n = f.universe();
    if n > guard {
        return Err(FbasError::InstanceTooLarge {
            size: n,
            limit: guard,
        });
    }
    let members: Vec<NodeId> = f.nodes().iter().collect();
    let mut out: Vec<NodeSet> = (0u64..1 << n)
        .map(|mask| {
            members
                .iter()
                .filter(|v| mask >> v.0 & 1 == 1)
                .copied()
                .collect::<NodeSet>()
        })
        .filter(|d| is_dset_unchecked(f, d))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// The closed-form DSet family of a symmetric FBAS `(V, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricDsets {
    pub n: usize,
    pub k: usize,
}

impl SymmetricDsets {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(FbasError::ThresholdOutOfRange {
                node: NodeId(0),
                threshold: k,
                max: n,
            });
        }
        Ok(SymmetricDsets { n, k })
    }

    /// Largest size of a DSet other than `V` (and, for `k = 1`, the
    /// `(n-1)`-sets), or `None` when there is none.
    pub fn max_proper_size(&self) -> Option<usize> {
        let bound = (self.n - self.k).min((2 * self.k).checked_sub(self.n + 1)?);
        Some(bound)
    }

    pub fn contains(&self, d: &NodeSet) -> bool {
        let size = d.len();
        size == self.n
            || (self.k == 1 && size + 1 == self.n)
            || self.max_proper_size().is_some_and(|m| size <= m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntactnessReport {
    pub intact: NodeSet,
    /// `V ∖ intact`: the smallest DSet containing the ill-behaved set.
    pub smallest_dset: NodeSet,
    pub input_b: NodeSet,
}

/// All `B`-intact nodes. Requires quorum intersection.
pub fn intact_nodes(f: &Fbas, b: &NodeSet) -> Result<IntactnessReport> {
    if let Some(bad) = b.difference(&f.nodes()).first() {
        return Err(FbasError::UnknownNode(bad.0));
    }
    if !quorum_intersection(f).intersects {
        return Err(FbasError::NoQuorumIntersection);
    }
    Ok(intact_nodes_unchecked(f, b))
}

/// [`intact_nodes`] without the intersection precondition check.
///
/// Shrinks a candidate set until the FBAS without its complement has
/// quorum intersection; every DSet containing `B` has its complement inside
/// every candidate, so the survivor is the complement of the smallest one.
pub(crate) fn intact_nodes_unchecked(f: &Fbas, b: &NodeSet) -> IntactnessReport {
    let view = View::new(f, NodeSet::empty());
    let all = f.nodes();
    let none = NodeSet::empty();
    let mut u = all.difference(b);
    let intact = loop {
        let q = view.greatest_quorum(&u, &none);
        let r = quorum_intersection_without(f, &all.difference(&q));
        let Some((q1, q2)) = r.witness else {
            break q;
        };
        let w1 = view.greatest_quorum(&q.difference(&q1), &none);
        let w2 = view.greatest_quorum(&q.difference(&q2), &none);
        u = if w1.is_empty() {
            w2
        } else if w2.is_empty() {
            w1
        } else {
            w1.intersection(&w2)
        };
    };
    IntactnessReport {
        intact,
        smallest_dset: all.difference(&intact),
        input_b: *b,
    }
}

/// Intact nodes of the trust cluster `z` computed on `(Z, S|_Z)` alone,
/// reported with the original ids.
pub fn intact_in_cluster(f: &Fbas, z: &NodeSet, b: &NodeSet) -> Result<NodeSet> {
    if z.is_empty() || !z.is_subset(&f.nodes()) || !is_trust_cluster(&build_trust_graph(f), z) {
        return Err(FbasError::NotATrustCluster);
    }
    let sub = restrict_unchecked(f, z);
    let report = intact_nodes(&sub.fbas, &sub.project(b))?;
    Ok(sub.lift(&report.intact))
}

/// Whether `q` is a `B`-quorum: every member outside `B` has a slice inside
/// `q`.
pub fn is_b_quorum(f: &Fbas, b: &NodeSet, q: &NodeSet) -> Result<bool> {
    if q.is_empty() {
        return Err(FbasError::EmptySet);
    }
    if let Some(bad) = q.union(b).difference(&f.nodes()).first() {
        return Err(FbasError::UnknownNode(bad.0));
    }
    Ok(b_view(f, b).is_quorum(q))
}

fn b_view<'a>(f: &'a Fbas, b: &NodeSet) -> View<'a> {
    View {
        f,
        d: NodeSet::empty(),
        free: *b,
    }
}

/// Lazily enumerates the `B`-quorums.
pub fn enumerate_b_quorums<'a>(f: &'a Fbas, b: &NodeSet) -> QuorumEnumerator<'a> {
    QuorumEnumerator::new(b_view(f, &b.intersection(&f.nodes())))
}

/// Whether `u` is a `B`-intact set, with the default guard.
pub fn is_b_intact_set(f: &Fbas, b: &NodeSet, u: &NodeSet) -> Result<bool> {
    is_b_intact_set_guarded(
        f,
        b,
        u,
        DEFAULT_B_INTACT_GUARD,
        crate::quorums::DEFAULT_QUORUM_CAP,
    )
}

/// Whether `u` is a `B`-intact set: `u` is empty or a `B`-quorum, and any
/// two `B`-quorums meeting `u` also meet each other inside `u`.
pub fn is_b_intact_set_guarded(f: &Fbas, b: &NodeSet, u: &NodeSet, guard: usize, cap: usize) -> Result<bool> {
    if u.intersects(b) {
        return Err(FbasError::PreconditionViolation(
            "a B-intact set must avoid B".into(),
        ));
    }
    if f.universe() > guard {
        return Err(FbasError::InstanceTooLarge {
            size: f.universe(),
            limit: guard,
        });
    }
    if u.is_empty() {
        return Ok(true);
    }
    if !is_b_quorum(f, b, u)? {
        return Ok(false);
    }
    let mut meeting = Vec::new();
    for q in enumerate_b_quorums(f, b) {
        if q.intersects(u) {
            if meeting.len() == cap {
                return Err(FbasError::TooManyQuorums { cap });
            }
            meeting.push(q.intersection(u));
        }
    }
    Ok(meeting
        .iter()
        .enumerate()
        .all(|(i, x)| meeting[i..].iter().all(|y| x.intersects(y))))
}

/// Whether every slice of every node outside `B` contains a slice of each
/// of its members outside `B`.
pub fn has_subslice_property(f: &Fbas, b: &NodeSet) -> bool {
    let outside = f.nodes().difference(b);
    match f {
        Fbas::General(g) => outside.iter().all(|v| {
            g.slices(v)
                .iter()
                .all(|s| s.difference(b).iter().all(|u| u == v || f.has_slice_within(u, s)))
        }),
        Fbas::Simple(s) => outside.iter().all(|v| {
            let nv = s.threshold(v);
            if nv < 2 {
                // the only slice is {v}
                return true;
            }
            let qv = s.quorum_set(v);
            qv.difference(b).iter().filter(|&u| u != v).all(|u| {
                // the slice of v containing u that overlaps q(u) least
                let qu = s.quorum_set(u);
                let pair: NodeSet = [u, v].into_iter().collect();
                let spare = qv.difference(&qu.union(&pair)).len();
                let overlap = pair.intersection_len(&qu) + (nv - 2).saturating_sub(spare);
                overlap >= s.threshold(u)
            })
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fbas::{expand_simple, DEFAULT_EXPANSION_CAP};
    use crate::nodeset::set_of;

    #[test]
    fn symmetric_deletion_cuts_slices() {
        let Fbas::Simple(s) = catalog::symmetric(3, 2) else {
            panic!()
        };
        let g = expand_simple(&s, DEFAULT_EXPANSION_CAP).unwrap();
        let sub = delete_nodes(&g, &set_of(&[2])).unwrap();
        let Fbas::General(h) = &sub.fbas else { panic!() };
        assert_eq!(h.slices(NodeId(0)), &[set_of(&[0]), set_of(&[0, 1])]);
        let everything = delete_nodes(&g, &NodeSet::full(3)).unwrap();
        assert_eq!(everything.fbas.universe(), 0);
        assert_eq!(
            delete_nodes(&g, &NodeSet::empty()).unwrap().fbas,
            Fbas::General(g)
        );
    }

    #[test]
    fn hub_dsets() {
        let f = catalog::hub_and_two_triads();
        let mut want = vec![
            NodeSet::empty(),
            set_of(&[0, 1, 2]),
            set_of(&[3, 4, 5]),
            set_of(&[0, 1, 2, 3, 4, 5]),
            NodeSet::full(7),
        ];
        want.sort();
        assert_eq!(all_dsets(&f, 16).unwrap(), want);
        assert!(is_dset(&f, &NodeSet::full(7)).unwrap());
    }

    #[test]
    fn hub_intact_nodes() {
        let f = catalog::hub_and_two_triads();
        let r = intact_nodes(&f, &set_of(&[3])).unwrap();
        assert_eq!(r.intact, set_of(&[0, 1, 2, 6]));
        assert_eq!(r.smallest_dset, set_of(&[3, 4, 5]));
        assert_eq!(
            intact_nodes(&f, &NodeSet::empty()).unwrap().intact,
            NodeSet::full(7)
        );
        assert_eq!(
            intact_in_cluster(&f, &set_of(&[6]), &set_of(&[0, 3])).unwrap(),
            set_of(&[6])
        );
    }

    #[test]
    fn intact_requires_intersection() {
        assert_eq!(
            intact_nodes(&catalog::pairs(4), &NodeSet::empty()),
            Err(FbasError::NoQuorumIntersection)
        );
    }

    #[test]
    fn four_node_example() {
        let ex = catalog::no_subslice_four_nodes();
        let f = &ex.fbas;
        let a = set_of(&[0]);
        assert!(!is_dset(f, &set_of(&[0, 1])).unwrap());
        assert_eq!(intact_nodes(f, &a).unwrap().intact, NodeSet::empty());
        let mut bq: Vec<_> = enumerate_b_quorums(f, &a).collect();
        bq.sort();
        let mut want = vec![
            set_of(&[0]),
            set_of(&[0, 2, 3]),
            set_of(&[2, 3]),
            set_of(&[0, 1, 2, 3]),
        ];
        want.sort();
        assert_eq!(bq, want);
        assert!(is_b_intact_set(f, &a, &set_of(&[2, 3])).unwrap());
        assert!(is_b_intact_set(f, &a, &NodeSet::empty()).unwrap());
        assert!(!has_subslice_property(f, &a));
        assert!(is_b_quorum(f, &set_of(&[0, 1, 2, 3]), &set_of(&[1])).unwrap());
    }

    #[test]
    fn symmetric_rule_examples() {
        let r = SymmetricDsets::new(4, 3).unwrap();
        assert!(r.contains(&NodeSet::empty()));
        assert!(r.contains(&set_of(&[2])));
        assert!(!r.contains(&set_of(&[1, 2])));
        assert!(r.contains(&NodeSet::full(4)));
        let r = SymmetricDsets::new(12, 8).unwrap();
        assert_eq!(r.max_proper_size(), Some(3));
        assert_eq!(SymmetricDsets::new(4, 2).unwrap().max_proper_size(), None);
    }

    #[test]
    fn simple_subslice_formula_matches_expansion() {
        // mixed thresholds and overlapping quorum sets
        let f = crate::fbas::make_simple(
            5,
            vec![
                set_of(&[0, 1, 2, 3]),
                set_of(&[0, 1, 4]),
                set_of(&[1, 2, 3]),
                set_of(&[0, 2, 3, 4]),
                set_of(&[3, 4]),
            ],
            vec![3, 2, 2, 3, 1],
        )
        .unwrap();
        let Fbas::Simple(s) = &f else { panic!() };
        let g = Fbas::General(expand_simple(s, DEFAULT_EXPANSION_CAP).unwrap());
        for mask in 0u64..32 {
            let b = NodeSet::from_mask(mask);
            assert_eq!(
                has_subslice_property(&f, &b),
                has_subslice_property(&g, &b),
                "{b:?}"
            );
        }
    }

    #[test]
    fn symmetric_has_subslice_property() {
        for b in [NodeSet::empty(), set_of(&[1]), set_of(&[0, 3])] {
            assert!(has_subslice_property(&catalog::symmetric(5, 3), &b));
            assert!(has_subslice_property(&catalog::hub_and_two_triads(), &b));
        }
    }
}
