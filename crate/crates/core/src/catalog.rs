//! Small, well-understood FBAS instances used by tests, the CLI and the
//! documentation.

use crate::fbas::{make_general, make_simple, Fbas};
use crate::nodeset::{set_of, NameTable, NodeSet};
use crate::slices::{
    fbas_from_definition_pool, generate_org_fbas, org_definition, org_layout, OrgFbas, Organization,
    QuorumSliceDefinition,
};

/// An FBAS together with its node names and, where meaningful, its
/// organizations.
#[derive(Clone, Debug)]
pub struct NamedFbas {
    pub fbas: Fbas,
    pub names: NameTable,
    pub organizations: Vec<Organization>,
}

/// Seven nodes: two triads `{1,2,3}` and `{4,5,6}` that each also need node
/// 7, and node 7 which trusts only itself. Quorums are `{7}`, `{1,2,3,7}`,
/// `{4,5,6,7}` and `V`.
pub fn hub_and_two_triads() -> Fbas {
    let left = set_of(&[0, 1, 2, 6]);
    let right = set_of(&[3, 4, 5, 6]);
    let mut slices = vec![vec![left]; 3];
    slices.extend(vec![vec![right]; 3]);
    slices.push(vec![set_of(&[6])]);
    make_general(7, slices).expect("valid")
}

pub fn hub_and_two_triads_named() -> NamedFbas {
    NamedFbas {
        fbas: hub_and_two_triads(),
        names: NameTable::numbered(7),
        organizations: Vec::new(),
    }
}

/// Four nodes `a, b, c, d` where `{c, d}` is a `{a}`-intact set although no
/// node is `{a}`-intact.
pub fn no_subslice_four_nodes() -> NamedFbas {
    let (a, b, c, d) = (0, 1, 2, 3);
    let slices = vec![
        vec![set_of(&[a, b])],
        vec![set_of(&[a, b, c, d])],
        vec![set_of(&[b, c]), set_of(&[c, d])],
        vec![set_of(&[b, d]), set_of(&[c, d])],
    ];
    NamedFbas {
        fbas: make_general(4, slices).expect("valid"),
        names: NameTable::new(["a", "b", "c", "d"]).expect("unique"),
        organizations: Vec::new(),
    }
}

/// Every node trusts only itself: every non-empty set is a quorum.
pub fn isolated(n: usize) -> Fbas {
    make_simple(n, (0..n).map(|i| set_of(&[i])).collect(), vec![1; n]).expect("valid")
}

/// Every node's only slice is `V`: `V` is the only quorum.
pub fn all_or_nothing(n: usize) -> Fbas {
    make_general(n, vec![vec![NodeSet::full(n)]; n]).expect("valid")
}

/// `S(i) = {{i, j} | j ≠ i}` as explicit slices.
pub fn pairs(n: usize) -> Fbas {
    let slices = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| set_of(&[i, j])).collect())
        .collect();
    make_general(n, slices).expect("valid")
}

/// Symmetric simple FBAS `(V, k)` with `|V| = n`.
pub fn symmetric(n: usize, k: usize) -> Fbas {
    crate::slices::generate_symmetric(n, k).expect("1 <= k <= n")
}

/// The 20-node core of the Stellar network as of November 2019: six
/// organizations of sizes 3,3,3,3,3,5, five of which must be covered, two
/// nodes per 3-node organization and three of the 5-node one.
pub fn stellar_2019() -> OrgFbas {
    generate_org_fbas(&[3, 3, 3, 3, 3, 5], &[2, 2, 2, 2, 2, 3], 5).expect("valid parameters")
}

/// The shared definition behind [`stellar_2019`] and [`six_org_hierarchy`].
pub fn six_org_definition() -> QuorumSliceDefinition {
    let (_, orgs) = org_layout(&[3, 3, 3, 3, 3, 5]).expect("small");
    org_definition(&orgs, &[2, 2, 2, 2, 2, 3], 5).expect("valid")
}

/// Same organizations as [`stellar_2019`], but the slices of `v` are the
/// sets generated by the un-personalized definition that happen to contain
/// `v`.
pub fn six_org_hierarchy() -> NamedFbas {
    pooled(&[3, 3, 3, 3, 3, 5], &[2, 2, 2, 2, 2, 3], 5)
}

/// Four organizations of three nodes; slices pick three organizations and
/// two nodes in each, filtered to those containing the node.
pub fn four_org_hierarchy() -> NamedFbas {
    pooled(&[3, 3, 3, 3], &[2, 2, 2, 2], 3)
}

fn pooled(sizes: &[usize], org_thresholds: &[usize], root: usize) -> NamedFbas {
    let (names, organizations) = org_layout(sizes).expect("small");
    let d = org_definition(&organizations, org_thresholds, root).expect("valid");
    NamedFbas {
        fbas: fbas_from_definition_pool(names.len(), &d).expect("pool covers every node"),
        names,
        organizations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodeset::NodeId;

    #[test]
    fn six_org_hierarchy_slice_counts() {
        let h = six_org_hierarchy();
        let Fbas::General(g) = &h.fbas else { panic!() };
        let f = h.organizations[5].members;
        for v in 0..20 {
            let want = if f.contains(NodeId(v)) { 2430 } else { 2322 };
            assert_eq!(g.slices(NodeId(v)).len(), want);
        }
    }

    #[test]
    fn four_org_hierarchy_shape() {
        let h = four_org_hierarchy();
        assert_eq!(h.fbas.universe(), 12);
        // 4 choices of three orgs, 3^3 node pairs each: 108 sets in the pool,
        // of which those containing a1 pick org A (3 of 4 triples) and a pair
        // containing a1 (2 of 3)
        let Fbas::General(g) = &h.fbas else { panic!() };
        assert_eq!(g.slices(NodeId(0)).len(), 3 * 2 * 9);
    }

    #[test]
    fn small_families() {
        assert_eq!(isolated(3).universe(), 3);
        assert_eq!(all_or_nothing(3).size(), 3 + 9);
        assert_eq!(pairs(4).size(), 4 + 4 * 3 * 2);
        assert_eq!(no_subslice_four_nodes().names.id("c"), Some(NodeId(2)));
    }
}
