//! The trust graph, its strongly connected components and trust clusters.

use crate::error::{FbasError, Result};
use crate::fbas::{map_set, renumbering, Fbas, SimpleFbas, SubFbas};
use crate::nodeset::{NodeId, NodeSet};

/// Edge `(u, v)` whenever `v` occurs in some slice of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrustGraph {
    out: Vec<NodeSet>,
}

impl TrustGraph {
    pub fn universe(&self) -> usize {
        self.out.len()
    }

    pub fn successors(&self, v: NodeId) -> NodeSet {
        self.out[v.0]
    }

    /// Number of nodes (including `v` itself) that trust `v`.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.out.len()];
        for succ in &self.out {
            for v in succ.iter() {
                deg[v.0] += 1;
            }
        }
        deg
    }

    /// All nodes reachable from some member of `from`, including `from`.
    pub fn reachable_from(&self, from: &NodeSet) -> NodeSet {
        let mut seen = *from;
        let mut frontier = *from;
        while !frontier.is_empty() {
            let mut next = NodeSet::empty();
            for u in frontier.iter() {
                next = next.union(&self.out[u.0]);
            }
            frontier = next.difference(&seen);
            seen = seen.union(&frontier);
        }
        seen
    }
}

pub fn build_trust_graph(f: &Fbas) -> TrustGraph {
    TrustGraph {
        out: f.nodes().iter().map(|v| f.trusted_by(v)).collect(),
    }
}

/// Strongly connected components with their condensation order.
///
/// Components are numbered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<NodeSet>,
    /// Component index of every node.
    pub component_of: Vec<usize>,
    /// Condensation DAG: components directly reachable from each component,
    /// excluding itself.
    pub successors: Vec<Vec<usize>>,
    /// Components from which no other component is reachable.
    pub maximal: Vec<usize>,
    /// The component reachable from every other one, if any.
    pub greatest: Option<usize>,
}

impl SccPartition {
    pub fn greatest_set(&self) -> Option<NodeSet> {
        self.greatest.map(|i| self.components[i])
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn scc_partition(g: &TrustGraph) -> SccPartition {
    const UNSEEN: usize = usize::MAX;
    let n = g.universe();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw: Vec<NodeSet> = Vec::new();
    let mut counter = 0;
    // (node, successors still to visit)
    let mut calls: Vec<(usize, crate::nodeset::Iter)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, g.out[root].iter()));

        while let Some(top) = calls.last_mut() {
            let u = top.0;
            if let Some(w) = top.1.next() {
                let w = w.0;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, g.out[w].iter()));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some((parent, _)) = calls.last() {
                low[*parent] = low[*parent].min(low[u]);
            }
            if low[u] == index[u] {
                let mut comp = NodeSet::empty();
                loop {
                    let w = stack.pop().expect("u is on the stack");
                    on_stack[w] = false;
                    comp.insert(NodeId(w));
                    if w == u {
                        break;
                    }
                }
                raw.push(comp);
            }
        }
    }

    raw.sort_by_key(|c| c.first());
    let mut component_of = vec![0; n];
    for (i, c) in raw.iter().enumerate() {
        for v in c.iter() {
            component_of[v.0] = i;
        }
    }
    let successors: Vec<Vec<usize>> = raw
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut s: Vec<usize> = c
                .iter()
                .flat_map(|u| g.out[u.0].iter())
                .map(|w| component_of[w.0])
                .filter(|&j| j != i)
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let maximal: Vec<usize> = (0..raw.len()).filter(|&i| successors[i].is_empty()).collect();
    // In a finite DAG a unique sink is reachable from everything; confirm by
    // one reverse traversal anyway.
    let greatest = match maximal.as_slice() {
        [sink] => {
            let mut preds = vec![Vec::new(); raw.len()];
            for (i, s) in successors.iter().enumerate() {
                for &j in s {
                    preds[j].push(i);
                }
            }
            let mut seen = vec![false; raw.len()];
            let mut todo = vec![*sink];
            seen[*sink] = true;
            while let Some(c) = todo.pop() {
                for &p in &preds[c] {
                    if !seen[p] {
                        seen[p] = true;
                        todo.push(p);
                    }
                }
            }
            seen.iter().all(|&b| b).then_some(*sink)
        }
        _ => None,
    };
    SccPartition {
        components: raw,
        component_of,
        successors,
        maximal,
        greatest,
    }
}

/// Whether `z` is closed under reachability.
pub fn is_trust_cluster(g: &TrustGraph, z: &NodeSet) -> bool {
    z.iter().all(|u| g.out[u.0].is_subset(z))
}

/// The FBAS `(Z, S|_Z)` for a non-empty trust cluster `Z`.
pub fn restrict(f: &Fbas, z: &NodeSet) -> Result<SubFbas> {
    if z.is_empty() || !z.is_subset(&f.nodes()) || !is_trust_cluster(&build_trust_graph(f), z) {
        return Err(FbasError::NotATrustCluster);
    }
    Ok(restrict_unchecked(f, z))
}

/// Restriction onto a set already known to be a non-empty trust cluster.
pub(crate) fn restrict_unchecked(f: &Fbas, z: &NodeSet) -> SubFbas {
    match f {
        Fbas::General(g) => {
            let (g, members) = g.restrict_closed(z);
            SubFbas {
                fbas: Fbas::General(g),
                members,
            }
        }
        Fbas::Simple(s) => {
            let (members, forward) = renumbering(s.universe(), z);
            let q = members
                .iter()
                .map(|p| map_set(&s.quorum_set(*p), &forward))
                .collect();
            let n = members.iter().map(|p| s.threshold(*p)).collect();
            let s = SimpleFbas::new(members.len(), q, n).expect("closed sets keep q and n valid");
            SubFbas {
                fbas: Fbas::Simple(s),
                members,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nodeset::set_of;

    #[test]
    fn hub_graph_and_components() {
        let f = catalog::hub_and_two_triads();
        let g = build_trust_graph(&f);
        assert_eq!(g.successors(NodeId(0)), set_of(&[0, 1, 2, 6]));
        assert_eq!(g.successors(NodeId(6)), set_of(&[6]));
        let p = scc_partition(&g);
        assert_eq!(
            p.components,
            vec![set_of(&[0, 1, 2]), set_of(&[3, 4, 5]), set_of(&[6])]
        );
        assert_eq!(p.maximal, vec![2]);
        assert_eq!(p.greatest, Some(2));
        assert!(is_trust_cluster(&g, &set_of(&[6])));
        assert!(!is_trust_cluster(&g, &set_of(&[0, 1, 2])));
        assert!(is_trust_cluster(&g, &f.nodes()));
    }

    #[test]
    fn isolated_nodes_have_no_greatest_component() {
        let g = build_trust_graph(&catalog::isolated(3));
        let p = scc_partition(&g);
        assert_eq!(p.components.len(), 3);
        assert_eq!(p.maximal, vec![0, 1, 2]);
        assert_eq!(p.greatest, None);
    }

    #[test]
    fn complete_graph_is_one_component() {
        let p = scc_partition(&build_trust_graph(&catalog::symmetric(5, 3)));
        assert_eq!(p.components, vec![NodeSet::full(5)]);
        assert_eq!(p.greatest, Some(0));
    }

    #[test]
    fn long_chain_does_not_overflow() {
        // v trusts v+1; the last node trusts itself
        let n = 256;
        let slices = (0..n).map(|i| vec![set_of(&[i, (i + 1).min(n - 1)])]).collect();
        let f = crate::fbas::make_general(n, slices).unwrap();
        let p = scc_partition(&build_trust_graph(&f));
        assert_eq!(p.components.len(), n);
        assert_eq!(p.greatest, Some(n - 1));
    }

    #[test]
    fn restriction_to_hub() {
        let f = catalog::hub_and_two_triads();
        let sub = restrict(&f, &set_of(&[6])).unwrap();
        assert_eq!(sub.members, vec![NodeId(6)]);
        let Fbas::General(g) = &sub.fbas else { panic!() };
        assert_eq!(g.slices(NodeId(0)), &[set_of(&[0])]);
        assert_eq!(restrict(&f, &f.nodes()).unwrap().fbas, f);
        assert_eq!(
            restrict(&f, &set_of(&[0, 1, 2])),
            Err(FbasError::NotATrustCluster)
        );
        assert_eq!(restrict(&f, &NodeSet::empty()), Err(FbasError::NotATrustCluster));
    }

    #[test]
    fn simple_restriction_stays_simple() {
        // 0 and 1 trust each other, 2 trusts 0
        let f = crate::fbas::make_simple(
            3,
            vec![set_of(&[0, 1]), set_of(&[0, 1]), set_of(&[0, 2])],
            vec![2, 1, 2],
        )
        .unwrap();
        let sub = restrict(&f, &set_of(&[0, 1])).unwrap();
        assert!(sub.fbas.is_simple());
        assert_eq!(sub.fbas.universe(), 2);
    }
}
