//! Quorums, minimal quorums and quorum intersection.
//!
//! Every search runs on `F^D`, the FBAS with a deletion set `D` removed,
//! without building it: a slice `s` of `v` survives deletion as `s ∖ D`, and
//! `s ∖ D ⊆ U` exactly when `s ⊆ U ∪ D`. The `*_without` functions take `D`
//! explicitly; the plain versions use `D = ∅`.

use crate::error::{FbasError, Result};
use crate::fbas::Fbas;
use crate::nodeset::{NodeId, NodeSet};
use crate::trust::{build_trust_graph, restrict_unchecked, scc_partition};

/// Default cap on the number of minimal quorums kept in memory.
pub const DEFAULT_QUORUM_CAP: usize = 1_000_000;

/// How an FBAS is searched: the deletion set and the nodes whose slice
/// requirement is waived (used for `B`-quorums).
#[derive(Clone, Copy, Debug)]
pub(crate) struct View<'a> {
    pub f: &'a Fbas,
    pub d: NodeSet,
    pub free: NodeSet,
}

impl<'a> View<'a> {
    pub fn new(f: &'a Fbas, d: NodeSet) -> Self {
        View {
            f,
            d,
            free: NodeSet::empty(),
        }
    }

    /// Nodes of `F^D`.
    pub fn nodes(&self) -> NodeSet {
        self.f.nodes().difference(&self.d)
    }

    #[inline]
    pub fn contains_slice(&self, u: &NodeSet, v: NodeId) -> bool {
        self.free.contains(v) || self.f.has_slice_within(v, &u.union(&self.d))
    }

    pub fn is_quorum(&self, u: &NodeSet) -> bool {
        !u.is_empty() && u.iter().all(|v| self.contains_slice(u, v))
    }

    /// Greatest quorum `Q` with `w ⊆ Q ⊆ u`, or `∅`.
    ///
    /// Nodes are dropped as soon as they fail, so later checks in the same
    /// pass already see the smaller set. Removal is monotone, so this
    /// reaches the same fixed point as recomputing from the previous pass.
    pub fn greatest_quorum(&self, u: &NodeSet, w: &NodeSet) -> NodeSet {
        let mut cur = *u;
        loop {
            let before = cur;
            for v in before.iter() {
                if !self.contains_slice(&cur, v) {
                    if w.contains(v) {
                        return NodeSet::empty();
                    }
                    cur.remove(v);
                }
            }
            if cur == before || cur.is_empty() {
                return cur;
            }
        }
    }

    pub fn contains_proper_subquorum(&self, u: &NodeSet) -> bool {
        u.iter().any(|v| {
            let mut smaller = *u;
            smaller.remove(v);
            !self.greatest_quorum(&smaller, &NodeSet::empty()).is_empty()
        })
    }
}

fn check_within(f: &Fbas, s: &NodeSet) -> Result<()> {
    match s.difference(&f.nodes()).first() {
        Some(bad) => Err(FbasError::UnknownNode(bad.0)),
        None => Ok(()),
    }
}

fn check_deletion(f: &Fbas, u: &NodeSet, d: &NodeSet) -> Result<()> {
    check_within(f, u)?;
    check_within(f, d)?;
    if u.intersects(d) {
        return Err(FbasError::PreconditionViolation(
            "working set overlaps the deletion set".into(),
        ));
    }
    Ok(())
}

/// Whether `v` has a slice contained in `u`.
pub fn contains_slice(f: &Fbas, u: &NodeSet, v: NodeId) -> Result<bool> {
    contains_slice_without(f, u, v, &NodeSet::empty())
}

/// Whether `v` has a slice of `F^D` contained in `u`.
pub fn contains_slice_without(f: &Fbas, u: &NodeSet, v: NodeId, d: &NodeSet) -> Result<bool> {
    if v.0 >= f.universe() {
        return Err(FbasError::UnknownNode(v.0));
    }
    check_deletion(f, u, d)?;
    if !u.contains(v) {
        return Err(FbasError::PreconditionViolation(format!(
            "node {v} is not in the working set"
        )));
    }
    Ok(View::new(f, *d).contains_slice(u, v))
}

pub fn is_quorum(f: &Fbas, u: &NodeSet) -> Result<bool> {
    is_quorum_without(f, u, &NodeSet::empty())
}

pub fn is_quorum_without(f: &Fbas, u: &NodeSet, d: &NodeSet) -> Result<bool> {
    if u.is_empty() {
        return Err(FbasError::EmptySet);
    }
    check_deletion(f, u, d)?;
    Ok(View::new(f, *d).is_quorum(u))
}

/// Greatest quorum `Q` with `w ⊆ Q ⊆ u`, or `∅` if there is none.
pub fn greatest_quorum(f: &Fbas, u: &NodeSet, w: &NodeSet) -> Result<NodeSet> {
    greatest_quorum_without(f, u, w, &NodeSet::empty())
}

pub fn greatest_quorum_without(f: &Fbas, u: &NodeSet, w: &NodeSet, d: &NodeSet) -> Result<NodeSet> {
    check_deletion(f, u, d)?;
    if !w.is_subset(u) {
        return Err(FbasError::PreconditionViolation(
            "required set is not inside the search set".into(),
        ));
    }
    Ok(View::new(f, *d).greatest_quorum(u, w))
}

pub fn contains_proper_subquorum(f: &Fbas, u: &NodeSet) -> Result<bool> {
    contains_proper_subquorum_without(f, u, &NodeSet::empty())
}

pub fn contains_proper_subquorum_without(f: &Fbas, u: &NodeSet, d: &NodeSet) -> Result<bool> {
    check_deletion(f, u, d)?;
    Ok(View::new(f, *d).contains_proper_subquorum(u))
}

/// Lazily enumerates every quorum exactly once.
///
/// The traversal follows the recursive scheme "output the greatest quorum
/// between `U` and `U ∪ R`, then split the rest by the first excluded
/// node", kept on an explicit stack. Each frame's greatest quorum is
/// computed before the frame is pushed, so at most `|V| + 1` greatest-quorum
/// computations separate two outputs.
pub struct QuorumEnumerator<'a> {
    view: View<'a>,
    started: bool,
    /// `(U, Q)` with `Q = gq(U ∪ R, U)` already known to be non-empty.
    stack: Vec<(NodeSet, NodeSet)>,
    calls: u64,
}

impl<'a> QuorumEnumerator<'a> {
    pub(crate) fn new(view: View<'a>) -> Self {
        QuorumEnumerator {
            view,
            started: false,
            stack: Vec::new(),
            calls: 0,
        }
    }

    /// Enumerates only the quorums that contain `w`.
    pub(crate) fn containing(view: View<'a>, w: NodeSet) -> Self {
        let mut e = Self::new(view);
        e.started = true;
        let q = e.gq(&view.nodes(), &w);
        if !q.is_empty() {
            e.stack.push((w, q));
        }
        e
    }

    /// Greatest-quorum computations performed so far.
    pub fn greatest_quorum_calls(&self) -> u64 {
        self.calls
    }

    fn gq(&mut self, u: &NodeSet, w: &NodeSet) -> NodeSet {
        self.calls += 1;
        self.view.greatest_quorum(u, w)
    }
}

impl Iterator for QuorumEnumerator<'_> {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        if !self.started {
            self.started = true;
            let all = self.view.nodes();
            let q = self.gq(&all, &NodeSet::empty());
            if !q.is_empty() {
                self.stack.push((NodeSet::empty(), q));
            }
        }
        let (u, q) = self.stack.pop()?;
        let mut w = q.difference(&u);
        let mut children = Vec::with_capacity(w.len());
        for v in q.difference(&u).iter() {
            let child_u = q.difference(&w);
            let mut within = q;
            within.remove(v);
            let child_q = self.gq(&within, &child_u);
            if !child_q.is_empty() {
                children.push((child_u, child_q));
            }
            w.remove(v);
        }
        self.stack.extend(children.into_iter().rev());
        Some(q)
    }
}

pub fn enumerate_quorums(f: &Fbas) -> QuorumEnumerator<'_> {
    QuorumEnumerator::new(View::new(f, NodeSet::empty()))
}

/// Quorums of `F^D`.
pub fn enumerate_quorums_without<'a>(f: &'a Fbas, d: &NodeSet) -> QuorumEnumerator<'a> {
    QuorumEnumerator::new(View::new(f, d.intersection(&f.nodes())))
}

/// Quorums of `F^D` that contain every node of `w` (which must avoid `D`).
pub fn enumerate_quorums_containing<'a>(
    f: &'a Fbas,
    w: &NodeSet,
    d: &NodeSet,
) -> Result<QuorumEnumerator<'a>> {
    check_deletion(f, w, d)?;
    Ok(QuorumEnumerator::containing(View::new(f, *d), *w))
}

/// Chooses the node to branch on during minimal-quorum search.
pub trait BranchHeuristic {
    /// Picks a member of the non-empty set `r`.
    fn pick(&self, u: &NodeSet, r: &NodeSet) -> NodeId;
}

/// Branch on the node most often trusted by others; ties go to the lowest
/// index.
#[derive(Clone, Debug)]
pub struct MaxInDegree {
    degrees: Vec<usize>,
}

impl MaxInDegree {
    pub fn for_fbas(f: &Fbas) -> Self {
        MaxInDegree {
            degrees: build_trust_graph(f).in_degrees(),
        }
    }
}

impl BranchHeuristic for MaxInDegree {
    fn pick(&self, _u: &NodeSet, r: &NodeSet) -> NodeId {
        let mut best = r.first().expect("non-empty candidate set");
        for v in r.iter() {
            if self.degrees[v.0] > self.degrees[best.0] {
                best = v;
            }
        }
        best
    }
}

/// Branch on the lowest-index candidate.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestIndex;

impl BranchHeuristic for LowestIndex {
    fn pick(&self, _u: &NodeSet, r: &NodeSet) -> NodeId {
        r.first().expect("non-empty candidate set")
    }
}

/// Lazily enumerates minimal quorums of size at most `max_size`.
///
/// Branch and bound over "include / exclude `v`" with two cuts: a set that
/// already contains a quorum is never extended (a minimal quorum cannot
/// strictly contain another quorum), and a branch stops as soon as no
/// quorum fits between `U` and `U ∪ R`.
pub struct MinQuorumEnumerator<'a, H = MaxInDegree> {
    view: View<'a>,
    heuristic: H,
    max_size: usize,
    stack: Vec<(NodeSet, NodeSet)>,
}

impl<'a, H: BranchHeuristic> MinQuorumEnumerator<'a, H> {
    pub(crate) fn with_parts(view: View<'a>, heuristic: H, max_size: usize) -> Self {
        let all = view.nodes();
        MinQuorumEnumerator {
            view,
            heuristic,
            max_size,
            stack: vec![(NodeSet::empty(), all)],
        }
    }
}

impl<H: BranchHeuristic> Iterator for MinQuorumEnumerator<'_, H> {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        let none = NodeSet::empty();
        while let Some((u, r)) = self.stack.pop() {
            if u.len() > self.max_size {
                continue;
            }
            let q = self.view.greatest_quorum(&u, &none);
            if !q.is_empty() {
                if q == u && !self.view.contains_proper_subquorum(&u) {
                    return Some(u);
                }
                continue;
            }
            if r.is_empty() || self.view.greatest_quorum(&u.union(&r), &u).is_empty() {
                continue;
            }
            let v = self.heuristic.pick(&u, &r);
            let mut rest = r;
            rest.remove(v);
            let mut with_v = u;
            with_v.insert(v);
            // the "exclude v" branch is explored first
            self.stack.push((with_v, rest));
            self.stack.push((u, rest));
        }
        None
    }
}

/// Minimal quorums of size at most `|V| / 2`.
pub fn enumerate_min_quorums(f: &Fbas) -> MinQuorumEnumerator<'_> {
    enumerate_min_quorums_without(f, &NodeSet::empty())
}

/// Minimal quorums of `F^D` of size at most `|V ∖ D| / 2`.
pub fn enumerate_min_quorums_without<'a>(f: &'a Fbas, d: &NodeSet) -> MinQuorumEnumerator<'a> {
    let view = View::new(f, d.intersection(&f.nodes()));
    let half = view.nodes().len() / 2;
    MinQuorumEnumerator::with_parts(view, MaxInDegree::for_fbas(f), half)
}

/// Minimal quorums of `F^D` of size at most `max_size`, branching with a
/// caller-chosen heuristic.
pub fn enumerate_min_quorums_with<'a, H: BranchHeuristic>(
    f: &'a Fbas,
    d: &NodeSet,
    max_size: usize,
    heuristic: H,
) -> MinQuorumEnumerator<'a, H> {
    MinQuorumEnumerator::with_parts(View::new(f, d.intersection(&f.nodes())), heuristic, max_size)
}

/// Every minimal quorum, regardless of size.
pub fn all_min_quorums(f: &Fbas, cap: usize) -> Result<Vec<NodeSet>> {
    let mut out = Vec::new();
    for q in enumerate_min_quorums_with(f, &NodeSet::empty(), f.universe(), MaxInDegree::for_fbas(f)) {
        if out.len() == cap {
            return Err(FbasError::TooManyQuorums { cap });
        }
        out.push(q);
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuorumIntersectionResult {
    pub intersects: bool,
    /// Two disjoint quorums when `intersects` is false.
    pub witness: Option<(NodeSet, NodeSet)>,
}

impl QuorumIntersectionResult {
    fn yes() -> Self {
        QuorumIntersectionResult {
            intersects: true,
            witness: None,
        }
    }

    fn split(a: NodeSet, b: NodeSet) -> Self {
        QuorumIntersectionResult {
            intersects: false,
            witness: Some((a, b)),
        }
    }
}

pub fn quorum_intersection(f: &Fbas) -> QuorumIntersectionResult {
    quorum_intersection_without(f, &NodeSet::empty())
}

/// Decides whether all quorums of `F^D` pairwise intersect. If two disjoint
/// quorums exist, a small one has size at most `|V ∖ D| / 2` and contains a
/// minimal quorum, so checking the complements of those suffices.
pub fn quorum_intersection_without(f: &Fbas, d: &NodeSet) -> QuorumIntersectionResult {
    let view = View::new(f, d.intersection(&f.nodes()));
    quorum_intersection_view(view)
}

pub(crate) fn quorum_intersection_view(view: View<'_>) -> QuorumIntersectionResult {
    let all = view.nodes();
    let half = all.len() / 2;
    let min = MinQuorumEnumerator::with_parts(view, MaxInDegree::for_fbas(view.f), half);
    for q in min {
        let other = view.greatest_quorum(&all.difference(&q), &NodeSet::empty());
        if !other.is_empty() {
            return QuorumIntersectionResult::split(q, other);
        }
    }
    QuorumIntersectionResult::yes()
}

/// Same answer as [`quorum_intersection`], but first reduces the problem to
/// the greatest strongly connected component of the trust graph.
pub fn quorum_intersection_with_scc_preprocessing(f: &Fbas) -> QuorumIntersectionResult {
    let g = build_trust_graph(f);
    let p = scc_partition(&g);
    let Some(greatest) = p.greatest else {
        // each maximal component is closed under trust, hence a quorum
        let a = p.components[p.maximal[0]];
        let b = p.components[p.maximal[1]];
        return QuorumIntersectionResult::split(a, b);
    };
    let core = p.components[greatest];
    let view = View::new(f, NodeSet::empty());
    for (i, c) in p.components.iter().enumerate() {
        if i == greatest {
            continue;
        }
        let q = view.greatest_quorum(c, &NodeSet::empty());
        if !q.is_empty() {
            return QuorumIntersectionResult::split(q, core);
        }
    }
    let sub = restrict_unchecked(f, &core);
    let r = quorum_intersection(&sub.fbas);
    QuorumIntersectionResult {
        intersects: r.intersects,
        witness: r.witness.map(|(a, b)| (sub.lift(&a), sub.lift(&b))),
    }
}

/// Smallest `|Q₁ ∩ Q₂|` over distinct quorums, or `None` when `V` is the
/// only quorum.
///
/// Any two distinct quorums contain minimal quorums `M₁ ⊆ Q₁`, `M₂ ⊆ Q₂`, and
/// a pair sharing the same minimal quorum `M` intersects in at least `|M|`,
/// which the pair `(M, V)` attains whenever `M ≠ V`.
pub fn min_intersection_size(f: &Fbas) -> Result<Option<usize>> {
    min_intersection_size_capped(f, DEFAULT_QUORUM_CAP)
}

pub fn min_intersection_size_capped(f: &Fbas, cap: usize) -> Result<Option<usize>> {
    let mins = all_min_quorums(f, cap)?;
    let all = f.nodes();
    let mut best: Option<usize> = None;
    let mut consider = |x: usize| best = Some(best.map_or(x, |b| b.min(x)));
    for (i, a) in mins.iter().enumerate() {
        if *a != all {
            consider(a.len());
        }
        for b in &mins[i + 1..] {
            consider(a.intersection_len(b));
        }
    }
    Ok(best)
}
