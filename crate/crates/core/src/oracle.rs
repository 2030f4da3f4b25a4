//! Brute-force reference implementations and instance generators.
//!
//! Everything here works by looking at every subset of `V`, so it only
//! accepts small universes. The oracles deliberately share no search code
//! with [`crate::quorums`] or [`crate::intact`]: slices are checked by
//! scanning the explicit slice lists (or counting against the threshold
//! for simple FBAS), and quorum intersection is decided with a
//! subset-closure table instead of a fixed-point search.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{FbasError, Result};
use crate::fbas::{make_general, make_simple, Fbas};
use crate::nodeset::{NameTable, NodeId, NodeSet};
use crate::slices::generate_org_fbas;

/// Largest universe accepted by the quorum oracles.
pub const QUORUM_ORACLE_LIMIT: usize = 16;

/// Largest universe accepted by the DSet oracles (they run one
/// intersection check per subset).
pub const DSET_ORACLE_LIMIT: usize = 12;

/// Largest variable count accepted by [`CnfFormula::brute_force_sat`].
pub const SAT_ORACLE_LIMIT: usize = 20;

fn guard(f: &Fbas, limit: usize) -> Result<usize> {
    let n = f.universe();
    if n > limit {
        Err(FbasError::InstanceTooLarge { size: n, limit })
    } else {
        Ok(n)
    }
}

/// Whether `v` has a slice inside `avail`, by direct inspection.
fn slice_inside(f: &Fbas, v: NodeId, avail: &NodeSet) -> bool {
    match f {
        Fbas::General(g) => g.slices(v).iter().any(|s| s.is_subset(avail)),
        Fbas::Simple(s) => s.quorum_set(v).intersection_len(avail) >= s.threshold(v),
    }
}

/// `table[m]` is true when the set with bit mask `m` is a quorum of `F^D`
/// in which the members of `free` need no slice.
fn quorum_table(f: &Fbas, n: usize, d: u64, free: u64) -> Vec<bool> {
    let dset = NodeSet::from_mask(d);
    (0u64..1 << n)
        .map(|m| {
            if m == 0 || m & d != 0 {
                return false;
            }
            let u = NodeSet::from_mask(m);
            let avail = u.union(&dset);
            u.iter()
                .all(|v| free >> v.0 & 1 == 1 || slice_inside(f, v, &avail))
        })
        .collect()
}

/// `below[m]` is true when some subset of `m` (including `m`) is marked in
/// `table`.
fn subset_closure(table: &[bool], n: usize) -> Vec<bool> {
    let mut below = table.to_vec();
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..below.len() {
            if m & b != 0 && below[m ^ b] {
                below[m] = true;
            }
        }
    }
    below
}

fn sorted(mut sets: Vec<NodeSet>) -> Vec<NodeSet> {
    sets.sort_unstable();
    sets
}

fn collect(table: &[bool]) -> Vec<NodeSet> {
    sorted(
        table
            .iter()
            .enumerate()
            .filter(|(_, &q)| q)
            .map(|(m, _)| NodeSet::from_mask(m as u64))
            .collect(),
    )
}

fn mask_of(f: &Fbas, s: &NodeSet) -> Result<u64> {
    if let Some(bad) = s.difference(&f.nodes()).first() {
        return Err(FbasError::UnknownNode(bad.0));
    }
    Ok(s.low_mask())
}

/// Every quorum, by testing all non-empty subsets.
pub fn brute_quorums(f: &Fbas) -> Result<Vec<NodeSet>> {
    brute_quorums_without(f, &NodeSet::empty())
}

/// Every quorum of `F^D`.
pub fn brute_quorums_without(f: &Fbas, d: &NodeSet) -> Result<Vec<NodeSet>> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    let d = mask_of(f, d)?;
    Ok(collect(&quorum_table(f, n, d, 0)))
}

/// Every inclusion-minimal quorum.
pub fn brute_min_quorums(f: &Fbas) -> Result<Vec<NodeSet>> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    let table = quorum_table(f, n, 0, 0);
    let below = subset_closure(&table, n);
    let minimal: Vec<bool> = (0..table.len())
        .map(|m| table[m] && (0..n).all(|b| m >> b & 1 == 0 || !below[m ^ (1 << b)]))
        .collect();
    Ok(collect(&minimal))
}

/// Every `B`-quorum: non-empty sets in which each member outside `B` has a
/// slice.
pub fn brute_b_quorums(f: &Fbas, b: &NodeSet) -> Result<Vec<NodeSet>> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    let b = mask_of(f, b)?;
    Ok(collect(&quorum_table(f, n, 0, b)))
}

/// Two disjoint quorums of `F^D`, if there are any.
fn split_in(f: &Fbas, n: usize, d: u64) -> Option<(NodeSet, NodeSet)> {
    let table = quorum_table(f, n, d, 0);
    let below = subset_closure(&table, n);
    let rest = ((1u64 << n) - 1) & !d;
    for q in 0..table.len() as u64 {
        if !table[q as usize] {
            continue;
        }
        let other = rest & !q;
        if below[other as usize] {
            // walk down to a quorum inside `other`
            let mut sub = other;
            loop {
                if table[sub as usize] {
                    return Some((NodeSet::from_mask(q), NodeSet::from_mask(sub)));
                }
                sub = (sub - 1) & other;
            }
        }
    }
    None
}

/// Whether `F^D` has quorum intersection.
pub fn brute_intersection_without(f: &Fbas, d: &NodeSet) -> Result<bool> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    let d = mask_of(f, d)?;
    Ok(split_in(f, n, d).is_none())
}

pub fn brute_intersection(f: &Fbas) -> Result<bool> {
    brute_intersection_without(f, &NodeSet::empty())
}

/// Two disjoint quorums, if the FBAS has them.
pub fn brute_split(f: &Fbas) -> Result<Option<(NodeSet, NodeSet)>> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    Ok(split_in(f, n, 0))
}

/// Every DSet, by checking each subset against the definition.
pub fn brute_dsets(f: &Fbas) -> Result<Vec<NodeSet>> {
    let n = guard(f, DSET_ORACLE_LIMIT)?;
    let all = (1u64 << n) - 1;
    let whole = quorum_table(f, n, 0, 0);
    let mut out = Vec::new();
    for d in 0..=all {
        let rest = all & !d;
        if rest == 0 || (whole[rest as usize] && split_in(f, n, d).is_none()) {
            out.push(NodeSet::from_mask(d));
        }
    }
    Ok(sorted(out))
}

/// The `B`-intact nodes: those outside some DSet that contains `B`.
pub fn brute_intact_nodes(f: &Fbas, b: &NodeSet) -> Result<NodeSet> {
    let b = NodeSet::from_mask(mask_of(f, b)?);
    Ok(brute_dsets(f)?
        .iter()
        .filter(|d| b.is_subset(d))
        .fold(NodeSet::empty(), |acc, d| acc.union(&f.nodes().difference(d))))
}

/// Union of all `B`-intact sets.
pub fn brute_b_intact_union(f: &Fbas, b: &NodeSet) -> Result<NodeSet> {
    let n = guard(f, QUORUM_ORACLE_LIMIT)?;
    let bm = mask_of(f, b)?;
    let table = quorum_table(f, n, 0, bm);
    let bq: Vec<u64> = (0..table.len() as u64).filter(|&m| table[m as usize]).collect();
    let mut union = 0u64;
    for u in bq.iter().copied().filter(|u| u & bm == 0) {
        let traces: Vec<u64> = bq.iter().map(|q| q & u).filter(|&t| t != 0).collect();
        let intact = traces
            .iter()
            .enumerate()
            .all(|(i, x)| traces[i..].iter().all(|y| x & y != 0));
        if intact {
            union |= u;
        }
    }
    Ok(NodeSet::from_mask(union))
}

/// Whether `B`-subslice holds, straight from the definition on explicit
/// slices.
pub fn brute_subslice_property(f: &Fbas, b: &NodeSet) -> Result<bool> {
    let g = f.to_general(crate::fbas::DEFAULT_EXPANSION_CAP)?;
    Ok(f.nodes().difference(b).iter().all(|v| {
        g.slices(v).iter().all(|sv| {
            sv.difference(b)
                .iter()
                .all(|u| g.slices(u).iter().any(|su| su.is_subset(sv)))
        })
    }))
}

/// A literal `x_var` or `¬x_var`; variables are numbered from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// A 3-CNF formula over variables `0..vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        if vars == 0 || clauses.is_empty() {
            return Err(FbasError::MalformedFormula(
                "need at least one variable and one clause".into(),
            ));
        }
        if let Some(l) = clauses.iter().flatten().find(|l| l.var >= vars) {
            return Err(FbasError::MalformedFormula(format!(
                "variable {} out of range 1..={vars}",
                l.var + 1
            )));
        }
        Ok(CnfFormula { vars, clauses })
    }

    /// Parses DIMACS CNF. Every clause must have exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut tokens: Vec<(usize, i64)> = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let parsed = match parts.as_slice() {
                    ["cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                header =
                    Some(parsed.ok_or_else(|| {
                        FbasError::MalformedFormula(format!("line {}: bad header", no + 1))
                    })?);
                continue;
            }
            if header.is_none() {
                return Err(FbasError::MalformedFormula(format!(
                    "line {}: clause before the 'p cnf' header",
                    no + 1
                )));
            }
            for t in line.split_whitespace() {
                let x: i64 = t.parse().map_err(|_| {
                    FbasError::MalformedFormula(format!("line {}: bad literal {t:?}", no + 1))
                })?;
                tokens.push((no + 1, x));
            }
        }
        let (vars, declared) =
            header.ok_or_else(|| FbasError::MalformedFormula("missing 'p cnf' header".into()))?;
        let mut clauses = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        for (line, x) in tokens {
            if x == 0 {
                let clause: [Literal; 3] = current.as_slice().try_into().map_err(|_| {
                    FbasError::MalformedFormula(format!(
                        "line {line}: clause has {} literals, expected 3",
                        current.len()
                    ))
                })?;
                clauses.push(clause);
                current.clear();
                continue;
            }
            let var = x.unsigned_abs() as usize;
            if var > vars {
                return Err(FbasError::MalformedFormula(format!(
                    "line {line}: variable {var} exceeds declared {vars}"
                )));
            }
            current.push(Literal {
                var: var - 1,
                negated: x < 0,
            });
        }
        if !current.is_empty() {
            return Err(FbasError::MalformedFormula(
                "last clause is not terminated by 0".into(),
            ));
        }
        if clauses.len() != declared {
            return Err(FbasError::MalformedFormula(format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            )));
        }
        Self::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let x = l.var as i64 + 1;
                out.push_str(&format!("{} ", if l.negated { -x } else { x }));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// A satisfying assignment found by trying all `2^vars` of them.
    pub fn brute_force_sat(&self) -> Result<Option<Vec<bool>>> {
        if self.vars > SAT_ORACLE_LIMIT {
            return Err(FbasError::InstanceTooLarge {
                size: self.vars,
                limit: SAT_ORACLE_LIMIT,
            });
        }
        Ok((0u64..1 << self.vars)
            .map(|bits| (0..self.vars).map(|k| bits >> k & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.evaluate(a)))
    }
}

/// The simple FBAS whose quorum split encodes satisfiability of a 3-CNF
/// formula, with readable node names.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub fbas: Fbas,
    pub names: NameTable,
}

/// Node layout: `star`, then `a_k, x_k, ¬x_k` per variable, then
/// `b_i, c_i^1, c_i^2, c_i^3` per clause.
pub fn reduce_3sat(phi: &CnfFormula) -> Result<Reduction> {
    let r = phi.vars;
    let m = phi.clauses.len();
    let universe = 1 + 3 * r + 4 * m;
    if universe > crate::MAX_NODES {
        return Err(FbasError::UniverseTooLarge(universe));
    }
    let star = NodeId(0);
    let a = |k: usize| NodeId(1 + 3 * k);
    let lit = |l: Literal| NodeId(2 + 3 * l.var + usize::from(l.negated));
    let b = |i: usize| NodeId(1 + 3 * r + 4 * i);
    let c = |i: usize, j: usize| NodeId(2 + 3 * r + 4 * i + j);

    let mut q = vec![NodeSet::empty(); universe];
    let mut n = vec![0; universe];

    q[star.0] = std::iter::once(star).chain((0..m).map(b)).collect();
    n[star.0] = m + 1;
    for k in 0..r {
        let (pos, neg) = (Literal::pos(k), Literal::neg(k));
        q[a(k).0] = [a(k), lit(pos), lit(neg)].into_iter().collect();
        n[a(k).0] = 2;
        for l in [pos, neg] {
            let mut s: NodeSet = [lit(l), a((k + 1) % r)].into_iter().collect();
            for (i, clause) in phi.clauses.iter().enumerate() {
                for (j, lij) in clause.iter().enumerate() {
                    if *lij == l {
                        s.insert(c(i, j));
                    }
                }
            }
            n[lit(l).0] = s.len();
            q[lit(l).0] = s;
        }
    }
    for i in 0..m {
        q[b(i).0] = [b(i), c(i, 0), c(i, 1), c(i, 2)].into_iter().collect();
        n[b(i).0] = 2;
        for j in 0..3 {
            q[c(i, j).0] = [c(i, j), star, a(0)].into_iter().collect();
            n[c(i, j).0] = 2;
        }
    }

    let mut names = vec!["star".to_string()];
    for k in 1..=r {
        names.extend([format!("a{k}"), format!("x{k}"), format!("not_x{k}")]);
    }
    for i in 1..=m {
        names.push(format!("b{i}"));
        names.extend((1..=3).map(|j| format!("c{i}_{j}")));
    }
    Ok(Reduction {
        fbas: make_simple(universe, q, n)?,
        names: NameTable::new(names)?,
    })
}

/// Every 3-CNF formula over `vars` variables with `clauses` clauses, up to
/// reordering literals within a clause and reordering clauses.
pub fn all_formulas(vars: usize, clauses: usize) -> Vec<CnfFormula> {
    let literals: Vec<Literal> = (0..vars)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let mut shapes = Vec::new();
    multisets(literals.len(), 3, 0, &mut Vec::new(), &mut shapes);
    let all_clauses: Vec<[Literal; 3]> = shapes
        .iter()
        .map(|s| [literals[s[0]], literals[s[1]], literals[s[2]]])
        .collect();
    let mut picks = Vec::new();
    multisets(all_clauses.len(), clauses, 0, &mut Vec::new(), &mut picks);
    picks
        .into_iter()
        .map(|p| CnfFormula {
            vars,
            clauses: p.iter().map(|&i| all_clauses[i]).collect(),
        })
        .collect()
}

fn multisets(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in from..n {
        cur.push(i);
        multisets(n, k, i, cur, out);
        cur.pop();
    }
}

/// Families of random FBAS used for differential testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    /// Explicit slices: one to three per node, other members chosen with
    /// probability one half.
    General,
    /// Random `q(v) ∋ v` and `n(v)` uniform in `1..=|q(v)|`.
    Simple,
    /// `(V, k)` with `k` uniform in `1..=|V|`.
    Symmetric,
    /// Random organizations under a two-level threshold tree, each node
    /// using its personalized definition.
    OrgTree,
}

impl RandomFamily {
    pub const ALL: [RandomFamily; 4] = [
        RandomFamily::General,
        RandomFamily::Simple,
        RandomFamily::Symmetric,
        RandomFamily::OrgTree,
    ];
}

/// A random FBAS from `family` with between 1 and `max_nodes` nodes.
pub fn random_fbas<R: Rng>(family: RandomFamily, max_nodes: usize, rng: &mut R) -> Fbas {
    assert!(max_nodes >= 1);
    let n = rng.gen_range(1..=max_nodes);
    match family {
        RandomFamily::General => {
            let slices = (0..n)
                .map(|v| {
                    let count = rng.gen_range(1..=3);
                    let mut list: Vec<NodeSet> = (0..count)
                        .map(|_| {
                            let mut s = NodeSet::singleton(NodeId(v));
                            for u in 0..n {
                                if rng.gen_bool(0.5) {
                                    s.insert(NodeId(u));
                                }
                            }
                            s
                        })
                        .collect();
                    list.sort_unstable();
                    list.dedup();
                    list
                })
                .collect();
            make_general(n, slices).expect("every slice contains its node")
        }
        RandomFamily::Simple => {
            let mut q = Vec::with_capacity(n);
            let mut t = Vec::with_capacity(n);
            for v in 0..n {
                let mut s = NodeSet::singleton(NodeId(v));
                for u in 0..n {
                    if rng.gen_bool(0.6) {
                        s.insert(NodeId(u));
                    }
                }
                t.push(rng.gen_range(1..=s.len()));
                q.push(s);
            }
            make_simple(n, q, t).expect("thresholds within range")
        }
        RandomFamily::Symmetric => {
            let k = rng.gen_range(1..=n);
            crate::slices::generate_symmetric(n, k).expect("1 <= k <= n")
        }
        RandomFamily::OrgTree => {
            let mut sizes = Vec::new();
            let mut left = n;
            while left > 0 {
                let s = rng.gen_range(1..=left.min(3));
                sizes.push(s);
                left -= s;
            }
            sizes.shuffle(rng);
            let thresholds: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(1..=s)).collect();
            let root = rng.gen_range(1..=sizes.len());
            generate_org_fbas(&sizes, &thresholds, root)
                .expect("valid random parameters")
                .fbas
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nodeset::set_of;

    #[test]
    fn hub_quorums_and_dsets() {
        let f = catalog::hub_and_two_triads();
        assert_eq!(brute_quorums(&f).unwrap(), {
            let mut v = vec![
                set_of(&[6]),
                set_of(&[0, 1, 2, 6]),
                set_of(&[3, 4, 5, 6]),
                NodeSet::full(7),
            ];
            v.sort_unstable();
            v
        });
        let mut want = vec![
            NodeSet::empty(),
            set_of(&[0, 1, 2]),
            set_of(&[3, 4, 5]),
            set_of(&[0, 1, 2, 3, 4, 5]),
            NodeSet::full(7),
        ];
        want.sort_unstable();
        assert_eq!(brute_dsets(&f).unwrap(), want);
        assert_eq!(brute_min_quorums(&f).unwrap(), vec![set_of(&[6])]);
    }

    #[test]
    fn everything_is_a_quorum_when_nodes_trust_themselves() {
        assert_eq!(brute_quorums(&catalog::isolated(4)).unwrap().len(), 15);
        assert!(!brute_intersection(&catalog::isolated(2)).unwrap());
        assert!(brute_split(&catalog::isolated(2)).unwrap().is_some());
    }

    #[test]
    fn all_or_nothing_has_two_dsets() {
        assert_eq!(
            brute_dsets(&catalog::all_or_nothing(4)).unwrap(),
            vec![NodeSet::empty(), NodeSet::full(4)]
        );
    }

    #[test]
    fn b_quorums_of_four_node_example() {
        let h = catalog::no_subslice_four_nodes();
        let a = set_of(&[0]);
        let mut want = vec![
            set_of(&[0]),
            set_of(&[0, 2, 3]),
            set_of(&[2, 3]),
            set_of(&[0, 1, 2, 3]),
        ];
        want.sort_unstable();
        assert_eq!(brute_b_quorums(&h.fbas, &a).unwrap(), want);
        assert_eq!(brute_b_intact_union(&h.fbas, &a).unwrap(), set_of(&[2, 3]));
        assert_eq!(brute_intact_nodes(&h.fbas, &a).unwrap(), NodeSet::empty());
        assert!(!brute_subslice_property(&h.fbas, &a).unwrap());
    }

    #[test]
    fn guards() {
        let big = catalog::isolated(17);
        assert!(matches!(
            brute_quorums(&big),
            Err(FbasError::InstanceTooLarge { .. })
        ));
        assert!(matches!(
            brute_dsets(&catalog::isolated(13)),
            Err(FbasError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn dimacs_round_trip_and_errors() {
        let text = "c example\np cnf 2 2\n1 1 1 0\n-1 -2 2 0\n";
        let phi = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(
            phi.clauses()[1],
            [Literal::neg(0), Literal::neg(1), Literal::pos(1)]
        );
        assert_eq!(CnfFormula::parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
        for bad in [
            "p cnf 1 1\n1 1 0\n",
            "p cnf 1 1\n1 1 1 1 0\n",
            "p cnf 1 1\n2 1 1 0\n",
            "1 1 1 0\n",
            "p cnf 1 2\n1 1 1 0\n",
            "p cnf 1 1\n1 1 1\n",
        ] {
            assert!(
                matches!(CnfFormula::parse_dimacs(bad), Err(FbasError::MalformedFormula(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn reduction_shape() {
        let phi = CnfFormula::new(1, vec![[Literal::pos(0); 3]]).unwrap();
        let red = reduce_3sat(&phi).unwrap();
        assert_eq!(red.fbas.universe(), 8);
        let Fbas::Simple(s) = &red.fbas else { panic!() };
        let x1 = red.names.id("x1").unwrap();
        // x1, its successor a1 and all three c_1^j
        assert_eq!(s.quorum_set(x1).len(), 5);
        assert_eq!(s.threshold(x1), 5);
        let star = red.names.id("star").unwrap();
        assert_eq!(s.threshold(star), 2);
    }

    #[test]
    fn tiny_reductions_match_satisfiability() {
        let sat = CnfFormula::new(1, vec![[Literal::pos(0); 3]]).unwrap();
        let unsat = CnfFormula::new(1, vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
        assert!(sat.brute_force_sat().unwrap().is_some());
        assert!(unsat.brute_force_sat().unwrap().is_none());
        assert!(!brute_intersection(&reduce_3sat(&sat).unwrap().fbas).unwrap());
        assert!(brute_intersection(&reduce_3sat(&unsat).unwrap().fbas).unwrap());
    }

    #[test]
    fn formula_enumeration_counts() {
        // 2 literals give 4 clause multisets; pairs of those: 10
        assert_eq!(all_formulas(1, 1).len(), 4);
        assert_eq!(all_formulas(1, 2).len(), 10);
    }
}
