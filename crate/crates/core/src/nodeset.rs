//! Dense node identities and fixed-width node sets.

use std::collections::HashMap;
use std::fmt;

use crate::error::{FbasError, Result};

/// Number of words backing a [`NodeSet`].
const WORDS: usize = 4;

/// Largest universe a [`NodeSet`] can address.
pub const MAX_NODES: usize = WORDS * 64;

/// Dense index of a node in `0..universe`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of nodes stored as a 256-bit bitset.
///
/// All set operations are constant time. Iteration yields members in
/// ascending index order, which makes every enumeration built on top of it
/// deterministic.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet {
    words: [u64; WORDS],
}

impl NodeSet {
    pub const fn empty() -> Self {
        NodeSet { words: [0; WORDS] }
    }

    /// The set `{0, .., universe - 1}`.
    pub fn full(universe: usize) -> Self {
        assert!(universe <= MAX_NODES, "universe {universe} exceeds {MAX_NODES}");
        let mut words = [0u64; WORDS];
        for (i, w) in words.iter_mut().enumerate() {
            let lo = i * 64;
            if universe >= lo + 64 {
                *w = u64::MAX;
            } else if universe > lo {
                *w = (1u64 << (universe - lo)) - 1;
            }
        }
        NodeSet { words }
    }

    pub fn singleton(v: NodeId) -> Self {
        let mut s = Self::empty();
        s.insert(v);
        s
    }

    /// Builds a set from the low bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::empty();
        s.words[0] = mask;
        s
    }

    /// The first word of the bitset; only meaningful for universes of at
    /// most 64 nodes.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    #[inline]
    pub fn insert(&mut self, v: NodeId) -> bool {
        let (w, b) = (v.0 / 64, v.0 % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: NodeId) -> bool {
        let (w, b) = (v.0 / 64, v.0 % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < MAX_NODES && self.words[v.0 / 64] >> (v.0 % 64) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &NodeSet) -> bool {
        !self.is_disjoint(other)
    }

    #[inline]
    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut words = self.words;
        for (a, b) in words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
        NodeSet { words }
    }

    #[inline]
    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut words = self.words;
        for (a, b) in words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
        NodeSet { words }
    }

    #[inline]
    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut words = self.words;
        for (a, b) in words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        NodeSet { words }
    }

    /// Number of members shared with `other`.
    #[inline]
    pub fn intersection_len(&self, other: &NodeSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<NodeId> {
        self.iter().next()
    }

    /// Largest member index plus one, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        for i in (0..WORDS).rev() {
            if self.words[i] != 0 {
                return i * 64 + 64 - self.words[i].leading_zeros() as usize;
            }
        }
        0
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.words,
            word: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut s = NodeSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for &NodeSet {
    type Item = NodeId;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`NodeSet`].
pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = NodeId;

    #[inline]
    fn next(&mut self) -> Option<NodeId> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let b = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(NodeId(self.word * 64 + b));
            }
            self.word += 1;
        }
        None
    }
}

/// Convenience constructor from raw indices.
pub fn set_of(indices: &[usize]) -> NodeSet {
    indices.iter().map(|&i| NodeId(i)).collect()
}

/// Bidirectional map between dense node ids and external names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameTable {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NameTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = NameTable::default();
        for name in names {
            let name = name.into();
            if table.index.contains_key(&name) {
                return Err(FbasError::DuplicateName(name));
            }
            table.index.insert(name.clone(), NodeId(table.names.len()));
            table.names.push(name);
        }
        Ok(table)
    }

    /// Names "1", "2", .., "n".
    pub fn numbered(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string())).expect("numbers are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a list of names into a set.
    pub fn set<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet> {
        names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| FbasError::UnknownName(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Member names of `s` in index order.
    pub fn names_of(&self, s: &NodeSet) -> Vec<String> {
        s.iter().map(|v| self.names[v.0].clone()).collect()
    }

    /// Renders `s` as `{a, b, c}`.
    pub fn render(&self, s: &NodeSet) -> String {
        format!("{{{}}}", self.names_of(s).join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_set() -> impl Strategy<Value = NodeSet> {
        proptest::collection::vec(0usize..MAX_NODES, 0..40).prop_map(|v| set_of(&v))
    }

    #[test]
    fn full_and_bound() {
        assert_eq!(NodeSet::full(0), NodeSet::empty());
        assert_eq!(NodeSet::full(7).len(), 7);
        assert_eq!(NodeSet::full(64).len(), 64);
        assert_eq!(NodeSet::full(65).len(), 65);
        assert_eq!(NodeSet::full(MAX_NODES).len(), MAX_NODES);
        assert_eq!(NodeSet::full(70).bound(), 70);
        assert_eq!(set_of(&[3, 130]).bound(), 131);
    }

    #[test]
    fn iterates_ascending() {
        let s = set_of(&[200, 5, 64, 0, 63]);
        assert_eq!(s.iter().map(|v| v.0).collect::<Vec<_>>(), vec![0, 5, 63, 64, 200]);
    }

    #[test]
    fn name_table_rejects_duplicates() {
        assert!(matches!(
            NameTable::new(["a", "b", "a"]),
            Err(FbasError::DuplicateName(n)) if n == "a"
        ));
        let t = NameTable::new(["x", "y"]).unwrap();
        assert_eq!(t.id("y"), Some(NodeId(1)));
        assert_eq!(t.render(&set_of(&[0, 1])), "{x, y}");
        assert!(t.set(&["z"]).is_err());
    }

    proptest! {
        #[test]
        fn set_algebra_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            // De Morgan inside a common universe
            let u = a.union(&b).union(&c);
            prop_assert_eq!(
                u.difference(&a.union(&b)),
                u.difference(&a).intersection(&u.difference(&b))
            );
            prop_assert_eq!(
                a.intersection(&b.union(&c)),
                a.intersection(&b).union(&a.intersection(&c))
            );
            prop_assert_eq!(a.union(&b).len() + a.intersection(&b).len(), a.len() + b.len());
            prop_assert!(a.intersection(&b).is_subset(&a));
            prop_assert!(a.is_subset(&a.union(&b)));
            prop_assert!(a.difference(&b).is_disjoint(&b));
            prop_assert_eq!(a.intersection_len(&b), a.intersection(&b).len());
            prop_assert_eq!(a.intersects(&b), !a.intersection(&b).is_empty());
            let rebuilt: NodeSet = a.iter().collect();
            prop_assert_eq!(rebuilt, a);
        }
    }
}
