//! Ground-truth relation sets (child → parent pairs).

use std::collections::{BTreeSet, HashSet};

use crate::embedding::EmbeddingSet;

/// A set of directed `(child, parent)` label pairs.
///
/// Direction convention: hyponym → hypernym, link source → link target.
/// Self pairs are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    pairs: BTreeSet<(String, String)>,
    kind: String,
}

impl RelationSet {
    pub fn new(kind: impl Into<String>) -> Self {
        RelationSet {
            pairs: BTreeSet::new(),
            kind: kind.into(),
        }
    }

    pub fn from_pairs<I, A, B>(kind: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut set = Self::new(kind);
        for (c, p) in pairs {
            set.insert(c, p);
        }
        set
    }

    /// Returns false for self pairs and duplicates.
    pub fn insert(&mut self, child: impl Into<String>, parent: impl Into<String>) -> bool {
        let (child, parent) = (child.into(), parent.into());
        if child == parent {
            return false;
        }
        self.pairs.insert((child, parent))
    }

    pub fn contains(&self, child: &str, parent: &str) -> bool {
        self.pairs.contains(&(child.to_owned(), parent.to_owned()))
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.pairs.iter().map(|(c, p)| (c.as_str(), p.as_str()))
    }

    /// Every label appearing on either side.
    pub fn labels(&self) -> BTreeSet<&str> {
        self.iter().flat_map(|(c, p)| [c, p]).collect()
    }

    /// Maps labels to entity indices, dropping pairs with an unknown label.
    pub fn resolve(&self, embedding: &EmbeddingSet) -> ResolvedRelations {
        self.resolve_with(|l| embedding.index_of(l))
    }

    pub fn resolve_labels(&self, labels: &[String]) -> ResolvedRelations {
        let index: std::collections::HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        self.resolve_with(|l| index.get(l).copied())
    }

    fn resolve_with(&self, lookup: impl Fn(&str) -> Option<usize>) -> ResolvedRelations {
        let mut pairs = HashSet::with_capacity(self.pairs.len());
        let mut dropped = 0;
        for (c, p) in self.iter() {
            match (lookup(c), lookup(p)) {
                (Some(c), Some(p)) => {
                    pairs.insert((c, p));
                }
                _ => dropped += 1,
            }
        }
        ResolvedRelations { pairs, dropped }
    }
}

/// Relation pairs expressed as entity indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedRelations {
    pub pairs: HashSet<(usize, usize)>,
    /// Pairs whose labels did not resolve.
    pub dropped: usize,
}

impl ResolvedRelations {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        ResolvedRelations {
            pairs: pairs.into_iter().filter(|(c, p)| c != p).collect(),
            dropped: 0,
        }
    }

    pub fn contains(&self, child: usize, parent: usize) -> bool {
        self.pairs.contains(&(child, parent))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// True when some pair is present in both orientations.
    pub fn has_symmetric_pair(&self) -> bool {
        self.pairs.iter().any(|&(c, p)| self.contains(p, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_pairs_and_duplicates_are_skipped() {
        let r = RelationSet::from_pairs("t", [("a", "b"), ("a", "b"), ("c", "c")]);
        assert_eq!(r.len(), 1);
        assert!(r.contains("a", "b"));
        assert!(!r.contains("b", "a"));
    }

    #[test]
    fn resolve_counts_dropped() {
        let e = EmbeddingSet::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0], vec![1.0]],
        )
        .unwrap();
        let r = RelationSet::from_pairs("t", [("a", "b"), ("a", "zz")]).resolve(&e);
        assert_eq!(r.len(), 1);
        assert_eq!(r.dropped, 1);
        assert!(r.contains(0, 1));
    }
}
