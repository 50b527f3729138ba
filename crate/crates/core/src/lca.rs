//! Constant-time lowest common ancestor queries and the LCA hit-rate.
//!
//! Preprocessing records an Euler tour of the arborescence and builds a
//! sparse table of depth minima over it (`O(n log n)` build, `O(1)` query).

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::nnindex::BallTree;
use crate::relations::RelationSet;
use crate::tree::{entity_of, Arborescence, ROOT};

#[derive(Debug, Clone)]
pub struct LcaIndex {
    tour: Vec<usize>,
    tour_depth: Vec<usize>,
    first: Vec<usize>,
    /// `table[j][i]` holds the tour position of the shallowest entry in
    /// `tour[i .. i + 2^j]`.
    table: Vec<Vec<u32>>,
}

impl LcaIndex {
    pub fn new(tree: &Arborescence) -> Self {
        let n = tree.n_nodes();
        let children = tree.children();
        let mut tour = Vec::with_capacity(2 * n - 1);
        let mut tour_depth = Vec::with_capacity(2 * n - 1);
        let mut first = vec![usize::MAX; n];

        // iterative DFS: (node, next child slot)
        let mut stack: Vec<(usize, usize)> = vec![(ROOT, 0)];
        first[ROOT] = 0;
        tour.push(ROOT);
        tour_depth.push(0);
        while let Some(top) = stack.last_mut() {
            let (node, slot) = *top;
            if let Some(&child) = children[node].get(slot) {
                top.1 += 1;
                first[child] = tour.len();
                tour.push(child);
                tour_depth.push(stack.len());
                stack.push((child, 0));
            } else {
                stack.pop();
                if let Some(&(parent, _)) = stack.last() {
                    tour.push(parent);
                    tour_depth.push(stack.len() - 1);
                }
            }
        }

        let m = tour.len();
        let mut table: Vec<Vec<u32>> = vec![(0..m as u32).collect()];
        let mut width = 1;
        while 2 * width <= m {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..=m - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if tour_depth[b as usize] < tour_depth[a as usize] {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            table.push(next);
            width *= 2;
        }
        LcaIndex {
            tour,
            tour_depth,
            first,
            table,
        }
    }

    pub fn tour(&self) -> &[usize] {
        &self.tour
    }

    pub fn tour_depths(&self) -> &[usize] {
        &self.tour_depth
    }

    pub fn first_occurrence(&self, node: usize) -> Option<usize> {
        self.first.get(node).copied()
    }

    pub fn n_nodes(&self) -> usize {
        self.first.len()
    }

    fn argmin(&self, lo: usize, hi: usize) -> usize {
        let len = hi - lo + 1;
        let level = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let row = &self.table[level];
        let (a, b) = (row[lo] as usize, row[hi + 1 - (1 << level)] as usize);
        if self.tour_depth[b] < self.tour_depth[a] {
            b
        } else {
            a
        }
    }

    /// Deepest common ancestor of two node ids.
    pub fn lca(&self, u: usize, v: usize) -> Result<usize> {
        let fu = *self.first.get(u).ok_or(Error::UnknownNode(u))?;
        let fv = *self.first.get(v).ok_or(Error::UnknownNode(v))?;
        Ok(self.tour[self.argmin(fu.min(fv), fu.max(fv))])
    }
}

/// Alias for [`LcaIndex::new`].
pub fn preprocess(tree: &Arborescence) -> LcaIndex {
    LcaIndex::new(tree)
}

/// The LCA of two nodes and its ancestors up to `radius` edges above it, as
/// entity indices. The artificial root is never included.
pub fn lca_closure(
    index: &LcaIndex,
    tree: &Arborescence,
    u: usize,
    v: usize,
    radius: usize,
) -> Result<BTreeSet<usize>> {
    let mut node = index.lca(u, v)?;
    let mut out = BTreeSet::new();
    for _ in 0..=radius {
        match entity_of(node) {
            Some(ent) => {
                out.insert(ent);
            }
            None => break,
        }
        node = tree.parent(node).expect("non-root node has a parent");
    }
    Ok(out)
}

/// `base` plus everything reachable from it by following at most `radius`
/// child → parent edges of `edges`.
pub fn lch_closure(edges: &RelationSet, base: &BTreeSet<String>, radius: usize) -> BTreeSet<String> {
    let mut up: HashMap<&str, Vec<&str>> = HashMap::new();
    for (c, p) in edges.iter() {
        up.entry(c).or_default().push(p);
    }
    let mut out: BTreeSet<String> = base.clone();
    let mut frontier: VecDeque<(String, usize)> = base.iter().map(|b| (b.clone(), 0)).collect();
    while let Some((label, hops)) = frontier.pop_front() {
        if hops == radius {
            continue;
        }
        for &p in up.get(label.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
            if out.insert(p.to_owned()) {
                frontier.push_back((p.to_owned(), hops + 1));
            }
        }
    }
    out
}

/// Samples `n_pairs` pairs `(w1, w2)`: `w1` uniform over entities, `w2`
/// uniform over the `k` nearest neighbors of `w1`. Draws are with replacement.
pub fn sample_pairs(
    e: &EmbeddingSet,
    index: &BallTree,
    n_pairs: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>> {
    if k == 0 || k + 1 > e.len() {
        return Err(Error::KTooLarge {
            k,
            limit: e.len().saturating_sub(1),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let w1 = rng.random_range(0..e.len());
        let neighbors = index.knn(e.row(w1), k, Some(w1))?;
        let w2 = neighbors[rng.random_range(0..k)].0;
        pairs.push((w1, w2));
    }
    Ok(pairs)
}

/// Share of scorable pairs whose tree set meets the ground-truth set. Pairs
/// with an empty ground-truth set are not scorable.
pub fn hit_rate<T: Ord + Hash>(tree_sets: &[BTreeSet<T>], truth_sets: &[BTreeSet<T>]) -> Result<f64> {
    if tree_sets.len() != truth_sets.len() {
        return Err(Error::SizeMismatch {
            what: "truth sets",
            expected: tree_sets.len(),
            found: truth_sets.len(),
        });
    }
    let mut scorable = 0usize;
    let mut hits = 0usize;
    for (tree_set, truth) in tree_sets.iter().zip(truth_sets) {
        if truth.is_empty() {
            continue;
        }
        scorable += 1;
        if tree_set.iter().any(|x| truth.contains(x)) {
            hits += 1;
        }
    }
    if scorable == 0 {
        return Err(Error::NoScorablePairs);
    }
    Ok(hits as f64 / scorable as f64)
}

/// Hit-rate of a tree over sampled entity pairs, given per-pair ground-truth
/// sets of entity indices.
pub fn tree_hit_rate(
    tree: &Arborescence,
    pairs: &[(usize, usize)],
    truth_sets: &[BTreeSet<usize>],
    closure: usize,
) -> Result<f64> {
    let index = LcaIndex::new(tree);
    let tree_sets = pairs
        .iter()
        .map(|&(a, b)| lca_closure(&index, tree, a + 1, b + 1, closure))
        .collect::<Result<Vec<_>>>()?;
    hit_rate(&tree_sets, truth_sets)
}
