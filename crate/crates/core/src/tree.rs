//! The arborescence produced by the builder.
//!
//! Node ids: `0` is the artificial root, entity `i` is node `i + 1`.

use crate::error::{Error, Result};

/// Node id of the artificial root.
pub const ROOT: usize = 0;

/// Node id of entity `i`.
#[inline]
pub fn node_of(entity: usize) -> usize {
    entity + 1
}

/// Entity index of a node, `None` for the root.
#[inline]
pub fn entity_of(node: usize) -> Option<usize> {
    node.checked_sub(1)
}

/// A directed rooted tree over `n` entities plus the artificial root.
#[derive(Debug, Clone, PartialEq)]
pub struct Arborescence {
    parent: Vec<Option<usize>>,
    edge_length: Vec<f64>,
    insertion_rank: Vec<usize>,
    level: Vec<usize>,
    root_vector: Vec<f64>,
}

impl Arborescence {
    /// Validates the parts and derives node levels.
    ///
    /// `insertion_rank[0]` must be 0 (the root); each real node's parent must
    /// have a strictly smaller rank, which also rules out cycles.
    pub fn from_parts(
        parent: Vec<Option<usize>>,
        edge_length: Vec<f64>,
        insertion_rank: Vec<usize>,
        root_vector: Vec<f64>,
    ) -> Result<Self> {
        let total = parent.len();
        if total == 0 {
            return Err(Error::InvalidTree("no root".into()));
        }
        if edge_length.len() != total || insertion_rank.len() != total {
            return Err(Error::InvalidTree("array lengths differ".into()));
        }
        if parent[ROOT].is_some() || insertion_rank[ROOT] != 0 {
            return Err(Error::InvalidTree("node 0 must be the root with rank 0".into()));
        }
        for node in 1..total {
            let p = parent[node]
                .ok_or_else(|| Error::InvalidTree(format!("node {node} has no parent")))?;
            if p >= total {
                return Err(Error::InvalidTree(format!("node {node} has unknown parent {p}")));
            }
            if insertion_rank[p] >= insertion_rank[node] {
                return Err(Error::InvalidTree(format!(
                    "node {node} (rank {}) precedes its parent {p} (rank {})",
                    insertion_rank[node], insertion_rank[p]
                )));
            }
        }
        // Parents have smaller ranks, so visiting nodes by rank fills levels top-down.
        let mut by_rank: Vec<usize> = (0..total).collect();
        by_rank.sort_by_key(|&i| insertion_rank[i]);
        let mut level = vec![0; total];
        for &node in by_rank.iter().skip(1) {
            level[node] = level[parent[node].unwrap()] + 1;
        }
        Ok(Arborescence {
            parent,
            edge_length,
            insertion_rank,
            level,
            root_vector,
        })
    }

    /// Number of real entities (excludes the root).
    pub fn n_entities(&self) -> usize {
        self.parent.len() - 1
    }

    /// Number of nodes including the root.
    pub fn n_nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn edge_length(&self, node: usize) -> f64 {
        self.edge_length[node]
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_length
    }

    pub fn insertion_rank(&self, node: usize) -> usize {
        self.insertion_rank[node]
    }

    pub fn insertion_ranks(&self) -> &[usize] {
        &self.insertion_rank
    }

    pub fn level(&self, node: usize) -> usize {
        self.level[node]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn root_vector(&self) -> &[f64] {
        &self.root_vector
    }

    /// Parent of entity `i` as an entity index; `None` when attached to the root.
    pub fn parent_entity(&self, entity: usize) -> Option<usize> {
        self.parent[node_of(entity)].and_then(entity_of)
    }

    /// Entity-level edges `(child, parent)` whose parent is a real node.
    pub fn real_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_entities()).filter_map(|c| self.parent_entity(c).map(|p| (c, p)))
    }

    /// Children lists, each sorted by node id.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n_nodes()];
        for node in 1..self.n_nodes() {
            children[self.parent[node].unwrap()].push(node);
        }
        children
    }

    /// O(n) walk checking acyclicity, rank order and levels.
    pub fn check(&self) -> Result<()> {
        let rebuilt = Self::from_parts(
            self.parent.clone(),
            self.edge_length.clone(),
            self.insertion_rank.clone(),
            self.root_vector.clone(),
        )?;
        if rebuilt.level != self.level {
            return Err(Error::InvalidTree("levels inconsistent".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_follow_parents() {
        let t = Arborescence::from_parts(
            vec![None, Some(0), Some(1), Some(0)],
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0, 1, 2, 3],
            vec![],
        )
        .unwrap();
        assert_eq!(t.levels(), &[0, 1, 2, 1]);
        assert_eq!(t.real_edges().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(t.children()[0], vec![1, 3]);
        t.check().unwrap();
    }

    #[test]
    fn rejects_rank_violation_and_cycles() {
        let bad = Arborescence::from_parts(
            vec![None, Some(2), Some(1)],
            vec![0.0; 3],
            vec![0, 1, 2],
            vec![],
        );
        assert!(matches!(bad, Err(Error::InvalidTree(_))));
        let orphan = Arborescence::from_parts(vec![None, None], vec![0.0; 2], vec![0, 1], vec![]);
        assert!(orphan.is_err());
    }
}
