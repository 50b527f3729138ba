//! Validated dense embeddings.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Label used for the artificial root in every export. Rejected as an input label.
pub const ROOT_LABEL: &str = "__ROOT__";

/// Ordered entity labels with one dense vector per label.
///
/// Rows are stored contiguously (row-major). Row order is meaningful: loaders
/// treat it as frequency rank, rank 0 being the first row.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    labels: Vec<String>,
    data: Vec<f64>,
    dim: usize,
    index: HashMap<String, usize>,
}

impl EmbeddingSet {
    /// Validates labels and a row matrix.
    ///
    /// Duplicate labels are an error, not silently merged.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() || rows.is_empty() {
            return Err(Error::Empty);
        }
        if labels.len() != rows.len() {
            return Err(Error::SizeMismatch {
                what: "rows",
                expected: labels.len(),
                found: rows.len(),
            });
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(dim * rows.len());
        for (row, values) in rows.iter().enumerate() {
            if values.len() != dim {
                return Err(Error::RaggedMatrix {
                    row,
                    expected: dim,
                    found: values.len(),
                });
            }
            data.extend_from_slice(values);
        }
        Self::from_flat(labels, data, dim)
    }

    /// Same as [`EmbeddingSet::new`] for an already flattened row-major matrix.
    pub fn from_flat(labels: Vec<String>, data: Vec<f64>, dim: usize) -> Result<Self> {
        if labels.is_empty() || dim == 0 {
            return Err(Error::Empty);
        }
        if data.len() != labels.len() * dim {
            return Err(Error::SizeMismatch {
                what: "matrix",
                expected: labels.len() * dim,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: pos / dim,
                col: pos % dim,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label == ROOT_LABEL {
                return Err(Error::ReservedLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(EmbeddingSet {
            labels,
            data,
            dim,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    /// Row-major backing storage.
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Arithmetic mean of all rows.
    pub fn centroid(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for row in self.rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        let n = self.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    /// Keeps the rows whose label is in `keep`, preserving order.
    pub fn restrict_to(&self, keep: &HashSet<&str>) -> Result<Self> {
        let picked: Vec<usize> = (0..self.len())
            .filter(|&i| keep.contains(self.labels[i].as_str()))
            .collect();
        self.select(&picked)
    }

    /// Builds a new set from the given row indices, in that order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let labels = rows.iter().map(|&i| self.labels[i].clone()).collect();
        let mut data = Vec::with_capacity(rows.len() * self.dim);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self::from_flat(labels, data, self.dim)
    }

    /// Reorders rows so the labels listed in `ranked` come first, in that
    /// order; unlisted labels follow in their original order. Unknown labels
    /// in `ranked` are ignored.
    pub fn reorder_by_rank(&self, ranked: &[String]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::with_capacity(self.len());
        for label in ranked {
            if let Some(i) = self.index_of(label) {
                if !seen[i] {
                    seen[i] = true;
                    order.push(i);
                }
            }
        }
        order.extend((0..self.len()).filter(|&i| !seen[i]));
        self.select(&order)
    }

    /// Replaces the vectors, keeping labels.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::from_flat(self.labels.clone(), data, self.dim)
    }
}

/// Free-function form of [`EmbeddingSet::new`].
pub fn validate_embedding(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<EmbeddingSet> {
    EmbeddingSet::new(labels, rows)
}
