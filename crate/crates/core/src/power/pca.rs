use nalgebra::{DMatrix, SymmetricEigen};

use super::{PowerAssignment, PowerSource};
use crate::distance::{dot, norm};
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-8;

/// Column mean plus the top `k` principal directions of the centered matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    components: Vec<Vec<f64>>,
}

impl PcaModel {
    /// Builds a model from explicit parts; components must be orthonormal.
    pub fn new(mean: Vec<f64>, components: Vec<Vec<f64>>) -> Result<Self> {
        let d = mean.len();
        if components.is_empty() || components.len() > d {
            return Err(Error::KTooLarge {
                k: components.len(),
                limit: d,
            });
        }
        for c in &components {
            if c.len() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: c.len(),
                });
            }
        }
        let model = PcaModel { mean, components };
        let err = model.orthonormality_error();
        if err > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(err));
        }
        Ok(model)
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.components.iter().enumerate() {
            for (j, b) in self.components.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// `sum_i (v . u_i) u_i`
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for u in &self.components {
            let c = dot(v, u);
            for (o, x) in out.iter_mut().zip(u) {
                *o += c * x;
            }
        }
        out
    }

    fn check_dim(&self, e: &EmbeddingSet) -> Result<()> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: e.dim(),
            });
        }
        Ok(())
    }
}

/// Fits the mean and top-`k` principal directions.
///
/// Directions are eigenvectors of the scatter matrix of the centered rows,
/// i.e. the right singular vectors of the centered matrix. Each is signed so
/// that its first nonzero coordinate is positive.
pub fn fit_pca(e: &EmbeddingSet, k: usize) -> Result<PcaModel> {
    let (n, d) = (e.len(), e.dim());
    if k == 0 || k > n || k > d {
        return Err(Error::KTooLarge {
            k,
            limit: n.min(d),
        });
    }
    let mean = e.centroid();
    let mut centered = Vec::with_capacity(n * d);
    for row in e.rows() {
        centered.extend(row.iter().zip(&mean).map(|(v, m)| v - m));
    }
    if centered.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    let x = DMatrix::from_row_slice(n, d, &centered);
    let scatter = x.tr_mul(&x);
    let eig = SymmetricEigen::new(scatter);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let components = order
        .iter()
        .take(k)
        .map(|&col| {
            let mut u: Vec<f64> = eig.eigenvectors.column(col).iter().copied().collect();
            let len = norm(&u);
            u.iter_mut().for_each(|x| *x /= len);
            let scale = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if let Some(first) = u.iter().find(|x| x.abs() > 1e-12 * scale) {
                if *first < 0.0 {
                    u.iter_mut().for_each(|x| *x = -*x);
                }
            }
            u
        })
        .collect();
    PcaModel::new(mean, components)
}

/// Raw PCA-induced power: the norm of each uncentered row's projection onto
/// the model components.
pub fn pca_power_raw(e: &EmbeddingSet, model: &PcaModel) -> Result<Vec<f64>> {
    model.check_dim(e)?;
    Ok(e.rows().map(|row| norm(&model.project(row))).collect())
}

pub fn pca_power(e: &EmbeddingSet, model: &PcaModel) -> Result<PowerAssignment> {
    PowerAssignment::from_raw(pca_power_raw(e, model)?, PowerSource::Pca)
}

/// Removes the mean and the top principal directions from every row:
/// `(v - mu) - sum_i ((v - mu) . u_i) u_i`.
///
/// Output rows are orthogonal to every component.
pub fn debias_embedding(e: &EmbeddingSet, model: &PcaModel) -> Result<EmbeddingSet> {
    model.check_dim(e)?;
    let mut data = Vec::with_capacity(e.as_flat().len());
    for row in e.rows() {
        let centered: Vec<f64> = row.iter().zip(model.mean()).map(|(v, m)| v - m).collect();
        let proj = model.project(&centered);
        data.extend(centered.iter().zip(&proj).map(|(c, p)| c - p));
    }
    e.with_data(data)
}
