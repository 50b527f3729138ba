//! Seeded synthetic datasets with known structure.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::power::{zipf_power, PowerAssignment, PowerSource};
use crate::relations::{RelationSet, ResolvedRelations};

/// Parameters of a planted hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedConfig {
    pub n: usize,
    pub dim: usize,
    /// Maximum number of children per node.
    pub branching: usize,
    /// Number of top-level nodes (the planted forest's roots).
    pub n_tops: usize,
    /// Displacement scale of level-1 children from their parent.
    pub sigma0: f64,
    /// Per-level shrink factor of the displacement scale.
    pub shrink: f64,
    /// Std of the rank perturbation, as a fraction of `n`.
    pub rank_noise: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            n: 1000,
            dim: 10,
            branching: 3,
            n_tops: 3,
            sigma0: 1.0,
            shrink: 0.7,
            rank_noise: 0.05,
            seed: 0,
        }
    }
}

/// A random forest embedded so that each child sits near its parent, with
/// powers that fall with depth.
#[derive(Debug, Clone)]
pub struct PlantedHierarchy {
    pub embedding: EmbeddingSet,
    pub powers: PowerAssignment,
    /// Planted parent of each entity; `None` for top-level nodes.
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
}

impl PlantedHierarchy {
    pub fn generate(cfg: &PlantedConfig) -> Result<Self> {
        if cfg.n == 0 || cfg.dim == 0 || cfg.branching == 0 || cfg.n_tops == 0 {
            return Err(Error::InvalidParameter(
                "n, dim, branching and n_tops must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let (n, d) = (cfg.n, cfg.dim);

        // Topology: each new node attaches to a uniformly chosen node that
        // still has room for a child.
        let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
        let mut depth = Vec::with_capacity(n);
        let mut open: Vec<usize> = Vec::new();
        let mut n_children = vec![0usize; n];
        for i in 0..n {
            if i < cfg.n_tops.min(n) {
                parent.push(None);
                depth.push(0);
            } else {
                let slot = rng.random_range(0..open.len());
                let p = open[slot];
                n_children[p] += 1;
                if n_children[p] == cfg.branching {
                    open.swap_remove(slot);
                }
                parent.push(Some(p));
                depth.push(depth[p] + 1);
            }
            open.push(i);
        }

        // Geometry: tops spread at scale 2 * sigma0, children displaced by
        // sigma0 * shrink^(depth - 1).
        let mut data = vec![0.0; n * d];
        for i in 0..n {
            let scale = match parent[i] {
                None => 2.0 * cfg.sigma0,
                Some(_) => cfg.sigma0 * cfg.shrink.powi(depth[i] as i32 - 1),
            };
            for k in 0..d {
                let base = parent[i].map_or(0.0, |p| data[p * d + k]);
                let z: f64 = StandardNormal.sample(&mut rng);
                data[i * d + k] = base + scale * z;
            }
        }

        // Power: rank by depth, perturb the rank, then Zipf over final ranks.
        let noise = Normal::new(0.0, cfg.rank_noise * n as f64)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut by_depth: Vec<usize> = (0..n).collect();
        by_depth.sort_by_key(|&i| (depth[i], i));
        let mut keyed: Vec<(f64, usize)> = by_depth
            .iter()
            .enumerate()
            .map(|(pos, &i)| (pos as f64 + noise.sample(&mut rng), i))
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let zipf = zipf_power(n)?;
        let mut raw = vec![0.0; n];
        for (rank, &(_, i)) in keyed.iter().enumerate() {
            raw[i] = zipf.get(rank);
        }

        let labels = (0..n).map(|i| format!("n{i}")).collect();
        Ok(PlantedHierarchy {
            embedding: EmbeddingSet::from_flat(labels, data, d)?,
            powers: PowerAssignment::from_raw(raw, PowerSource::External)?,
            parent,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Planted child → parent edges as entity indices.
    pub fn truth(&self) -> ResolvedRelations {
        ResolvedRelations::from_pairs(
            self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (c, p))),
        )
    }

    /// Planted child → parent edges as labels.
    pub fn relations(&self) -> RelationSet {
        let e = &self.embedding;
        RelationSet::from_pairs(
            "planted",
            self.parent
                .iter()
                .enumerate()
                .filter_map(|(c, p)| p.map(|p| (e.label(c).to_owned(), e.label(p).to_owned()))),
        )
    }

    /// Planted ancestors of `i`, starting with `i` itself.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut cur = i;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Deepest common planted ancestor; `None` across different tops.
    pub fn lca(&self, a: usize, b: usize) -> Option<usize> {
        let anc: BTreeSet<usize> = self.ancestors(a).into_iter().collect();
        self.ancestors(b).into_iter().find(|x| anc.contains(x))
    }
}

/// Rows are random unit directions scaled by Zipf magnitudes, plus isotropic
/// noise at `noise` times each row's magnitude. Returns the embedding and
/// the magnitudes.
pub fn zipf_magnitude_embedding(n: usize, dim: usize, noise: f64, seed: u64) -> Result<(EmbeddingSet, Vec<f64>)> {
    if n == 0 || dim == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let magnitudes = crate::power::zipf_raw(n, 1.0);
    let mut data = Vec::with_capacity(n * dim);
    let per_coord = noise / (dim as f64).sqrt();
    for &m in &magnitudes {
        let dir: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        for x in dir {
            let z: f64 = StandardNormal.sample(&mut rng);
            data.push(m * (x / norm + per_coord * z));
        }
    }
    let labels = (0..n).map(|i| format!("w{i}")).collect();
    Ok((EmbeddingSet::from_flat(labels, data, dim)?, magnitudes))
}

/// Uniform random points in `[-1, 1]^dim` with Zipf powers over a random
/// permutation.
pub fn uniform_instance(n: usize, dim: usize, seed: u64) -> Result<(EmbeddingSet, PowerAssignment)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let labels = (0..n).map(|i| format!("u{i}")).collect();
    let e = EmbeddingSet::from_flat(labels, data, dim)?;
    let mut raw = crate::power::zipf_raw(n, 1.0);
    rand::seq::SliceRandom::shuffle(raw.as_mut_slice(), &mut rng);
    Ok((e, PowerAssignment::from_raw(raw, PowerSource::External)?))
}
