//! Independent reference implementations used by the integration and
//! acceptance tests.

#![allow(dead_code)]

use orient::builder::{make_plan, InsertionOrder};
use orient::distance::DistanceKind;
use orient::embedding::EmbeddingSet;
use orient::power::{PowerAssignment, PowerSource};
use orient::tree::Arborescence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn l2(u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..u.len() {
        let d = u[i] - v[i];
        s += d * d;
    }
    s.sqrt()
}

pub fn cos_dist(u: &[f64], v: &[f64]) -> f64 {
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for i in 0..u.len() {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    (1.0 - dot / (nu.sqrt() * nv.sqrt())).clamp(0.0, 2.0)
}

pub fn dist(u: &[f64], v: &[f64], kind: DistanceKind) -> f64 {
    match kind {
        DistanceKind::Euclidean => l2(u, v),
        DistanceKind::Cosine => cos_dist(u, v),
    }
}

/// Insertion sequence computed without the library for the sorted orders.
pub fn sequence(powers: &PowerAssignment, order: InsertionOrder, seed: u64) -> Vec<usize> {
    let n = powers.len();
    let mut seq: Vec<usize> = (0..n).collect();
    match order {
        InsertionOrder::Descending => {
            seq.sort_by(|&a, &b| powers.get(b).partial_cmp(&powers.get(a)).unwrap().then(a.cmp(&b)))
        }
        InsertionOrder::Ascending => {
            seq.sort_by(|&a, &b| powers.get(b).partial_cmp(&powers.get(a)).unwrap().then(a.cmp(&b)));
            seq.reverse();
        }
        // the shuffle itself is not under test here
        InsertionOrder::Random => seq = make_plan(powers, order, seed).sequence,
    }
    seq
}

/// Exhaustive score argmax over root + inserted entities. Returns each
/// entity's parent entity (`None` = artificial root).
pub fn score_oracle(
    e: &EmbeddingSet,
    powers: &PowerAssignment,
    seq: &[usize],
    p: f64,
    kind: DistanceKind,
    eps: f64,
) -> Vec<Option<usize>> {
    let centroid = e.centroid();
    let mut parent = vec![None; e.len()];
    let mut inserted: Vec<usize> = Vec::new();
    let mut inserted_powers: Vec<f64> = Vec::new();
    for &q in seq {
        if !inserted.is_empty() {
            let root_power = inserted_powers.iter().sum::<f64>() / inserted_powers.len() as f64;
            // candidate list: root first, then entities in insertion order,
            // which is exactly the rank-key order
            let mut cands: Vec<(Option<usize>, f64, f64)> =
                vec![(None, dist(e.row(q), &centroid, kind), root_power.ln())];
            for &c in &inserted {
                cands.push((Some(c), dist(e.row(q), e.row(c), kind), powers.get(c).ln()));
            }
            let dterm = |d: f64| {
                let d = d.max(eps);
                1.0 / (d * d)
            };
            let m_d = cands.iter().map(|c| dterm(c.1)).fold(f64::NEG_INFINITY, f64::max);
            let m_p = cands.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
            let mut best: Option<(Option<usize>, f64)> = None;
            for &(who, d, lp) in &cands {
                let pt = if m_p == 0.0 { 0.0 } else { lp / m_p };
                let s = p * dterm(d) / m_d + (1.0 - p) * pt;
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((who, s));
                }
            }
            parent[q] = best.unwrap().0;
        }
        inserted.push(q);
        inserted_powers.push(powers.get(q));
    }
    parent
}

/// Greedy nearest-neighbor insertion: each entity attaches to the closest
/// of root and inserted entities, earliest candidate on ties.
pub fn greedy_nn_oracle(e: &EmbeddingSet, seq: &[usize], kind: DistanceKind, eps: f64) -> Vec<Option<usize>> {
    let centroid = e.centroid();
    let mut parent = vec![None; e.len()];
    let mut inserted: Vec<usize> = Vec::new();
    for &q in seq {
        if !inserted.is_empty() {
            let mut best = (None, dist(e.row(q), &centroid, kind).max(eps));
            for &c in &inserted {
                let d = dist(e.row(q), e.row(c), kind).max(eps);
                if d < best.1 {
                    best = (Some(c), d);
                }
            }
            parent[q] = best.0;
        }
        inserted.push(q);
    }
    parent
}

/// Parent entity of every entity in a built tree.
pub fn parent_entities(t: &Arborescence) -> Vec<Option<usize>> {
    (0..t.n_entities()).map(|i| t.parent_entity(i)).collect()
}

/// Random tree over `n` entities; `None` parent = root. Entity `i` attaches
/// to an earlier entity or the root; `window` biases toward recent nodes,
/// giving deeper trees when small.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Arborescence {
    let window = rng.random_range(1..=n.max(1));
    let mut parent = vec![None];
    for node in 1..=n {
        let lo = node.saturating_sub(window);
        parent.push(Some(rng.random_range(lo..node)));
    }
    let total = n + 1;
    let mut lengths: Vec<f64> = (0..total).map(|_| rng.random_range(0.0..3.0)).collect();
    lengths[0] = 0.0;
    Arborescence::from_parts(parent, lengths, (0..total).collect(), vec![]).unwrap()
}

/// Deepest common ancestor by intersecting ancestor sets.
pub fn naive_lca(t: &Arborescence, u: usize, v: usize) -> usize {
    let mut anc = vec![false; t.n_nodes()];
    let mut x = Some(u);
    while let Some(n) = x {
        anc[n] = true;
        x = t.parent(n);
    }
    let mut y = v;
    while !anc[y] {
        y = t.parent(y).unwrap();
    }
    y
}

/// Random instance in the shape used by the equivalence criteria.
pub struct Instance {
    pub embedding: EmbeddingSet,
    pub powers: PowerAssignment,
    pub kind: DistanceKind,
    pub p: f64,
    pub order: InsertionOrder,
    pub seed: u64,
}

pub fn random_instance(i: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
    let n = rng.random_range(2..=500);
    let dim = [2, 8, 16][i % 3];
    let p = [0.0, 0.25, 0.6, 1.0][(i / 3) % 4];
    let kind = if i % 2 == 0 { DistanceKind::Euclidean } else { DistanceKind::Cosine };
    let order = InsertionOrder::ALL[(i / 12) % 3];
    // every fifth instance lives on a coarse grid with tied powers, which
    // exercises exact ties in distance and score
    let coarse = i % 5 == 4;
    let mut data: Vec<f64> = (0..n * dim)
        .map(|_| {
            let x: f64 = rng.random_range(-1.0..1.0);
            if coarse {
                (x * 2.0).round() / 2.0
            } else {
                x
            }
        })
        .collect();
    if kind == DistanceKind::Cosine {
        // keep every row and the centroid away from zero
        for v in &mut data {
            *v += 1.5;
        }
    }
    let raw: Vec<f64> = if coarse {
        (0..n).map(|_| rng.random_range(1..4) as f64).collect()
    } else {
        let mut z: Vec<f64> = (0..n).map(|r| n as f64 / (r + 1) as f64).collect();
        rand::seq::SliceRandom::shuffle(z.as_mut_slice(), &mut rng);
        z
    };
    let labels = (0..n).map(|j| format!("e{j}")).collect();
    Instance {
        embedding: EmbeddingSet::from_flat(labels, data, dim).unwrap(),
        powers: PowerAssignment::from_raw(raw, PowerSource::External).unwrap(),
        kind,
        p,
        order,
        seed: i as u64,
    }
}
