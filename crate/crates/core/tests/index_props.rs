mod common;

use std::collections::BTreeSet;

use orient::distance::DistanceKind;
use orient::embedding::EmbeddingSet;
use orient::lca::{hit_rate, lca_closure, lch_closure, sample_pairs, LcaIndex};
use orient::nnindex::BallTree;
use orient::power::{
    debias_embedding, degree_power, fit_pca, pagerank_raw, pca_power, zipf_power, PageRankConfig,
    PowerAssignment, PowerSource,
};
use orient::relations::RelationSet;
use orient::score::{distance_term, ScoreParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(max_n: usize, max_d: usize) -> impl Strategy<Value = EmbeddingSet> {
    (2usize..max_n, 1usize..max_d).prop_flat_map(|(n, d)| {
        prop::collection::vec(-3i32..=3, n * d).prop_map(move |g| {
            let data = g.into_iter().map(|x| x as f64 + 0.25).collect();
            EmbeddingSet::from_flat((0..n).map(|i| format!("p{i}")).collect(), data, d).unwrap()
        })
    })
}

fn kind() -> impl Strategy<Value = DistanceKind> {
    prop_oneof![Just(DistanceKind::Euclidean), Just(DistanceKind::Cosine)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn queries_match_linear_scan(
        e in points(80, 5),
        k in kind(),
        mask in prop::collection::vec(any::<bool>(), 80),
        q_raw in prop::collection::vec(-3.0f64..3.0, 5),
        leaf in 1usize..8,
        weight in 0.0f64..=1.0,
    ) {
        let n = e.len();
        let pw = PowerAssignment::from_raw((0..n).map(|i| ((i * 7) % 5 + 1) as f64).collect(), PowerSource::External).unwrap();
        let mut tree = BallTree::build(&e, &pw, k, leaf).unwrap();
        let mut active = Vec::new();
        for i in 0..n {
            if mask[i] || i == 0 {
                tree.activate(i).unwrap();
                active.push(i);
            }
        }
        tree.check_invariants().unwrap();
        let q: Vec<f64> = q_raw[..e.dim()].to_vec();

        // nearest: smallest distance, lowest index on ties
        let scan = active.iter().map(|&i| (i, common::dist(&q, e.row(i), k)))
            .fold(None, |b: Option<(usize, f64)>, c| match b { Some(b) if b.1 <= c.1 => Some(b), _ => Some(c) })
            .unwrap();
        prop_assert_eq!(tree.nearest_active(&q).unwrap(), scan);

        // best score: highest score, earliest activation on ties
        let params = ScoreParams {
            p: weight,
            max_distance_term: distance_term(scan.1, 1e-12),
            max_log_power: active.iter().map(|&i| pw.get(i).ln()).fold(0.0, f64::max),
            eps: 1e-12,
        };
        let best = active.iter().map(|&i| (i, params.score(common::dist(&q, e.row(i), k), pw.get(i).ln())))
            .fold(None, |b: Option<(usize, f64)>, c| match b { Some(b) if b.1 >= c.1 => Some(b), _ => Some(c) })
            .unwrap();
        prop_assert_eq!(tree.best_scoring_active(&q, &params).unwrap(), best);

        // knn over all entities, excluding entity 0
        let kk = (n - 1).min(5);
        let mut all: Vec<(usize, f64)> = (1..n).map(|i| (i, common::dist(&q, e.row(i), k))).collect();
        all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        all.truncate(kk);
        prop_assert_eq!(tree.knn(&q, kk, Some(0)).unwrap(), all);
    }

    #[test]
    fn lca_symmetric_and_shallow(seed in 0u64..10_000, n in 0usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_tree(n, &mut rng);
        let idx = LcaIndex::new(&t);
        let tour = idx.tour_depths();
        prop_assert!(tour.windows(2).all(|w| w[0].abs_diff(w[1]) == 1));
        for u in 0..t.n_nodes() {
            for v in 0..t.n_nodes() {
                let l = idx.lca(u, v).unwrap();
                prop_assert_eq!(l, idx.lca(v, u).unwrap());
                prop_assert!(t.level(l) <= t.level(u).min(t.level(v)));
                prop_assert_eq!(l, common::naive_lca(&t, u, v));
            }
        }
    }

    #[test]
    fn hit_rate_grows_with_closure(seed in 0u64..1000, n in 3usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_tree(n, &mut rng);
        let idx = LcaIndex::new(&t);
        // ground truth: hypernym edges from a second random tree
        let g = common::random_tree(n, &mut rng);
        let label = |i: usize| format!("e{i}");
        let edges = RelationSet::from_pairs("h", g.real_edges().map(|(c, p)| (label(c), label(p))));
        let pairs: Vec<(usize, usize)> = (0..40).map(|k| (k % n, (k * 7 + 3) % n)).collect();
        let mut prev = 0.0;
        for c in 0..4 {
            let tree_sets: Vec<BTreeSet<String>> = pairs.iter()
                .map(|&(a, b)| lca_closure(&idx, &t, a + 1, b + 1, c).unwrap().into_iter().map(label).collect())
                .collect();
            let truth: Vec<BTreeSet<String>> = pairs.iter()
                .map(|&(a, b)| {
                    let base = common::naive_lca(&g, a + 1, b + 1);
                    let base: BTreeSet<String> = base.checked_sub(1).map(label).into_iter().collect();
                    lch_closure(&edges, &base, c)
                })
                .collect();
            if let Ok(r) = hit_rate(&tree_sets, &truth) {
                prop_assert!(r >= prev);
                prev = r;
            }
        }
    }

    #[test]
    fn powers_are_floored_at_one(e in points(40, 4), seed in 0u64..100) {
        let n = e.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_tree(n, &mut rng);
        let edges = RelationSet::from_pairs("g", g.real_edges().map(|(c, p)| (e.label(c).to_owned(), e.label(p).to_owned())));
        let mut providers = vec![zipf_power(n).unwrap()];
        if !edges.is_empty() {
            providers.push(degree_power(&edges, &e).unwrap());
            let run = pagerank_raw(&edges, &e, PageRankConfig::default()).unwrap();
            prop_assert!((run.ranks.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            providers.push(PowerAssignment::from_raw(run.ranks, PowerSource::PageRank).unwrap());
        }
        if let Ok(model) = fit_pca(&e, 1) {
            if let Ok(p) = pca_power(&e, &model) {
                providers.push(p);
            }
        }
        for p in providers {
            prop_assert!(p.powers().iter().all(|&x| x >= 1.0));
            prop_assert_eq!(p.powers().iter().copied().fold(f64::INFINITY, f64::min), 1.0);
        }
    }

    #[test]
    fn debiased_rows_are_orthogonal(e in points(60, 8), k in 1usize..4) {
        if let Ok(model) = fit_pca(&e, k.min(e.dim())) {
            let d = debias_embedding(&e, &model).unwrap();
            for row in d.rows() {
                for u in model.components() {
                    let dot: f64 = row.iter().zip(u).map(|(a, b)| a * b).sum();
                    prop_assert!(dot.abs() <= 1e-8);
                }
            }
        }
    }
}

#[test]
fn sampled_partners_are_true_neighbors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 300;
    let data: Vec<f64> = (0..n * 6).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect();
    let e = EmbeddingSet::from_flat((0..n).map(|i| format!("s{i}")).collect(), data, 6).unwrap();
    let pw = zipf_power(n).unwrap();
    let tree = BallTree::build(&e, &pw, DistanceKind::Euclidean, 16).unwrap();
    let pairs = sample_pairs(&e, &tree, 500, 20, 11).unwrap();
    assert_eq!(pairs, sample_pairs(&e, &tree, 500, 20, 11).unwrap());
    for &(a, b) in &pairs {
        let mut d: Vec<(usize, f64)> = (0..n).filter(|&j| j != a).map(|j| (j, common::l2(e.row(a), e.row(j)))).collect();
        d.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        assert!(d[..20].iter().any(|&(j, _)| j == b));
    }
    for &(a, b) in &sample_pairs(&e, &tree, 50, 1, 3).unwrap() {
        assert_eq!(b, tree.knn(e.row(a), 1, Some(a)).unwrap()[0].0);
    }
    assert!(sample_pairs(&e, &tree, 5, n, 0).is_err());
}
