//! Static ball tree with per-entity activation.
//!
//! The point set is fixed at construction. Entities are switched on one at a
//! time with [`BallTree::activate`]; every ball tracks how many of its entities
//! are active, the largest active power and the earliest activation, which is
//! enough to bound the parent score of a whole subtree. Searches are exact:
//! candidates are always scored with the same distance function as a linear
//! scan, and geometric bounds carry a small relative slack so rounding never
//! prunes a true winner.
//!
//! For cosine distance the ball geometry is built on unit-normalized vectors.
//! Cosine distance equals half the squared chord between unit vectors, so a
//! chord lower bound gives a cosine lower bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::distance::{distance_unchecked, euclidean, norm, DistanceKind};
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::power::PowerAssignment;
use crate::score::{distance_term, Candidate, ScoreParams};

pub const DEFAULT_LEAF_SIZE: usize = 32;

const NONE: usize = usize::MAX;
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Ball {
    radius: f64,
    start: usize,
    end: usize,
    left: usize,
    right: usize,
    parent: usize,
    active_count: usize,
    max_active_power: f64,
    /// Rank key of the first activated entity inside, `NONE` if none.
    first_rank_key: usize,
}

impl Ball {
    fn is_leaf(&self) -> bool {
        self.left == NONE
    }
}

/// Read-only view of one ball, for inspection and tests.
#[derive(Debug, Clone, Copy)]
pub struct BallInfo<'a> {
    pub center: &'a [f64],
    pub radius: f64,
    /// Entity indices inside the ball.
    pub entities: &'a [usize],
    pub active_count: usize,
    /// Max power over active entities, `-inf` when none is active.
    pub max_active_power: f64,
    pub children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct BallTree {
    kind: DistanceKind,
    dim: usize,
    leaf_size: usize,
    /// Original vectors in tree order, used for exact distances.
    points: Vec<f64>,
    /// Unit vectors in tree order (cosine only).
    unit_points: Option<Vec<f64>>,
    centers: Vec<f64>,
    balls: Vec<Ball>,
    /// Tree position -> entity.
    order: Vec<usize>,
    /// Entity -> tree position.
    position: Vec<usize>,
    power: Vec<f64>,
    log_power: Vec<f64>,
    /// Per position; `NONE` while inactive.
    rank_key: Vec<usize>,
    leaf_of: Vec<usize>,
    n_active: usize,
}

struct Query<'q> {
    exact: &'q [f64],
    geo: Vec<f64>,
}

impl BallTree {
    /// Builds the tree over every entity, all inactive.
    ///
    /// Splits on the dimension of widest spread at the median position.
    pub fn build(
        e: &EmbeddingSet,
        powers: &PowerAssignment,
        kind: DistanceKind,
        leaf_size: usize,
    ) -> Result<Self> {
        if powers.len() != e.len() {
            return Err(Error::SizeMismatch {
                what: "powers",
                expected: e.len(),
                found: powers.len(),
            });
        }
        if leaf_size == 0 {
            return Err(Error::InvalidParameter("leaf_size must be positive".into()));
        }
        let (n, dim) = (e.len(), e.dim());
        let unit: Option<Vec<f64>> = match kind {
            DistanceKind::Euclidean => None,
            DistanceKind::Cosine => {
                let mut out = Vec::with_capacity(n * dim);
                for row in e.rows() {
                    let len = norm(row);
                    if len == 0.0 {
                        return Err(Error::ZeroVector);
                    }
                    out.extend(row.iter().map(|x| x / len));
                }
                Some(out)
            }
        };
        let geometry: &[f64] = unit.as_deref().unwrap_or(e.as_flat());

        let mut builder = Builder {
            geometry,
            dim,
            leaf_size,
            order: (0..n).collect(),
            balls: Vec::new(),
            centers: Vec::new(),
        };
        builder.split(0, n, NONE);
        let Builder {
            order,
            balls,
            centers,
            ..
        } = builder;

        let mut position = vec![0; n];
        for (pos, &ent) in order.iter().enumerate() {
            position[ent] = pos;
        }
        let mut leaf_of = vec![NONE; n];
        for (id, ball) in balls.iter().enumerate() {
            if ball.is_leaf() {
                for slot in &mut leaf_of[ball.start..ball.end] {
                    *slot = id;
                }
            }
        }
        let gather = |src: &[f64]| -> Vec<f64> {
            let mut out = Vec::with_capacity(n * dim);
            for &ent in &order {
                out.extend_from_slice(&src[ent * dim..(ent + 1) * dim]);
            }
            out
        };
        let points = gather(e.as_flat());
        let unit_points = unit.as_deref().map(gather);
        let power: Vec<f64> = order.iter().map(|&i| powers.get(i)).collect();
        let log_power = power.iter().map(|p| p.ln()).collect();

        Ok(BallTree {
            kind,
            dim,
            leaf_size,
            points,
            unit_points,
            centers,
            balls,
            order,
            position,
            power,
            log_power,
            rank_key: vec![NONE; n],
            leaf_of,
            n_active: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn is_active(&self, entity: usize) -> bool {
        self.rank_key[self.position[entity]] != NONE
    }

    pub fn n_balls(&self) -> usize {
        self.balls.len()
    }

    /// Ball 0 is the root.
    pub fn ball(&self, id: usize) -> BallInfo<'_> {
        let b = &self.balls[id];
        BallInfo {
            center: &self.centers[id * self.dim..(id + 1) * self.dim],
            radius: b.radius,
            entities: &self.order[b.start..b.end],
            active_count: b.active_count,
            max_active_power: b.max_active_power,
            children: (!b.is_leaf()).then_some((b.left, b.right)),
        }
    }

    /// Longest root-to-leaf path, counted in balls.
    pub fn depth(&self) -> usize {
        fn go(balls: &[Ball], id: usize) -> usize {
            let b = &balls[id];
            if b.is_leaf() {
                1
            } else {
                1 + go(balls, b.left).max(go(balls, b.right))
            }
        }
        go(&self.balls, 0)
    }

    /// Marks an entity active. Activation order becomes its insertion rank,
    /// used for tie-breaking.
    pub fn activate(&mut self, entity: usize) -> Result<()> {
        if entity >= self.len() {
            return Err(Error::UnknownNode(entity));
        }
        let pos = self.position[entity];
        if self.rank_key[pos] != NONE {
            return Err(Error::AlreadyActive(entity));
        }
        self.n_active += 1;
        let key = self.n_active;
        self.rank_key[pos] = key;
        let power = self.power[pos];
        let mut id = self.leaf_of[pos];
        while id != NONE {
            let b = &mut self.balls[id];
            b.active_count += 1;
            if power > b.max_active_power {
                b.max_active_power = power;
            }
            if b.first_rank_key == NONE {
                b.first_rank_key = key;
            }
            id = b.parent;
        }
        Ok(())
    }

    /// Insertion rank key of an entity (1 for the first activation), if active.
    pub fn rank_key(&self, entity: usize) -> Option<usize> {
        let key = self.rank_key[self.position[entity]];
        (key != NONE).then_some(key)
    }

    fn query<'q>(&self, q: &'q [f64]) -> Result<Query<'q>> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: q.len(),
            });
        }
        let geo = match self.kind {
            DistanceKind::Euclidean => q.to_vec(),
            DistanceKind::Cosine => {
                let len = norm(q);
                if len == 0.0 {
                    return Err(Error::ZeroVector);
                }
                q.iter().map(|x| x / len).collect()
            }
        };
        Ok(Query { exact: q, geo })
    }

    #[inline]
    fn point(&self, pos: usize) -> &[f64] {
        &self.points[pos * self.dim..(pos + 1) * self.dim]
    }

    #[inline]
    fn center(&self, id: usize) -> &[f64] {
        &self.centers[id * self.dim..(id + 1) * self.dim]
    }

    /// Lower bound on the distance from the query to anything in ball `id`.
    #[inline]
    fn lower_bound(&self, q: &Query<'_>, id: usize) -> f64 {
        let dc = euclidean(&q.geo, self.center(id));
        let r = self.balls[id].radius;
        let gap = dc - r - BOUND_SLACK * (dc + r);
        if gap <= 0.0 {
            return 0.0;
        }
        match self.kind {
            DistanceKind::Euclidean => gap,
            DistanceKind::Cosine => (0.5 * gap * gap * (1.0 - BOUND_SLACK) - 1e-13).max(0.0),
        }
    }

    #[inline]
    fn exact_distance(&self, q: &Query<'_>, pos: usize) -> f64 {
        distance_unchecked(q.exact, self.point(pos), self.kind)
    }

    /// Nearest active entity; ties go to the lowest entity index.
    pub fn nearest_active(&self, q: &[f64]) -> Result<(usize, f64)> {
        if self.n_active == 0 {
            return Err(Error::NoActiveEntities);
        }
        let q = self.query(q)?;
        let mut best = (f64::INFINITY, usize::MAX);
        self.nearest_in(&q, 0, &mut best);
        Ok((best.1, best.0))
    }

    fn nearest_in(&self, q: &Query<'_>, id: usize, best: &mut (f64, usize)) {
        let ball = &self.balls[id];
        if ball.is_leaf() {
            for pos in ball.start..ball.end {
                if self.rank_key[pos] == NONE {
                    continue;
                }
                let d = self.exact_distance(q, pos);
                let ent = self.order[pos];
                if d < best.0 || (d == best.0 && ent < best.1) {
                    *best = (d, ent);
                }
            }
            return;
        }
        let mut kids = [(ball.left, 0.0), (ball.right, 0.0)];
        for kid in &mut kids {
            kid.1 = self.lower_bound(q, kid.0);
        }
        if kids[1].1 < kids[0].1 {
            kids.swap(0, 1);
        }
        for (kid, lb) in kids {
            if self.balls[kid].active_count > 0 && lb <= best.0 {
                self.nearest_in(q, kid, best);
            }
        }
    }

    /// Exact argmax of the parent score over active entities.
    ///
    /// Ties resolve to the earliest activation.
    pub fn best_scoring_active(&self, q: &[f64], params: &ScoreParams) -> Result<(usize, f64)> {
        let best = self.best_scoring_with(q, params, None)?;
        Ok((best.entity.expect("an active entity was scored"), best.score))
    }

    /// Same search seeded with an incumbent (e.g. the artificial root). The
    /// returned candidate is the incumbent unless some active entity beats it.
    pub fn best_scoring_with(
        &self,
        q: &[f64],
        params: &ScoreParams,
        incumbent: Option<Candidate>,
    ) -> Result<Candidate> {
        if self.n_active == 0 {
            return Err(Error::NoActiveEntities);
        }
        let q = self.query(q)?;
        let mut best = incumbent.unwrap_or(Candidate {
            score: f64::NEG_INFINITY,
            rank_key: usize::MAX,
            entity: None,
        });
        self.best_in(&q, params, 0, &mut best);
        Ok(best)
    }

    /// Upper bound on the score of any active entity in ball `id`.
    #[inline]
    fn score_bound(&self, q: &Query<'_>, params: &ScoreParams, id: usize) -> f64 {
        let lb = self.lower_bound(q, id);
        params.combine(
            distance_term(lb, params.eps),
            self.balls[id].max_active_power.ln(),
        )
    }

    fn prunable(&self, id: usize, bound: f64, best: &Candidate) -> bool {
        let ball = &self.balls[id];
        ball.active_count == 0
            || bound < best.score
            || (bound == best.score && ball.first_rank_key > best.rank_key)
    }

    fn best_in(&self, q: &Query<'_>, params: &ScoreParams, id: usize, best: &mut Candidate) {
        let ball = &self.balls[id];
        if ball.is_leaf() {
            for pos in ball.start..ball.end {
                let key = self.rank_key[pos];
                if key == NONE {
                    continue;
                }
                let cand = Candidate {
                    score: params.score(self.exact_distance(q, pos), self.log_power[pos]),
                    rank_key: key,
                    entity: Some(self.order[pos]),
                };
                if cand.beats(best) {
                    *best = cand;
                }
            }
            return;
        }
        let mut kids = [(ball.left, 0.0), (ball.right, 0.0)];
        for kid in &mut kids {
            if self.balls[kid.0].active_count > 0 {
                kid.1 = self.score_bound(q, params, kid.0);
            } else {
                kid.1 = f64::NEG_INFINITY;
            }
        }
        if kids[1].1 > kids[0].1 {
            kids.swap(0, 1);
        }
        for (kid, bound) in kids {
            if !self.prunable(kid, bound, best) {
                self.best_in(q, params, kid, best);
            }
        }
    }

    /// The `k` nearest entities regardless of activation, ascending by
    /// distance with index tie-break.
    pub fn knn(&self, q: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<(usize, f64)>> {
        let available = self.len() - usize::from(exclude.is_some_and(|x| x < self.len()));
        if k > available {
            return Err(Error::KTooLarge {
                k,
                limit: available,
            });
        }
        if k == 0 {
            return Ok(Vec::new());
        }
        let q = self.query(q)?;
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.knn_in(&q, k, exclude, 0, &mut heap);
        let mut out: Vec<(usize, f64)> = heap.into_iter().map(|h| (h.entity, h.dist)).collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        Ok(out)
    }

    fn knn_in(
        &self,
        q: &Query<'_>,
        k: usize,
        exclude: Option<usize>,
        id: usize,
        heap: &mut BinaryHeap<HeapItem>,
    ) {
        let ball = &self.balls[id];
        if ball.is_leaf() {
            for pos in ball.start..ball.end {
                let entity = self.order[pos];
                if Some(entity) == exclude {
                    continue;
                }
                let item = HeapItem {
                    dist: self.exact_distance(q, pos),
                    entity,
                };
                if heap.len() < k {
                    heap.push(item);
                } else if item < *heap.peek().unwrap() {
                    heap.pop();
                    heap.push(item);
                }
            }
            return;
        }
        let mut kids = [(ball.left, 0.0), (ball.right, 0.0)];
        for kid in &mut kids {
            kid.1 = self.lower_bound(q, kid.0);
        }
        if kids[1].1 < kids[0].1 {
            kids.swap(0, 1);
        }
        for (kid, lb) in kids {
            if heap.len() < k || lb <= heap.peek().unwrap().dist {
                self.knn_in(q, k, exclude, kid, heap);
            }
        }
    }

    /// Checks containment and the activation counters against a full
    /// recount. Intended for tests.
    pub fn check_invariants(&self) -> Result<()> {
        let geometry = self.unit_points.as_deref().unwrap_or(&self.points);
        for (id, ball) in self.balls.iter().enumerate() {
            let center = self.center(id);
            for pos in ball.start..ball.end {
                let d = euclidean(center, &geometry[pos * self.dim..(pos + 1) * self.dim]);
                if d > ball.radius * (1.0 + 1e-9) + 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "ball {id}: point at {d} outside radius {}",
                        ball.radius
                    )));
                }
            }
            let active: Vec<usize> = (ball.start..ball.end)
                .filter(|&p| self.rank_key[p] != NONE)
                .collect();
            let max_power = active
                .iter()
                .map(|&p| self.power[p])
                .fold(f64::NEG_INFINITY, f64::max);
            let first = active.iter().map(|&p| self.rank_key[p]).min().unwrap_or(NONE);
            if active.len() != ball.active_count
                || max_power != ball.max_active_power
                || first != ball.first_rank_key
            {
                return Err(Error::InvalidParameter(format!("ball {id}: stale counters")));
            }
            if !ball.is_leaf() {
                let (l, r) = (&self.balls[ball.left], &self.balls[ball.right]);
                if l.active_count + r.active_count != ball.active_count {
                    return Err(Error::InvalidParameter(format!("ball {id}: count sum")));
                }
            }
        }
        Ok(())
    }
}

struct Builder<'a> {
    geometry: &'a [f64],
    dim: usize,
    leaf_size: usize,
    order: Vec<usize>,
    balls: Vec<Ball>,
    centers: Vec<f64>,
}

impl Builder<'_> {
    fn row(&self, ent: usize) -> &[f64] {
        &self.geometry[ent * self.dim..(ent + 1) * self.dim]
    }

    fn split(&mut self, start: usize, end: usize, parent: usize) -> usize {
        let dim = self.dim;
        let count = (end - start) as f64;
        let mut center = vec![0.0; dim];
        for &ent in &self.order[start..end] {
            for (c, x) in center.iter_mut().zip(self.row(ent)) {
                *c += x;
            }
        }
        center.iter_mut().for_each(|c| *c /= count);
        let radius = self.order[start..end]
            .iter()
            .map(|&ent| euclidean(&center, self.row(ent)))
            .fold(0.0, f64::max);

        let id = self.balls.len();
        self.balls.push(Ball {
            radius,
            start,
            end,
            left: NONE,
            right: NONE,
            parent,
            active_count: 0,
            max_active_power: f64::NEG_INFINITY,
            first_rank_key: NONE,
        });
        self.centers.extend_from_slice(&center);

        if end - start <= self.leaf_size {
            return id;
        }

        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &ent in &self.order[start..end] {
            for (j, &x) in self.row(ent).iter().enumerate() {
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        let axis = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])).then(b.cmp(&a)))
            .unwrap();
        let mid = (end - start) / 2;
        let geometry = self.geometry;
        self.order[start..end].select_nth_unstable_by(mid, |&a, &b| {
            geometry[a * dim + axis]
                .total_cmp(&geometry[b * dim + axis])
                .then(a.cmp(&b))
        });
        let left = self.split(start, start + mid, id);
        let right = self.split(start + mid, end, id);
        self.balls[id].left = left;
        self.balls[id].right = right;
        id
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    entity: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.entity.cmp(&other.entity))
    }
}
