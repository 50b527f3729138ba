//! The parent-selection score.
//!
//! `score(j) = p * dist^-2 / M_d + (1 - p) * ln(power_j) / M_p`
//!
//! with `dist^-2` capped at `eps^-2` and the power term taken as 0 when
//! `M_p == 0`. Both the exhaustive scan and the ball-tree search call these
//! functions, so equal inputs give bit-identical scores on either path.

/// Capped inverse squared distance, `1 / max(dist, eps)^2`.
#[inline]
pub fn distance_term(dist: f64, eps: f64) -> f64 {
    let d = dist.max(eps);
    1.0 / (d * d)
}

/// Normalizers and weight for one insertion step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreParams {
    /// Weight on the distance term, in `[0, 1]`.
    pub p: f64,
    /// Max of [`distance_term`] over the current candidates.
    pub max_distance_term: f64,
    /// Max of `ln(power)` over the current candidates.
    pub max_log_power: f64,
    pub eps: f64,
}

impl ScoreParams {
    /// Combines a precomputed distance term with a log power. Monotone
    /// nondecreasing in both arguments, which is what makes subtree bounds
    /// admissible.
    #[inline]
    pub fn combine(&self, distance_term: f64, log_power: f64) -> f64 {
        let power_term = if self.max_log_power == 0.0 {
            0.0
        } else {
            log_power / self.max_log_power
        };
        self.p * distance_term / self.max_distance_term + (1.0 - self.p) * power_term
    }

    #[inline]
    pub fn score(&self, dist: f64, log_power: f64) -> f64 {
        self.combine(distance_term(dist, self.eps), log_power)
    }
}

/// Candidate ordering for argmax: higher score wins, then lower rank key.
///
/// Rank key 0 is the artificial root; entity keys are insertion order + 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub score: f64,
    pub rank_key: usize,
    pub entity: Option<usize>,
}

impl Candidate {
    #[inline]
    pub fn beats(&self, other: &Candidate) -> bool {
        self.score > other.score || (self.score == other.score && self.rank_key < other.rank_key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_maxima_give_one() {
        let params = ScoreParams {
            p: 0.3,
            max_distance_term: distance_term(2.0, 1e-12),
            max_log_power: 5.0f64.ln(),
            eps: 1e-12,
        };
        assert!((params.score(2.0, 5.0f64.ln()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn convex_combination() {
        // distance ratio 0.5, power ratio 1.0, p = 0.6
        let params = ScoreParams {
            p: 0.6,
            max_distance_term: 2.0,
            max_log_power: 3.0,
            eps: 1e-12,
        };
        assert!((params.combine(1.0, 3.0) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn zero_power_normalizer_drops_power_term() {
        let params = ScoreParams {
            p: 0.0,
            max_distance_term: 1.0,
            max_log_power: 0.0,
            eps: 1e-12,
        };
        assert_eq!(params.score(1.0, 0.0), 0.0);
    }

    #[test]
    fn eps_caps_coincident_points() {
        assert_eq!(distance_term(0.0, 1e-6), distance_term(1e-6, 1e-6));
        assert!(distance_term(0.0, 1e-12).is_finite());
    }

    #[test]
    fn tie_break_prefers_lower_rank() {
        let a = Candidate { score: 0.5, rank_key: 0, entity: None };
        let b = Candidate { score: 0.5, rank_key: 3, entity: Some(2) };
        assert!(a.beats(&b) && !b.beats(&a));
    }
}
