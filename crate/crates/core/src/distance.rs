use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance used for parent selection and neighbor search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    #[default]
    Euclidean,
    Cosine,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Cosine => "cosine",
        })
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" | "euclidean" => Ok(DistanceKind::Euclidean),
            "cosine" | "cos" => Ok(DistanceKind::Cosine),
            other => Err(Error::InvalidParameter(format!("unknown distance `{other}`"))),
        }
    }
}

/// Checked distance between two vectors.
///
/// Cosine distance is `1 - cos(u, v)` clamped to `[0, 2]`.
pub fn distance(u: &[f64], v: &[f64], kind: DistanceKind) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if kind == DistanceKind::Cosine && (is_zero(u) || is_zero(v)) {
        return Err(Error::ZeroVector);
    }
    Ok(distance_unchecked(u, v, kind))
}

/// Distance without dimension or zero-vector checks. Every exact comparison
/// in the crate (brute force and indexed) goes through this function so
/// results agree bit for bit.
#[inline]
pub fn distance_unchecked(u: &[f64], v: &[f64], kind: DistanceKind) -> f64 {
    match kind {
        DistanceKind::Euclidean => euclidean(u, v),
        DistanceKind::Cosine => cosine(u, v),
    }
}

#[inline]
pub(crate) fn euclidean(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[inline]
fn cosine(u: &[f64], v: &[f64]) -> f64 {
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    (1.0 - dot / (nu.sqrt() * nv.sqrt())).clamp(0.0, 2.0)
}

pub(crate) fn norm(u: &[f64]) -> f64 {
    u.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn is_zero(u: &[f64]) -> bool {
    u.iter().all(|&a| a == 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let e = distance(&[0.0, 0.0], &[3.0, 4.0], DistanceKind::Euclidean).unwrap();
        assert_eq!(e, 5.0);
        let c = distance(&[1.0, 0.0], &[1.0, 0.0], DistanceKind::Cosine).unwrap();
        assert_eq!(c, 0.0);
        let c = distance(&[1.0, 0.0], &[0.0, 1.0], DistanceKind::Cosine).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            distance(&[1.0], &[1.0, 2.0], DistanceKind::Euclidean),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(matches!(
            distance(&[0.0, 0.0], &[1.0, 2.0], DistanceKind::Cosine),
            Err(Error::ZeroVector)
        ));
        assert!(distance(&[0.0, 0.0], &[1.0, 2.0], DistanceKind::Euclidean).is_ok());
    }

    #[test]
    fn cosine_is_clamped() {
        let d = distance(&[1.0, 0.0], &[-1.0, 0.0], DistanceKind::Cosine).unwrap();
        assert_eq!(d, 2.0);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0f64..100.0, 3)
    }

    proptest! {
        #[test]
        fn symmetric_and_nonnegative(u in vec3(), v in vec3()) {
            for kind in [DistanceKind::Euclidean, DistanceKind::Cosine] {
                if let (Ok(a), Ok(b)) = (distance(&u, &v, kind), distance(&v, &u, kind)) {
                    prop_assert!(a >= 0.0);
                    prop_assert_eq!(a, b);
                }
            }
        }

        #[test]
        fn euclidean_triangle(u in vec3(), v in vec3(), w in vec3()) {
            let k = DistanceKind::Euclidean;
            let uv = distance(&u, &v, k).unwrap();
            let vw = distance(&v, &w, k).unwrap();
            let uw = distance(&u, &w, k).unwrap();
            prop_assert!(uw <= (uv + vw) * (1.0 + 1e-9) + 1e-12);
        }
    }
}
