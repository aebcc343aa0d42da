//! Cones over finite metric spaces.
//!
//! The cone of curvature `k` over a metric space Y has points `(t, y)`
//! (radius, direction) plus an apex at radius zero. Distances come from the
//! law of cosines in curvature `k`, using the *truncated* base distance
//! `min(pi, d_Y)` as the enclosed angle. The classical link test plugs a
//! finite sample of Y into the cone and runs the quadratic midpoint
//! inequality there: a failure certifies that Y is not a curvature-one
//! space, because cones over such spaces satisfy the inequality.

use crate::error::{Error, Result};
use crate::model_spaces::{law_of_cosines_side, Kappa};
use crate::report::{cn_report, CatReport, DistanceOracle};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A finite metric space given by an explicit distance matrix, validated
/// for symmetry, vanishing diagonal, and the triangle inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyInput("metric space"));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(n, dist.len()));
        }
        let scale: f64 = dist
            .iter()
            .flatten()
            .fold(0.0f64, |m, &d| m.max(d.abs()));
        let tol = 1e-9 * (1.0 + scale);
        for i in 0..n {
            if dist[i][i].abs() > tol {
                return Err(Error::Domain(format!(
                    "nonzero self-distance {} at {}",
                    dist[i][i], labels[i]
                )));
            }
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::Domain(format!(
                        "distance {}..{} is {d}",
                        labels[i], labels[j]
                    )));
                }
                if (d - dist[j][i]).abs() > tol {
                    return Err(Error::Domain(format!(
                        "asymmetric distances between {} and {}",
                        labels[i], labels[j]
                    )));
                }
                if i != j && d <= tol && i < j {
                    return Err(Error::Domain(format!(
                        "distinct points {} and {} at distance {d}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + tol {
                        return Err(Error::MetricViolation {
                            p: labels[i].clone(),
                            q: labels[j].clone(),
                            r: labels[k].clone(),
                            detail: format!(
                                "d(p,r) = {} exceeds d(p,q) + d(q,r) = {}",
                                dist[i][k],
                                dist[i][j] + dist[j][k]
                            ),
                        });
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// `samples` evenly spaced points on a circle of the given
    /// circumference, with arc-length distances.
    pub fn circle(circumference: f64, samples: usize) -> Result<Self> {
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(Error::Domain(format!(
                "circumference must be positive, got {circumference}"
            )));
        }
        if samples < 3 {
            return Err(Error::Domain("a circle needs at least 3 samples".into()));
        }
        let labels = (0..samples).map(|i| format!("y{i}")).collect();
        let step = circumference / samples as f64;
        let dist = (0..samples)
            .map(|i| {
                (0..samples)
                    .map(|j| {
                        let gap = i.abs_diff(j);
                        let gap = gap.min(samples - gap);
                        gap as f64 * step
                    })
                    .collect()
            })
            .collect();
        FiniteMetricSpace::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }
}

/// Distance in the curvature-`kappa` cone between points at radii `t1` and
/// `t2` whose directions are `base_distance` apart in the base space. The
/// enclosed angle is the base distance truncated at pi. For `kappa > 0`
/// radii may not exceed half the model diameter.
pub fn cone_distance(kappa: Kappa, t1: f64, t2: f64, base_distance: f64) -> Result<f64> {
    for t in [t1, t2] {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("cone radius {t} must be >= 0")));
        }
    }
    if !(base_distance.is_finite() && base_distance >= 0.0) {
        return Err(Error::Domain(format!(
            "base distance {base_distance} must be >= 0"
        )));
    }
    if kappa.is_spherical() {
        let cap = kappa.diameter() / 2.0;
        for t in [t1, t2] {
            if t > cap * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "cone radius {t} exceeds half the model diameter {cap}"
                )));
            }
        }
    }
    if t1 == 0.0 || t2 == 0.0 {
        return Ok(t1 + t2);
    }
    law_of_cosines_side(kappa, t1, t2, base_distance.min(PI))
}

/// A point of a finite cone: the apex, or a direction at positive radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConePoint {
    Apex,
    At { base: usize, radius: f64 },
}

/// Finite subset of a cone: the apex together with every sampled direction
/// at every radius in a fixed list.
#[derive(Debug, Clone)]
pub struct ConeSpace {
    kappa: Kappa,
    base: FiniteMetricSpace,
    points: Vec<ConePoint>,
    /// Looseness allowed when hunting midpoints among the finite samples.
    mid_tol: f64,
}

impl ConeSpace {
    pub fn new(
        kappa: Kappa,
        base: FiniteMetricSpace,
        radii: &[f64],
        mid_tol: f64,
    ) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyInput("radius list"));
        }
        let mut radii = radii.to_vec();
        for &r in &radii {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Domain(format!("cone radius {r} must be > 0")));
            }
            if kappa.is_spherical() && r > kappa.diameter() / 2.0 {
                return Err(Error::Domain(format!(
                    "cone radius {r} exceeds half the model diameter {}",
                    kappa.diameter() / 2.0
                )));
            }
        }
        if !(mid_tol.is_finite() && mid_tol >= 0.0) {
            return Err(Error::Domain(format!("midpoint tolerance {mid_tol} invalid")));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut points = vec![ConePoint::Apex];
        for base_idx in 0..base.len() {
            for &radius in &radii {
                points.push(ConePoint::At { base: base_idx, radius });
            }
        }
        Ok(ConeSpace { kappa, base, points, mid_tol })
    }

    pub fn points(&self) -> &[ConePoint] {
        &self.points
    }

    pub fn base(&self) -> &FiniteMetricSpace {
        &self.base
    }

    pub fn distance(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        let (t1, t2, d) = match (*a, *b) {
            (ConePoint::Apex, ConePoint::Apex) => (0.0, 0.0, 0.0),
            (ConePoint::Apex, ConePoint::At { radius, .. })
            | (ConePoint::At { radius, .. }, ConePoint::Apex) => (radius, 0.0, 0.0),
            (ConePoint::At { base: y1, radius: r1 }, ConePoint::At { base: y2, radius: r2 }) => {
                (r1, r2, self.base.distance(y1, y2))
            }
        };
        cone_distance(self.kappa, t1, t2, d)
            .expect("cone points are validated at construction")
    }
}

impl DistanceOracle for ConeSpace {
    type Point = ConePoint;

    fn distance(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        ConeSpace::distance(self, a, b)
    }

    fn midpoints(&self, a: &ConePoint, b: &ConePoint) -> Vec<ConePoint> {
        let h = self.distance(a, b) / 2.0;
        self.points
            .iter()
            .copied()
            .filter(|m| {
                (self.distance(a, m) - h).abs() <= self.mid_tol
                    && (self.distance(b, m) - h).abs() <= self.mid_tol
            })
            .collect()
    }

    fn label(&self, p: &ConePoint) -> String {
        match *p {
            ConePoint::Apex => "apex".to_string(),
            ConePoint::At { base, radius } => {
                format!("{}@{:.6}", self.base.label(base), radius)
            }
        }
    }
}

/// Build the curvature-`kappa` cone over a finite base sample and run the
/// quadratic midpoint inequality on it. Midpoints are sought among the
/// sampled cone points, allowing `mid_tol` slack in the defining equations;
/// pairs with no sampled midpoint are skipped.
pub fn berestovskii_probe(
    kappa: Kappa,
    base: &FiniteMetricSpace,
    radii: &[f64],
    mid_tol: f64,
    tol: f64,
) -> Result<CatReport> {
    let cone = ConeSpace::new(kappa, base.clone(), radii, mid_tol)?;
    Ok(cn_report(&cone, cone.points(), tol))
}
