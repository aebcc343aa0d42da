//! Circumcenters of bounded sets and the fixed-point construction for
//! finite isometry groups.
//!
//! The Euclidean side computes minimum enclosing balls by Welzl's
//! algorithm with a seeded shuffle, then derives a common fixed point of a
//! finite group of isometries as the circumcenter of a saturated orbit.
//! The tree side locates the circumcenter of a finite subset of a metric
//! tree as the midpoint of a diametral pair.

use crate::error::{Error, Result};
use crate::metric_graph::{GraphPoint, MetricGraph};
use crate::util::solve_dense;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Closed ball, possibly degenerate (radius zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    /// Sentinel that contains nothing; the recursion grows it point by point.
    fn empty(dim: usize) -> Ball {
        Ball { center: vec![0.0; dim], radius: -1.0 }
    }

    fn contains(&self, p: &[f64]) -> bool {
        if self.radius < 0.0 {
            return false;
        }
        let d2: f64 = self
            .center
            .iter()
            .zip(p)
            .map(|(c, x)| (c - x) * (c - x))
            .sum();
        d2 <= self.radius * self.radius + 1e-10 * (1.0 + self.radius * self.radius)
    }
}

fn check_points(points: &[Vec<f64>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyInput("point set"))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Domain("points must have at least one coordinate".into()));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch(dim, p.len()));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
    }
    Ok(dim)
}

/// Smallest ball with every support point on its boundary. The support set
/// is affinely independent in exact arithmetic; if rounding sneaks in a
/// dependent point, the oldest support point is dropped and the ball
/// recomputed, which strictly shrinks the set and so terminates.
fn ball_of_support(points: &[Vec<f64>], support: &[usize], dim: usize) -> Ball {
    match support {
        [] => Ball::empty(dim),
        [single] => Ball { center: points[*single].clone(), radius: 0.0 },
        _ => {
            let p0 = &points[support[0]];
            let vs: Vec<Vec<f64>> = support[1..]
                .iter()
                .map(|&i| points[i].iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            let k = vs.len();
            let gram: Vec<Vec<f64>> = (0..k)
                .map(|i| (0..k).map(|j| 2.0 * dot(&vs[i], &vs[j])).collect())
                .collect();
            let rhs: Vec<f64> = (0..k).map(|i| dot(&vs[i], &vs[i])).collect();
            match solve_dense(gram, rhs) {
                Some(lambda) => {
                    let mut center = p0.clone();
                    for (l, v) in lambda.iter().zip(&vs) {
                        for (c, vi) in center.iter_mut().zip(v) {
                            *c += l * vi;
                        }
                    }
                    let radius = center
                        .iter()
                        .zip(p0)
                        .map(|(c, x)| (c - x) * (c - x))
                        .sum::<f64>()
                        .sqrt();
                    Ball { center, radius }
                }
                // Affinely dependent support: keep the newest point (it was
                // strictly outside) and retire the oldest.
                None => ball_of_support(points, &support[1..], dim),
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn welzl(
    points: &[Vec<f64>],
    order: &[usize],
    support: &mut Vec<usize>,
    dim: usize,
) -> Ball {
    if order.is_empty() || support.len() == dim + 1 {
        return ball_of_support(points, support, dim);
    }
    let p = order[0];
    let ball = welzl(points, &order[1..], support, dim);
    if ball.contains(&points[p]) {
        return ball;
    }
    support.push(p);
    let ball = welzl(points, &order[1..], support, dim);
    support.pop();
    ball
}

/// Minimum enclosing ball of a finite point set. The `seed` drives the
/// initial shuffle only; the ball itself is unique, so any seed returns the
/// same center and radius up to rounding.
pub fn min_enclosing_ball(points: &[Vec<f64>], seed: u64) -> Result<Ball> {
    let dim = check_points(points)?;
    // Exact duplicates add nothing and can degrade the support geometry.
    let mut seen = std::collections::HashSet::new();
    let mut order: Vec<usize> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let key: Vec<u64> = p.iter().map(|c| c.to_bits()).collect();
        if seen.insert(key) {
            order.push(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut support = Vec::with_capacity(dim + 1);
    let ball = welzl(points, &order, &mut support, dim);
    // Postcondition: everything is enclosed (minimality is the algorithm's
    // contract; enclosure we can and do verify).
    let tol = 1e-7 * (1.0 + ball.radius);
    for p in points {
        let d = dist(&ball.center, p);
        if d > ball.radius + tol {
            return Err(Error::Domain(format!(
                "enclosing-ball postcondition failed: point at distance {d} vs radius {}",
                ball.radius
            )));
        }
    }
    Ok(ball)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Affine isometry `x -> Ax + t` with `A` orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    linear: Vec<Vec<f64>>,
    translation: Vec<f64>,
}

impl Isometry {
    pub fn new(linear: Vec<Vec<f64>>, translation: Vec<f64>) -> Result<Isometry> {
        let dim = translation.len();
        if dim == 0 || linear.len() != dim || linear.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch(dim, linear.len()));
        }
        if linear
            .iter()
            .flatten()
            .chain(&translation)
            .any(|c| !c.is_finite())
        {
            return Err(Error::Domain("isometry entries must be finite".into()));
        }
        // A^T A = I within 1e-8, entrywise.
        for i in 0..dim {
            for j in 0..dim {
                let entry: f64 = (0..dim).map(|k| linear[k][i] * linear[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (entry - expect).abs() > 1e-8 {
                    return Err(Error::Domain(format!(
                        "linear part is not orthogonal: (A^T A)[{i}][{j}] = {entry}"
                    )));
                }
            }
        }
        Ok(Isometry { linear, translation })
    }

    pub fn identity(dim: usize) -> Isometry {
        let linear = (0..dim)
            .map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        Isometry { linear, translation: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| dot(row, x) + t)
            .collect()
    }
}

/// Result of the orbit/circumcenter construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOutcome {
    pub center: Vec<f64>,
    pub radius: f64,
    pub orbit_size: usize,
    /// Largest distance any generator moves the center; bounded by the
    /// postcondition tolerance.
    pub max_displacement: f64,
}

/// Tolerance under which two orbit points are identified.
const ORBIT_MERGE_TOL: f64 = 1e-8;
/// The computed circumcenter must be moved by each generator by no more
/// than this (scaled by 1 + |center|).
const FIXED_POINT_TOL: f64 = 1e-7;

/// Common fixed point of the group generated by `generators`, obtained as
/// the circumcenter of the saturated orbit of `start`. The orbit must close
/// up within `orbit_cap` points (it does exactly when the generated group
/// is finite, as for any bounded orbit of isometries).
pub fn fixed_point(
    generators: &[Isometry],
    start: &[f64],
    orbit_cap: usize,
    seed: u64,
) -> Result<FixedPointOutcome> {
    if generators.is_empty() {
        return Err(Error::EmptyInput("generator list"));
    }
    let dim = start.len();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch(dim, g.dim()));
        }
    }
    if start.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("start point must be finite".into()));
    }
    let mut orbit: Vec<Vec<f64>> = vec![start.to_vec()];
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        for g in generators {
            let image = g.apply(&orbit[idx].clone());
            if orbit.iter().any(|p| dist(p, &image) <= ORBIT_MERGE_TOL) {
                continue;
            }
            if orbit.len() == orbit_cap {
                return Err(Error::OrbitCap(orbit_cap));
            }
            orbit.push(image);
            frontier.push(orbit.len() - 1);
        }
    }
    let ball = min_enclosing_ball(&orbit, seed)?;
    let scale = 1.0 + ball.center.iter().map(|c| c * c).sum::<f64>().sqrt();
    let max_displacement = generators
        .iter()
        .map(|g| dist(&g.apply(&ball.center), &ball.center))
        .fold(0.0, f64::max);
    if max_displacement > FIXED_POINT_TOL * scale {
        return Err(Error::ClosureViolated(format!(
            "circumcenter moved by {max_displacement}, above tolerance {}",
            FIXED_POINT_TOL * scale
        )));
    }
    Ok(FixedPointOutcome {
        center: ball.center,
        radius: ball.radius,
        orbit_size: orbit.len(),
        max_displacement,
    })
}

/// Circumcenter of a finite subset of a metric tree: the midpoint of a
/// diametral pair, returned with the circumradius (half the diameter).
pub fn tree_circumcenter(
    graph: &MetricGraph,
    points: &[GraphPoint],
) -> Result<(GraphPoint, f64)> {
    if graph.edge_count() + 1 != graph.vertex_count() {
        return Err(Error::NotATree);
    }
    if points.is_empty() {
        return Err(Error::EmptyInput("point set"));
    }
    let mut best = (0usize, 0usize, 0.0f64);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = graph.distance(&points[i], &points[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i, j, diam) = best;
    if diam == 0.0 {
        return Ok((points[0], 0.0));
    }
    let geo = graph.geodesic(&points[i], &points[j])?;
    let center = graph.point_along(&geo, diam / 2.0)?;
    let radius = points
        .iter()
        .map(|p| graph.distance(&center, p))
        .fold(0.0, f64::max);
    // In a tree the diametral midpoint covers every point at half the
    // diameter; anything else indicates a broken metric.
    if radius > diam / 2.0 + 1e-9 * (1.0 + diam) {
        return Err(Error::MetricViolation {
            p: graph.label_point(&center),
            q: graph.label_point(&points[i]),
            r: graph.label_point(&points[j]),
            detail: format!("circumradius {radius} exceeds half the diameter {}", diam / 2.0),
        });
    }
    Ok((center, radius))
}
