//! Constant-curvature model spaces and comparison constructions.
//!
//! For a curvature parameter k the model space is Euclidean space (k = 0),
//! the round sphere rescaled by 1/sqrt(k) (k > 0), or the hyperboloid model
//! rescaled by 1/sqrt(-k) (k < 0). Spherical points are stored as unit
//! vectors in R^(n+1); hyperbolic points as vectors with
//! x_(n+1)^2 - sum x_i^2 = 1 and x_(n+1) > 0, independent of k, with the
//! metric scaled at evaluation time.
//!
//! The planar (n = 2) cases carry the comparison-triangle machinery: a
//! triangle with prescribed side lengths is placed deterministically with
//! its first vertex at the canonical basepoint, its second along the first
//! coordinate direction, and its third in the closed upper half-plane.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Inverse trig arguments may drift past their domain by at most this much
/// before we refuse to clamp and report a domain violation instead.
pub const CLAMP_TOL: f64 = 1e-12;

/// Curvature parameter. Finite by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kappa(f64);

impl Kappa {
    pub const FLAT: Kappa = Kappa(0.0);

    pub fn new(value: f64) -> Result<Kappa> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {value}")));
        }
        Ok(Kappa(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_flat(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_spherical(self) -> bool {
        self.0 > 0.0
    }

    pub fn is_hyperbolic(self) -> bool {
        self.0 < 0.0
    }

    /// Diameter of the model space: pi/sqrt(k) for k > 0, infinite otherwise.
    pub fn diameter(self) -> f64 {
        if self.0 > 0.0 {
            PI / self.0.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// sqrt(|k|); the metric scale factor for the curved regimes.
    fn scale(self) -> f64 {
        self.0.abs().sqrt()
    }
}

/// Diameter of the model space of curvature `kappa`.
pub fn diameter(kappa: Kappa) -> f64 {
    kappa.diameter()
}

fn clamped_acos(x: f64) -> Result<f64> {
    if x > 1.0 + CLAMP_TOL || x < -1.0 - CLAMP_TOL {
        return Err(Error::Domain(format!("acos argument {x} out of [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

fn clamped_acosh(x: f64) -> Result<f64> {
    if x < 1.0 - CLAMP_TOL {
        return Err(Error::Domain(format!("acosh argument {x} below 1")));
    }
    Ok(x.max(1.0).acosh())
}

/// A point of a model space, tagged with its curvature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    kappa: Kappa,
    coords: Vec<f64>,
}

impl ModelPoint {
    /// Validates the representation constraint for the curvature regime:
    /// spherical coordinates must be a unit vector, hyperbolic ones must lie
    /// on the upper hyperboloid sheet. Tolerance 1e-8 on the residual.
    pub fn new(kappa: Kappa, coords: Vec<f64>) -> Result<ModelPoint> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("coordinates must be nonempty and finite".into()));
        }
        const RES_TOL: f64 = 1e-8;
        if kappa.is_spherical() {
            let norm2: f64 = coords.iter().map(|c| c * c).sum();
            let residual = (norm2 - 1.0).abs();
            if residual > RES_TOL {
                return Err(Error::OffManifold { space: "sphere", residual });
            }
        } else if kappa.is_hyperbolic() {
            let n = coords.len() - 1;
            let space: f64 = coords[..n].iter().map(|c| c * c).sum();
            let form = coords[n] * coords[n] - space;
            let residual = (form - 1.0).abs();
            if residual > RES_TOL || coords[n] <= 0.0 {
                return Err(Error::OffManifold { space: "hyperboloid", residual });
            }
        }
        Ok(ModelPoint { kappa, coords })
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Intrinsic dimension: coordinate count for the flat regime, one less
    /// for the embedded sphere and hyperboloid.
    pub fn dim(&self) -> usize {
        if self.kappa.is_flat() {
            self.coords.len()
        } else {
            self.coords.len() - 1
        }
    }
}

fn check_pair(p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.kappa != q.kappa {
        return Err(Error::KappaMismatch(p.kappa.value(), q.kappa.value()));
    }
    if p.coords.len() != q.coords.len() {
        return Err(Error::DimensionMismatch(p.coords.len(), q.coords.len()));
    }
    Ok(())
}

/// Geodesic distance between two points of the same model space.
pub fn distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    check_pair(p, q)?;
    let k = p.kappa;
    if k.is_flat() {
        let d2: f64 = p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(d2.sqrt())
    } else if k.is_spherical() {
        let dot: f64 = p.coords.iter().zip(&q.coords).map(|(a, b)| a * b).sum();
        Ok(clamped_acos(dot)? / k.scale())
    } else {
        let n = p.coords.len() - 1;
        let space: f64 = p.coords[..n]
            .iter()
            .zip(&q.coords[..n])
            .map(|(a, b)| a * b)
            .sum();
        let form = p.coords[n] * q.coords[n] - space;
        Ok(clamped_acosh(form)? / k.scale())
    }
}

/// Side lengths of a triangle, each at most the sum of the other two
/// (up to a 1e-12 slack absorbed at construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSides {
    pub fn new(a: f64, b: f64, c: f64) -> Result<TriangleSides> {
        for s in [a, b, c] {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::Domain(format!("side length {s} must be finite and >= 0")));
            }
        }
        let slack = CLAMP_TOL * (1.0 + a + b + c);
        if a > b + c + slack || b > a + c + slack || c > a + b + slack {
            return Err(Error::Domain(format!(
                "triangle inequality fails for sides ({a}, {b}, {c})"
            )));
        }
        Ok(TriangleSides { a, b, c })
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }
}

fn check_spherical_sides(kappa: Kappa, sides: &[f64]) -> Result<()> {
    if kappa.is_spherical() {
        let dk = kappa.diameter();
        for &s in sides {
            if s >= dk {
                return Err(Error::Domain(format!(
                    "side {s} reaches the model-space diameter {dk}"
                )));
            }
        }
    }
    Ok(())
}

/// Side opposite the angle `gamma` enclosed by sides `a` and `b`.
///
/// Uses the standard law of cosines in each regime:
///   k = 0:  c^2 = a^2 + b^2 - 2ab cos(gamma)
///   k > 0:  cos(sc) = cos(sa)cos(sb) + sin(sa)sin(sb)cos(gamma), s = sqrt(k)
///   k < 0:  cosh(sc) = cosh(sa)cosh(sb) - sinh(sa)sinh(sb)cos(gamma), s = sqrt(-k)
pub fn law_of_cosines_side(kappa: Kappa, a: f64, b: f64, gamma: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("sides must be positive, got ({a}, {b})")));
    }
    if !(0.0..=PI).contains(&gamma) {
        return Err(Error::Domain(format!("angle {gamma} out of [0, pi]")));
    }
    check_spherical_sides(kappa, &[a, b])?;
    if kappa.is_flat() {
        let c2 = a * a + b * b - 2.0 * a * b * gamma.cos();
        Ok(c2.max(0.0).sqrt())
    } else if kappa.is_spherical() {
        let s = kappa.scale();
        let (sa, sb) = (s * a, s * b);
        let cos_sc = sa.cos() * sb.cos() + sa.sin() * sb.sin() * gamma.cos();
        Ok(clamped_acos(cos_sc)? / s)
    } else {
        let s = kappa.scale();
        let (sa, sb) = (s * a, s * b);
        let cosh_sc = sa.cosh() * sb.cosh() - sa.sinh() * sb.sinh() * gamma.cos();
        Ok(clamped_acosh(cosh_sc)? / s)
    }
}

/// Angle opposite side `c`, given all three sides. Requires `a, b > 0`; for
/// `kappa > 0` the perimeter must stay below twice the diameter.
pub fn law_of_cosines_angle(kappa: Kappa, sides: &TriangleSides) -> Result<f64> {
    let TriangleSides { a, b, c } = *sides;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "angle solve needs positive adjacent sides, got ({a}, {b})"
        )));
    }
    check_spherical_sides(kappa, &[a, b, c])?;
    if kappa.is_spherical() && sides.perimeter() >= 2.0 * kappa.diameter() {
        return Err(Error::Domain(format!(
            "perimeter {} reaches twice the diameter",
            sides.perimeter()
        )));
    }
    let cos_gamma = if kappa.is_flat() {
        (a * a + b * b - c * c) / (2.0 * a * b)
    } else if kappa.is_spherical() {
        let s = kappa.scale();
        let (sa, sb, sc) = (s * a, s * b, s * c);
        (sc.cos() - sa.cos() * sb.cos()) / (sa.sin() * sb.sin())
    } else {
        let s = kappa.scale();
        let (sa, sb, sc) = (s * a, s * b, s * c);
        (sa.cosh() * sb.cosh() - sc.cosh()) / (sa.sinh() * sb.sinh())
    };
    clamped_acos(cos_gamma)
}

/// Canonical basepoint of the planar model space.
fn base_point(kappa: Kappa) -> ModelPoint {
    if kappa.is_flat() {
        ModelPoint { kappa, coords: vec![0.0, 0.0] }
    } else {
        ModelPoint { kappa, coords: vec![0.0, 0.0, 1.0] }
    }
}

/// Point at polar radius `r` and angle `phi` from the basepoint, measured
/// from the first coordinate direction.
fn polar_point(kappa: Kappa, r: f64, phi: f64) -> ModelPoint {
    if kappa.is_flat() {
        ModelPoint { kappa, coords: vec![r * phi.cos(), r * phi.sin()] }
    } else if kappa.is_spherical() {
        let t = r * kappa.scale();
        ModelPoint {
            kappa,
            coords: vec![t.sin() * phi.cos(), t.sin() * phi.sin(), t.cos()],
        }
    } else {
        let t = r * kappa.scale();
        ModelPoint {
            kappa,
            coords: vec![t.sinh() * phi.cos(), t.sinh() * phi.sin(), t.cosh()],
        }
    }
}

/// Comparison triangle in the planar model space of curvature `kappa`.
///
/// Returns `[p, q, r]` with d(p,q) = a, d(p,r) = b, d(q,r) = c. Placement is
/// deterministic: `p` at the basepoint, `q` along the first coordinate
/// direction, `r` in the closed upper half-plane. For `kappa > 0` the
/// perimeter must stay below twice the diameter.
pub fn comparison_triangle(kappa: Kappa, sides: &TriangleSides) -> Result<[ModelPoint; 3]> {
    let TriangleSides { a, b, c } = *sides;
    check_spherical_sides(kappa, &[a, b, c])?;
    if kappa.is_spherical() && sides.perimeter() >= 2.0 * kappa.diameter() {
        return Err(Error::Domain(format!(
            "perimeter {} reaches twice the diameter",
            sides.perimeter()
        )));
    }
    let p = base_point(kappa);
    if a == 0.0 && b == 0.0 {
        return Ok([p.clone(), p.clone(), p]);
    }
    if a == 0.0 {
        let r = polar_point(kappa, b, 0.0);
        return Ok([p.clone(), p, r]);
    }
    if b == 0.0 {
        let q = polar_point(kappa, a, 0.0);
        return Ok([p.clone(), q, p]);
    }
    let gamma = law_of_cosines_angle(kappa, sides)?;
    let q = polar_point(kappa, a, 0.0);
    let r = polar_point(kappa, b, gamma);
    Ok([p, q, r])
}

/// Point at arclength `s` from `x` on the unique geodesic `[x, y]`.
/// Spherical antipodes (where the geodesic is not unique) are rejected.
pub fn geodesic_point(x: &ModelPoint, y: &ModelPoint, s: f64) -> Result<ModelPoint> {
    check_pair(x, y)?;
    let len = distance(x, y)?;
    let slack = CLAMP_TOL * (1.0 + len);
    if s < -slack || s > len + slack {
        return Err(Error::Domain(format!(
            "arclength {s} out of [0, {len}] on the segment"
        )));
    }
    let s = s.clamp(0.0, len);
    if len == 0.0 {
        return Ok(x.clone());
    }
    let k = x.kappa;
    if k.is_flat() {
        let t = s / len;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a + t * (b - a))
            .collect();
        return Ok(ModelPoint { kappa: k, coords });
    }
    let scale = k.scale();
    let theta = len * scale;
    let shat = s * scale;
    if k.is_spherical() {
        let denom = theta.sin();
        if denom.abs() < 1e-15 {
            return Err(Error::Domain("geodesic between antipodes is not unique".into()));
        }
        let (cu, cv) = ((theta - shat).sin() / denom, shat.sin() / denom);
        let mut coords: Vec<f64> = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| cu * a + cv * b)
            .collect();
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        for c in &mut coords {
            *c /= norm;
        }
        Ok(ModelPoint { kappa: k, coords })
    } else {
        let denom = theta.sinh();
        let (cu, cv) = ((theta - shat).sinh() / denom, shat.sinh() / denom);
        let mut coords: Vec<f64> = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| cu * a + cv * b)
            .collect();
        let n = coords.len() - 1;
        let space: f64 = coords[..n].iter().map(|c| c * c).sum();
        let form = coords[n] * coords[n] - space;
        let norm = form.max(f64::MIN_POSITIVE).sqrt();
        for c in &mut coords {
            *c /= norm;
        }
        Ok(ModelPoint { kappa: k, coords })
    }
}

/// Comparison point: the point at arclength `s` from `tri[side.0]` on the
/// triangle side toward `tri[side.1]`.
pub fn comparison_point(
    tri: &[ModelPoint; 3],
    side: (usize, usize),
    s: f64,
) -> Result<ModelPoint> {
    let (i, j) = side;
    if i > 2 || j > 2 || i == j {
        return Err(Error::Domain(format!("invalid side index pair ({i}, {j})")));
    }
    geodesic_point(&tri[i], &tri[j], s)
}
