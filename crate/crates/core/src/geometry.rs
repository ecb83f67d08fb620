//! Floating-point geometric primitives: points, unit directions, oriented
//! lines with provenance, and the 2x2 cone system used to intersect the two
//! lines carrying a subface's endpoints.
//!
//! All comparisons are scale-aware: the global relative tolerance is
//! multiplied by the magnitudes involved.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Global relative tolerance for geometric comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite(), "non-finite point");
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point2) -> f64 {
        (*self - other).norm()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2 { x: v[0], y: v[1] }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// A displacement vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(&self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalize(&self) -> Result<UnitVec2, GeometryError> {
        UnitVec2::new(self.x, self.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Vec2;
    fn sub(self, rhs: Point2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub<Vec2> for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Vec2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A unit direction vector. Construction normalizes and rejects
/// (near-)zero inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec2 {
    x: f64,
    y: f64,
}

/// Quantization step for direction keys: directions closer than this are
/// treated as the same ray when memoizing endpoints.
const DIR_QUANTUM: f64 = 1e-12;

impl UnitVec2 {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        let n = x.hypot(y);
        if !(n.is_finite() && n > 0.0) {
            return Err(GeometryError::DegenerateInput("zero-length direction"));
        }
        Ok(UnitVec2 { x: x / n, y: y / n })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn as_vec(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn neg(&self) -> UnitVec2 {
        UnitVec2 {
            x: -self.x,
            y: -self.y,
        }
    }

    /// Key for endpoint memoization: two directions within ~1e-12 of each
    /// other share one ray shot.
    pub fn quantized(&self) -> (i64, i64) {
        (
            (self.x / DIR_QUANTUM).round() as i64,
            (self.y / DIR_QUANTUM).round() as i64,
        )
    }
}

/// What induced a line: the perpendicular bisector with another site, or a
/// facet of the world boundary.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum LineSource {
    Boundary(usize),
    Bisector(usize),
}

/// An oriented line `{x : <N, x> = c}` with unit normal and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub normal: UnitVec2,
    pub offset: f64,
    pub source: LineSource,
}

impl Line {
    pub fn new(normal: UnitVec2, offset: f64, source: LineSource) -> Self {
        Line {
            normal,
            offset,
            source,
        }
    }

    /// Signed distance of `x` from the line, positive on the normal side.
    pub fn signed_dist(&self, x: Point2) -> f64 {
        self.normal.as_vec().dot(x - Point2::new(0.0, 0.0)) - self.offset
    }

    /// A direction vector of the line (normal rotated by 90 degrees).
    pub fn direction(&self) -> UnitVec2 {
        UnitVec2 {
            x: -self.normal.y(),
            y: self.normal.x(),
        }
    }

    /// Unoriented coincidence test: same normal up to sign, same offset
    /// within tolerance.
    pub fn coincides_with(&self, other: &Line, tol: f64) -> bool {
        let cross = self.normal.as_vec().cross(other.normal.as_vec());
        if cross.abs() > tol {
            return false;
        }
        let scale = 1.0_f64.max(self.offset.abs()).max(other.offset.abs());
        if self.normal.as_vec().dot(other.normal.as_vec()) > 0.0 {
            (self.offset - other.offset).abs() <= tol * scale
        } else {
            (self.offset + other.offset).abs() <= tol * scale
        }
    }
}

/// Outcome of intersecting the two lines carrying a subface's endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeSolution {
    /// The two endpoints lie on one line; no vertex in this cone.
    SameLine,
    /// Distinct parallel lines; `direction` is their common direction.
    ParallelLines { direction: UnitVec2 },
    /// Regular system: `point = p + lambda.0 * T1 + lambda.1 * T2` lies on
    /// both lines.
    Unique { lambda: (f64, f64), point: Point2 },
}

/// Perpendicular bisector between `p` and the site `a` (index `a_index`).
/// The normal points from `a` toward `p`, so `<N, p> > c`.
pub fn bisector(p: Point2, a: Point2, a_index: usize) -> Result<Line, GeometryError> {
    let diff = p - a;
    let scale = 1.0_f64.max(p.x.abs()).max(p.y.abs()).max(a.x.abs()).max(a.y.abs());
    if diff.norm() <= DEFAULT_TOL * scale {
        return Err(GeometryError::DegenerateInput("coincident bisector points"));
    }
    let normal = diff.normalize()?;
    let mid = Point2::new((p.x + a.x) / 2.0, (p.y + a.y) / 2.0);
    let offset = normal.as_vec().dot(mid - Point2::new(0.0, 0.0));
    Ok(Line::new(normal, offset, LineSource::Bisector(a_index)))
}

/// Solves the 2x2 system `B lambda = H` with `B_ij = <N_i, T_j>` and
/// `H_i = <N_i, T_i>`, classifying the intersection of the two lines
/// restricted to the cone spanned by `t1`, `t2` from `p`.
pub fn solve_cone_system(
    p: Point2,
    t1: Vec2,
    t2: Vec2,
    l1: &Line,
    l2: &Line,
    tol: f64,
) -> Result<ConeSolution, GeometryError> {
    let (n1, n2) = (l1.normal.as_vec(), l2.normal.as_vec());
    let (s1, s2) = (t1.norm(), t2.norm());
    if s1 <= 0.0 || s2 <= 0.0 {
        return Err(GeometryError::DegenerateInput("zero-length endpoint vector"));
    }
    let b11 = n1.dot(t1);
    let b12 = n1.dot(t2);
    let b21 = n2.dot(t1);
    let b22 = n2.dot(t2);
    let h1 = b11;
    let h2 = b22;
    let det = b11 * b22 - b12 * b21;
    // B = N * T as row/column matrices, so |det B| scales with |T1||T2|.
    if det.abs() <= tol * s1 * s2 {
        if l1.coincides_with(l2, tol) {
            return Ok(ConeSolution::SameLine);
        }
        return Ok(ConeSolution::ParallelLines {
            direction: l1.direction(),
        });
    }
    let lambda1 = (h1 * b22 - b12 * h2) / det;
    let lambda2 = (b11 * h2 - h1 * b21) / det;
    let point = p + t1 * lambda1 + t2 * lambda2;
    Ok(ConeSolution::Unique {
        lambda: (lambda1, lambda2),
        point,
    })
}

/// First nonnegative parameter `t` with `p + t*theta` on `l`, if any.
pub fn ray_line_intersection(p: Point2, theta: UnitVec2, l: &Line) -> Option<(f64, Point2)> {
    let denom = l.normal.as_vec().dot(theta.as_vec());
    if denom.abs() < 1e-15 {
        return None; // parallel
    }
    let mut t = -l.signed_dist(p) / denom;
    if t < 0.0 {
        // Snap tiny negatives caused by p sitting on the line.
        let scale = 1.0_f64.max(p.x.abs()).max(p.y.abs());
        if t > -DEFAULT_TOL * scale {
            t = 0.0;
        } else {
            return None; // points away
        }
    }
    Some((t, p + theta.as_vec() * t))
}

/// Whether `phi` lies in the (nonnegative) cone spanned by `theta1`,
/// `theta2`, together with the expansion coefficients.
pub fn direction_in_cone(
    theta1: UnitVec2,
    theta2: UnitVec2,
    phi: UnitVec2,
    tol: f64,
) -> Result<(bool, (f64, f64)), GeometryError> {
    let det = theta1.as_vec().cross(theta2.as_vec());
    if det.abs() <= tol {
        return Err(GeometryError::DegenerateCone);
    }
    let a1 = phi.as_vec().cross(theta2.as_vec()) / det;
    let a2 = theta1.as_vec().cross(phi.as_vec()) / det;
    Ok((a1 >= -tol && a2 >= -tol, (a1, a2)))
}
