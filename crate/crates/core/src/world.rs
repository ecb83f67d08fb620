//! The compact convex polygonal world: boundary facets as oriented lines
//! (normals pointing inward), containment, and ray exit points.

use serde::{Deserialize, Serialize};

use crate::error::{ValidationIssue, ValidationReport, WorldError};
use crate::geometry::{Line, LineSource, Point2, UnitVec2};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "WorldRepr", into = "WorldRepr")]
pub struct World {
    vertices: Vec<Point2>,
    boundary: Vec<Line>,
}

#[derive(Serialize, Deserialize)]
struct WorldRepr {
    vertices: Vec<Point2>,
}

impl TryFrom<WorldRepr> for World {
    type Error = WorldError;
    fn try_from(r: WorldRepr) -> Result<Self, WorldError> {
        World::new(r.vertices)
    }
}

impl From<World> for WorldRepr {
    fn from(w: World) -> Self {
        WorldRepr {
            vertices: w.vertices,
        }
    }
}

impl World {
    /// Builds a world from counterclockwise vertices. Facet `i` runs from
    /// vertex `i` to vertex `i+1`; its line normal points inward.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, WorldError> {
        if vertices.len() < 3 {
            return Err(WorldError::TooFewVertices);
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(WorldError::Degenerate);
        }
        let n = vertices.len();
        let mut area2 = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let cross = (b - a).cross(c - b);
            if cross < 0.0 {
                return Err(WorldError::NotConvexCcw);
            }
            area2 += a.x * b.y - b.x * a.y;
        }
        if area2 <= 0.0 {
            return Err(WorldError::Degenerate);
        }
        let mut boundary = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let edge = b - a;
            if edge.norm() == 0.0 {
                return Err(WorldError::Degenerate);
            }
            // left normal of a ccw edge points into the polygon
            let normal = UnitVec2::new(-edge.y, edge.x).map_err(|_| WorldError::Degenerate)?;
            let offset = normal.as_vec().dot(a - Point2::new(0.0, 0.0));
            boundary.push(Line::new(normal, offset, LineSource::Boundary(i)));
        }
        Ok(World { vertices, boundary })
    }

    /// Axis-aligned square `[min, max]^2`.
    pub fn square(min: f64, max: f64) -> Result<Self, WorldError> {
        World::new(vec![
            Point2::new(min, min),
            Point2::new(max, min),
            Point2::new(max, max),
            Point2::new(min, max),
        ])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn boundary_lines(&self) -> &[Line] {
        &self.boundary
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for v in &self.vertices {
            min.x = min.x.min(v.x);
            min.y = min.y.min(v.y);
            max.x = max.x.max(v.x);
            max.y = max.y.max(v.y);
        }
        (min, max)
    }

    /// Closed containment: true iff `x` is inside or on the boundary.
    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        self.boundary.iter().all(|l| {
            let scale = 1.0_f64.max(l.offset.abs());
            l.signed_dist(x) >= -tol * scale
        })
    }

    /// True iff `x` is strictly interior (distance > tol to every facet).
    pub fn is_interior(&self, x: Point2, tol: f64) -> bool {
        self.boundary.iter().all(|l| {
            let scale = 1.0_f64.max(l.offset.abs());
            l.signed_dist(x) > tol * scale
        })
    }

    /// Point where the ray `p + t*theta` leaves the world, with the facet
    /// line hit. Corner hits resolve to the lower facet id.
    pub fn ray_exit(
        &self,
        p: Point2,
        theta: UnitVec2,
        tol: f64,
    ) -> Result<(f64, Point2, Line), WorldError> {
        if !self.is_interior(p, tol) {
            return Err(WorldError::NotInterior(p));
        }
        let mut best: Option<(f64, &Line)> = None;
        for l in &self.boundary {
            let denom = l.normal.as_vec().dot(theta.as_vec());
            if denom >= 0.0 {
                continue; // ray does not exit through this facet
            }
            let t = -l.signed_dist(p) / denom;
            match best {
                None => best = Some((t, l)),
                Some((bt, _)) => {
                    // strict improvement only, so corner ties keep the
                    // lower facet id (iteration is in id order)
                    if t < bt - tol * 1.0_f64.max(bt) {
                        best = Some((t, l));
                    }
                }
            }
        }
        let (t, line) = best.ok_or(WorldError::NotInterior(p))?;
        Ok((t, p + theta.as_vec() * t, line.clone()))
    }

    /// Checks sites against this world: no duplicates, every site strictly
    /// interior. Re-checks convexity for good measure.
    pub fn validate(&self, sites: &[Point2], tol: f64) -> Result<(), ValidationReport> {
        let mut issues = Vec::new();
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            if (b - a).cross(c - b) < 0.0 {
                issues.push(ValidationIssue::NonConvexWorld);
                break;
            }
        }
        // duplicate detection via a sort-by-x sweep: O(n log n)
        let mut order: Vec<usize> = (0..sites.len()).collect();
        order.sort_by(|&a, &b| {
            sites[a]
                .x
                .total_cmp(&sites[b].x)
                .then(sites[a].y.total_cmp(&sites[b].y))
        });
        let dup_tol = |p: Point2, q: Point2| {
            let scale = 1.0_f64.max(p.x.abs()).max(p.y.abs());
            p.dist(q) <= tol * scale
        };
        for (pos, &i) in order.iter().enumerate() {
            for &j in order[pos + 1..].iter() {
                if sites[j].x - sites[i].x > tol * 1.0_f64.max(sites[i].x.abs()) {
                    break;
                }
                if dup_tol(sites[i], sites[j]) {
                    issues.push(ValidationIssue::DuplicateSites(i.min(j), i.max(j)));
                }
            }
        }
        for (k, &s) in sites.iter().enumerate() {
            if !s.is_finite() || !self.is_interior(s, tol) {
                issues.push(ValidationIssue::SiteNotInterior(k));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ValidationReport { issues })
        }
    }
}
