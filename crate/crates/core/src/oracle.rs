//! Independent correctness oracle: each cell rebuilt naively by clipping
//! the world polygon against every bisector half-plane, with per-edge
//! provenance. Deliberately kept free of the endpoint/cell machinery so
//! failures localize.

use std::collections::BTreeSet;

use crate::cell::Cell;
use crate::error::BuildError;
use crate::geometry::{bisector, LineSource, Point2};
use crate::world::World;

/// Vertex-set matching tolerance for oracle comparisons. Looser than the
/// build tolerance because the two constructions accumulate error
/// differently.
pub const MATCH_TOL: f64 = 1e-7;

/// A cell as the oracle sees it: a ccw polygon whose edge `i` runs from
/// `vertices[i]` to `vertices[i+1]` and lies on `edge_sources[i]`.
#[derive(Debug, Clone)]
pub struct OracleCell {
    pub site: usize,
    pub vertices: Vec<Point2>,
    pub edge_sources: Vec<LineSource>,
}

impl OracleCell {
    pub fn edge_set(&self) -> BTreeSet<LineSource> {
        self.edge_sources.iter().copied().collect()
    }

    /// Lines through vertex `i`: the incoming and outgoing edge sources.
    pub fn vertex_lines(&self, i: usize) -> (LineSource, LineSource) {
        let n = self.vertices.len();
        (self.edge_sources[(i + n - 1) % n], self.edge_sources[i])
    }
}

/// Half-plane clip keeping the side where `signed_dist >= 0`.
fn clip(
    vertices: &mut Vec<Point2>,
    sources: &mut Vec<LineSource>,
    dist: impl Fn(Point2) -> f64,
    new_source: LineSource,
    eps: f64,
) {
    let n = vertices.len();
    let mut out_v = Vec::with_capacity(n + 1);
    let mut out_s = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = vertices[i];
        let next = vertices[(i + 1) % n];
        let sc = dist(cur);
        let sn = dist(next);
        let cur_in = sc >= -eps;
        let next_in = sn >= -eps;
        if cur_in {
            out_v.push(cur);
            out_s.push(sources[i]);
            if !next_in {
                let t = sc / (sc - sn);
                out_v.push(cur + (next - cur) * t);
                out_s.push(new_source);
            }
        } else if next_in {
            let t = sc / (sc - sn);
            out_v.push(cur + (next - cur) * t);
            out_s.push(sources[i]);
        }
    }
    *vertices = out_v;
    *sources = out_s;
}

/// Removes zero-length edges and merges runs of edges with the same
/// provenance (degenerate contacts produced by near-vertex clips).
fn tidy(vertices: &mut Vec<Point2>, sources: &mut Vec<LineSource>, eps: f64) {
    loop {
        let n = vertices.len();
        if n < 3 {
            return;
        }
        let mut removed = false;
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].dist(vertices[j]) < eps {
                // drop vertex i and its degenerate outgoing edge
                vertices.remove(i);
                sources.remove(i);
                removed = true;
                break;
            }
            if sources[i] == sources[j] {
                // collinear split on one clip line: drop the middle vertex
                vertices.remove(j);
                sources.remove(j);
                removed = true;
                break;
            }
        }
        if !removed {
            return;
        }
    }
}

/// Builds cell `k` by intersecting the world polygon with the bisector
/// half-plane of every other site.
pub fn naive_cell(k: usize, sites: &[Point2], world: &World) -> Result<OracleCell, BuildError> {
    let p = sites[k];
    let mut vertices: Vec<Point2> = world.vertices().to_vec();
    let mut sources: Vec<LineSource> = (0..vertices.len()).map(LineSource::Boundary).collect();
    let (min, max) = world.bounding_box();
    let scale = 1.0_f64
        .max(max.x - min.x)
        .max(max.y - min.y)
        .max(min.x.abs())
        .max(max.x.abs())
        .max(min.y.abs())
        .max(max.y.abs());
    let eps = 1e-12 * scale;
    for (j, &a) in sites.iter().enumerate() {
        if j == k {
            continue;
        }
        let line = bisector(p, a, j).map_err(BuildError::Geometry)?;
        clip(
            &mut vertices,
            &mut sources,
            |x| line.signed_dist(x),
            line.source,
            eps,
        );
        if vertices.len() < 3 {
            return Err(BuildError::InternalLogic {
                cell: k,
                detail: "oracle polygon collapsed".into(),
            });
        }
    }
    tidy(&mut vertices, &mut sources, 1e-9 * scale);
    Ok(OracleCell {
        site: k,
        vertices,
        edge_sources: sources,
    })
}

/// Differences found when comparing an algorithm cell to its oracle cell.
#[derive(Debug, Clone, Default)]
pub struct MatchReport {
    pub missing_vertices: Vec<Point2>,
    pub extra_vertices: Vec<Point2>,
    pub missing_edges: Vec<LineSource>,
    pub extra_edges: Vec<LineSource>,
}

impl MatchReport {
    pub fn pass(&self) -> bool {
        self.missing_vertices.is_empty()
            && self.extra_vertices.is_empty()
            && self.missing_edges.is_empty()
            && self.extra_edges.is_empty()
    }
}

impl std::fmt::Display for MatchReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass() {
            return write!(f, "match");
        }
        write!(
            f,
            "mismatch: {} missing / {} extra vertices, {} missing / {} extra edges",
            self.missing_vertices.len(),
            self.extra_vertices.len(),
            self.missing_edges.len(),
            self.extra_edges.len()
        )
    }
}

/// Compares vertex sets (mutual nearest pairing at `tol`) and
/// edge-provenance sets.
pub fn compare(cell: &Cell, oc: &OracleCell, tol: f64) -> MatchReport {
    assert_eq!(cell.site, oc.site, "comparing cells of different sites");
    let mut report = MatchReport::default();

    let mut used = vec![false; cell.vertices.len()];
    for &ov in &oc.vertices {
        let best = cell
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|(_, a), (_, b)| a.coords.dist(ov).total_cmp(&b.coords.dist(ov)));
        match best {
            Some((i, v)) if v.coords.dist(ov) <= tol => used[i] = true,
            _ => report.missing_vertices.push(ov),
        }
    }
    for (i, v) in cell.vertices.iter().enumerate() {
        if !used[i] {
            report.extra_vertices.push(v.coords);
        }
    }

    let cell_edges = cell.edge_set();
    let oracle_edges = oc.edge_set();
    report.missing_edges = oracle_edges.difference(&cell_edges).copied().collect();
    report.extra_edges = cell_edges.difference(&oracle_edges).copied().collect();
    report
}
