//! Per-cell cone refinement: a LIFO worklist of simplex subfaces is
//! processed until empty, each subface either yielding a vertex, being
//! dropped, or splitting into two children along a freshly shot ray.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::endpoint::{nearest_conflict, shoot_ray, Endpoint, RayScratch};
use crate::error::BuildError;
use crate::geometry::{
    direction_in_cone, solve_cone_system, ConeSolution, LineSource, Point2, UnitVec2,
};
use crate::grid::BucketGrid;
use crate::world::World;

/// A search cone: the unordered pair of unit directions at its corners.
#[derive(Debug, Clone, Copy)]
pub struct Subface {
    pub theta1: UnitVec2,
    pub theta2: UnitVec2,
}

/// One vertex of a cell with the set of line provenances through it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    #[serde(rename = "xy")]
    pub coords: Point2,
    pub lines: BTreeSet<LineSource>,
}

/// A finished Voronoi cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub site: usize,
    pub vertices: Vec<VertexRecord>,
    /// Indices into `vertices`, sorted counterclockwise around the site.
    pub ccw: Vec<usize>,
}

impl Cell {
    /// Line provenances present among the vertex records.
    pub fn edge_set(&self) -> BTreeSet<LineSource> {
        self.vertices
            .iter()
            .flat_map(|v| v.lines.iter().copied())
            .collect()
    }

    /// True when any edge lies on the world boundary.
    pub fn touches_boundary(&self) -> bool {
        self.edge_set()
            .iter()
            .any(|s| matches!(s, LineSource::Boundary(_)))
    }
}

/// Counters recorded while building one cell.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    /// Distinct rays shot (memoized per direction).
    pub rays: u32,
    /// Maximum distance comparisons over all rays of the cell.
    pub r_k: u32,
    /// Edge count of the finished cell.
    pub e_k: u32,
    /// Subfaces processed (nodes of the refinement tree).
    pub subfaces: u32,
    /// Subfaces processed per initial simplex cone.
    #[serde(skip)]
    pub cone_subfaces: [u32; 3],
}

/// The three simplex directions and the initial subfaces spanning all of
/// direction space.
pub fn initial_simplex() -> ([UnitVec2; 3], [Subface; 3]) {
    let h = 3f64.sqrt() / 2.0;
    let psi1 = UnitVec2::new(h, -0.5).unwrap();
    let psi2 = UnitVec2::new(0.0, 1.0).unwrap();
    let psi3 = UnitVec2::new(-h, -0.5).unwrap();
    (
        [psi1, psi2, psi3],
        [
            Subface {
                theta1: psi1,
                theta2: psi2,
            },
            Subface {
                theta1: psi2,
                theta2: psi3,
            },
            Subface {
                theta1: psi1,
                theta2: psi3,
            },
        ],
    )
}

/// True iff `x` belongs to the (closed) cell of site `k`.
pub fn point_in_cell(
    x: Point2,
    k: usize,
    sites: &[Point2],
    world: &World,
    grid: &BucketGrid,
    tol: f64,
) -> bool {
    world.contains(x, tol) && nearest_conflict(x, k, sites, grid, tol).is_none()
}

/// Counterclockwise order of vertex indices around `p`, with the edge
/// adjacency check: consecutive vertices must share an inducing line.
pub fn sort_vertices_ccw(
    vertices: &[VertexRecord],
    p: Point2,
    cell_index: usize,
) -> Result<Vec<usize>, BuildError> {
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| {
        let va = vertices[a].coords - p;
        let vb = vertices[b].coords - p;
        va.y.atan2(va.x).total_cmp(&vb.y.atan2(vb.x)).then(a.cmp(&b))
    });
    if vertices.len() < 3 {
        return Err(BuildError::InconsistentCell {
            cell: cell_index,
            detail: format!("only {} vertices", vertices.len()),
        });
    }
    for w in 0..order.len() {
        let a = &vertices[order[w]];
        let b = &vertices[order[(w + 1) % order.len()]];
        let shared = a.lines.intersection(&b.lines).count();
        if shared == 0 {
            return Err(BuildError::InconsistentCell {
                cell: cell_index,
                detail: format!(
                    "consecutive vertices ({}, {}) share no inducing line",
                    order[w],
                    order[(w + 1) % order.len()]
                ),
            });
        }
    }
    Ok(order)
}

struct VertexPool {
    records: Vec<VertexRecord>,
    by_key: HashMap<(LineSource, LineSource), usize>,
}

impl VertexPool {
    fn new() -> Self {
        VertexPool {
            records: Vec::new(),
            by_key: HashMap::new(),
        }
    }

    fn insert(&mut self, coords: Point2, l1: LineSource, l2: LineSource, merge_eps: f64) {
        let key = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        if let Some(&i) = self.by_key.get(&key) {
            self.records[i].lines.insert(l1);
            self.records[i].lines.insert(l2);
            return;
        }
        // coordinate-proximity fallback: the same vertex may arrive via a
        // different line pair in degenerate configurations
        if let Some(i) = self
            .records
            .iter()
            .position(|r| r.coords.dist(coords) < merge_eps)
        {
            self.records[i].lines.insert(l1);
            self.records[i].lines.insert(l2);
            self.by_key.insert(key, i);
            return;
        }
        let mut lines = BTreeSet::new();
        lines.insert(l1);
        lines.insert(l2);
        self.records.push(VertexRecord { coords, lines });
        self.by_key.insert(key, self.records.len() - 1);
    }
}

/// Builds the cell of site `k` by cone refinement.
pub fn build_cell(
    k: usize,
    sites: &[Point2],
    world: &World,
    grid: &BucketGrid,
    tol: f64,
    scratch: &mut RayScratch,
) -> Result<(Cell, CellStats), BuildError> {
    let p = sites[k];
    let n = sites.len();
    let guard = 4 * n + 64;
    let internal = |detail: String| BuildError::InternalLogic { cell: k, detail };

    let mut stats = CellStats::default();
    let mut ray_cache: HashMap<(i64, i64), Endpoint> = HashMap::new();
    let mut pool = VertexPool::new();

    let (_, faces) = initial_simplex();
    let mut stack: Vec<(Subface, u8)> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (*f, i as u8))
        .collect();

    while let Some((face, cone)) = stack.pop() {
        stats.subfaces += 1;
        stats.cone_subfaces[cone as usize] += 1;
        if stats.subfaces as usize > guard {
            return Err(internal(format!(
                "subface worklist exceeded {guard} entries (tolerance bug?)"
            )));
        }

        let endpoint_for = |theta: UnitVec2,
                                cache: &mut HashMap<(i64, i64), Endpoint>,
                                stats: &mut CellStats,
                                scratch: &mut RayScratch|
         -> Result<Endpoint, BuildError> {
            if let Some(ep) = cache.get(&theta.quantized()) {
                return Ok(ep.clone());
            }
            let (ep, comparisons) = shoot_ray(k, theta, sites, world, grid, tol, scratch)?;
            stats.rays += 1;
            stats.r_k = stats.r_k.max(comparisons);
            cache.insert(theta.quantized(), ep.clone());
            Ok(ep)
        };

        let e1 = endpoint_for(face.theta1, &mut ray_cache, &mut stats, scratch)?;
        let e2 = endpoint_for(face.theta2, &mut ray_cache, &mut stats, scratch)?;
        let (t1, t2) = (e1.point - p, e2.point - p);
        let (l1, l2) = (&e1.primary_line, &e2.primary_line);

        let split = |theta3: UnitVec2,
                         stack: &mut Vec<(Subface, u8)>,
                         cache: &mut HashMap<(i64, i64), Endpoint>,
                         stats: &mut CellStats,
                         scratch: &mut RayScratch|
         -> Result<(), BuildError> {
            #[cfg(debug_assertions)]
            {
                // Intermediate rays must land on a fresh facet; skip the
                // check when theta3 collapses onto a parent direction.
                let q3 = theta3.quantized();
                if q3 != face.theta1.quantized() && q3 != face.theta2.quantized() {
                    let e3 = endpoint_for(theta3, cache, stats, scratch)?;
                    debug_assert!(
                        e3.primary_line.source != l1.source
                            && e3.primary_line.source != l2.source,
                        "cell {k}: intermediate ray re-hit a parent facet"
                    );
                }
            }
            #[cfg(not(debug_assertions))]
            let _ = (&cache, &stats, &scratch);
            stack.push((
                Subface {
                    theta1: face.theta1,
                    theta2: theta3,
                },
                cone,
            ));
            stack.push((
                Subface {
                    theta1: face.theta2,
                    theta2: theta3,
                },
                cone,
            ));
            Ok(())
        };

        match solve_cone_system(p, t1, t2, l1, l2, tol)? {
            ConeSolution::SameLine => {}
            ConeSolution::ParallelLines { direction } => {
                let (inside, _) = direction_in_cone(face.theta1, face.theta2, direction, tol)
                    .map_err(BuildError::Geometry)?;
                let theta3 = if inside { direction } else { direction.neg() };
                split(theta3, &mut stack, &mut ray_cache, &mut stats, scratch)?;
            }
            ConeSolution::Unique { lambda, point: u } => {
                if lambda.0 >= -tol && lambda.1 >= -tol {
                    if point_in_cell(u, k, sites, world, grid, tol) {
                        debug_assert!({
                            let s1 = 1.0_f64.max(l1.offset.abs());
                            let s2 = 1.0_f64.max(l2.offset.abs());
                            l1.signed_dist(u).abs() <= 1e-9 * s1.max(u.dist(p))
                                && l2.signed_dist(u).abs() <= 1e-9 * s2.max(u.dist(p))
                        });
                        let merge_eps = tol * 1.0_f64.max(u.dist(p));
                        pool.insert(u, l1.source, l2.source, merge_eps);
                    } else {
                        let theta3 = (u - p)
                            .normalize()
                            .map_err(|_| internal("vertex candidate coincides with site".into()))?;
                        split(theta3, &mut stack, &mut ray_cache, &mut stats, scratch)?;
                    }
                } else {
                    let theta3 = (p - u)
                        .normalize()
                        .map_err(|_| internal("vertex candidate coincides with site".into()))?;
                    split(theta3, &mut stack, &mut ray_cache, &mut stats, scratch)?;
                }
            }
        }
    }

    let vertices = pool.records;
    let ccw = sort_vertices_ccw(&vertices, p, k)?;
    let cell = Cell {
        site: k,
        vertices,
        ccw,
    };
    stats.e_k = cell.edge_set().len() as u32;
    Ok((cell, stats))
}
