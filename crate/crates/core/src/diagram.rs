//! Whole-diagram orchestration: cells are assigned to workers in static
//! blocks of the site index range and built independently, so the result
//! is identical for any worker count.

use serde::{Deserialize, Serialize};

use crate::cell::{build_cell, Cell, CellStats};
use crate::delaunay::DelaunayGraph;
use crate::endpoint::RayScratch;
use crate::error::BuildError;
use crate::geometry::Point2;
use crate::grid::BucketGrid;
use crate::world::World;

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub workers: usize,
    pub use_grid: bool,
    pub tol: f64,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            workers: 1,
            use_grid: true,
            tol: crate::geometry::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagramStats {
    pub per_cell: Vec<CellStats>,
}

impl DiagramStats {
    pub fn total_rays(&self) -> u64 {
        self.per_cell.iter().map(|c| c.rays as u64).sum()
    }

    pub fn max_r_k(&self) -> u32 {
        self.per_cell.iter().map(|c| c.r_k).max().unwrap_or(0)
    }

    pub fn mean_e_k(&self) -> f64 {
        if self.per_cell.is_empty() {
            return 0.0;
        }
        self.per_cell.iter().map(|c| c.e_k as f64).sum::<f64>() / self.per_cell.len() as f64
    }
}

/// The complete diagram: one cell per site, indexed by site.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagram {
    pub world: World,
    pub sites: Vec<Point2>,
    pub cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delaunay: Option<DelaunayGraph>,
    pub stats: DiagramStats,
}

/// Builds every cell. Work is split into contiguous index blocks, one per
/// worker; each worker owns its block's outputs, so no locks are needed.
pub fn build_diagram(
    sites: Vec<Point2>,
    world: World,
    config: &BuildConfig,
) -> Result<Diagram, BuildError> {
    world.validate(&sites, config.tol)?;
    let n = sites.len();
    let grid = if config.use_grid {
        BucketGrid::build(&sites, &world)
    } else {
        BucketGrid::brute_force(&sites, &world)
    };

    let workers = config.workers.max(1).min(n);
    let mut results: Vec<Option<(Cell, CellStats)>> = Vec::new();
    results.resize_with(n, || None);

    if workers == 1 {
        let mut scratch = RayScratch::new(n);
        for (k, slot) in results.iter_mut().enumerate() {
            *slot = Some(build_cell(k, &sites, &world, &grid, config.tol, &mut scratch)?);
        }
    } else {
        let chunk = n.div_ceil(workers);
        let mut blocks: Vec<&mut [Option<(Cell, CellStats)>]> = Vec::with_capacity(workers);
        let mut rest = results.as_mut_slice();
        while !rest.is_empty() {
            let take = chunk.min(rest.len());
            let (head, tail) = rest.split_at_mut(take);
            blocks.push(head);
            rest = tail;
        }
        let outcomes: Vec<Result<(), BuildError>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (b, block) in blocks.into_iter().enumerate() {
                let sites = &sites;
                let world = &world;
                let grid = &grid;
                let tol = config.tol;
                handles.push(scope.spawn(move || {
                    let mut scratch = RayScratch::new(n);
                    let start = b * chunk;
                    for (off, slot) in block.iter_mut().enumerate() {
                        *slot = Some(build_cell(start + off, sites, world, grid, tol, &mut scratch)?);
                    }
                    Ok(())
                }));
            }
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for outcome in outcomes {
            outcome?;
        }
    }

    let mut cells = Vec::with_capacity(n);
    let mut per_cell = Vec::with_capacity(n);
    for slot in results {
        let (cell, stats) = slot.expect("every cell assigned to a worker");
        cells.push(cell);
        per_cell.push(stats);
    }
    Ok(Diagram {
        world,
        sites,
        cells,
        delaunay: None,
        stats: DiagramStats { per_cell },
    })
}
