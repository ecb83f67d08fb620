//! Exact endpoint computation along a ray: walk the ray inward from the
//! world boundary, replacing the candidate point by its intersection with
//! the bisector of any strictly closer site, until the point lies in the
//! cell. Ties at the final point form the equidistant-site list, from which
//! a facet-carrying primary line is selected.

use crate::error::BuildError;
use crate::geometry::{bisector, ray_line_intersection, Line, LineSource, Point2, UnitVec2};
use crate::grid::BucketGrid;
use crate::world::World;

/// The farthest point of a cell along one ray.
#[derive(Debug, Clone)]
pub struct Endpoint {
    /// Distance from the site to the endpoint.
    pub t: f64,
    /// `p + t * theta`.
    pub point: Point2,
    /// Line through the endpoint guaranteed to carry a cell edge.
    pub primary_line: Line,
    /// Sites exactly as close to the endpoint as the cell's own site.
    pub equidist_sites: Vec<usize>,
}

/// Per-worker scratch for the once-per-ray site clearing. Generation
/// stamps make reset O(1).
#[derive(Debug)]
pub struct RayScratch {
    stamp: Vec<u32>,
    generation: u32,
}

impl RayScratch {
    pub fn new(n_sites: usize) -> Self {
        RayScratch {
            stamp: vec![0; n_sites],
            generation: 0,
        }
    }

    fn begin_ray(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
    }

    fn is_cleared(&self, j: usize) -> bool {
        self.stamp[j] == self.generation
    }

    fn clear(&mut self, j: usize) {
        self.stamp[j] = self.generation;
    }
}

fn dist_scale(d: f64) -> f64 {
    1.0_f64.max(d)
}

/// Some site strictly closer to `y` than site `k` is, or `None` when `y`
/// is in cell `k`. Grid rings of radius `d(y, p_k)` prune the scan.
pub fn nearest_conflict(
    y: Point2,
    k: usize,
    sites: &[Point2],
    grid: &BucketGrid,
    tol: f64,
) -> Option<usize> {
    let dyp = y.dist(sites[k]);
    let cutoff = dyp - tol * dist_scale(dyp);
    for j in grid.sites_within(y, dyp) {
        let j = j as usize;
        if j == k {
            continue;
        }
        if y.dist(sites[j]) < cutoff {
            return Some(j);
        }
    }
    None
}

/// Computes the endpoint of the ray from site `k` in direction `theta`,
/// returning it together with the number of distance comparisons spent.
pub fn shoot_ray(
    k: usize,
    theta: UnitVec2,
    sites: &[Point2],
    world: &World,
    grid: &BucketGrid,
    tol: f64,
    scratch: &mut RayScratch,
) -> Result<(Endpoint, u32), BuildError> {
    let p = sites[k];
    let n = sites.len();
    let internal = |detail: String| BuildError::InternalLogic { cell: k, detail };

    let (mut t, mut y, boundary_line) = world.ray_exit(p, theta, tol)?;
    let mut current_line = boundary_line;
    let mut comparisons: u32 = 0;
    let mut replacements: usize = 0;

    scratch.begin_ray();
    scratch.clear(k);

    loop {
        let dyp = y.dist(p);
        let cutoff = dyp - tol * dist_scale(dyp);
        let mut conflict = None;
        for j in grid.sites_within(y, dyp) {
            let j = j as usize;
            if scratch.is_cleared(j) {
                continue;
            }
            // Once a site has been compared it never needs another test on
            // this ray: later candidates are strictly closer to p.
            scratch.clear(j);
            comparisons += 1;
            if y.dist(sites[j]) < cutoff {
                conflict = Some(j);
                break;
            }
        }
        let Some(a) = conflict else { break };
        replacements += 1;
        if replacements > n {
            return Err(internal(format!(
                "more than {n} bisector replacements on one ray"
            )));
        }
        let bl = bisector(p, sites[a], a).map_err(BuildError::Geometry)?;
        let (t_new, y_new) = ray_line_intersection(p, theta, &bl)
            .ok_or_else(|| internal("ray misses conflicting bisector".into()))?;
        debug_assert!(t_new <= t + tol * dist_scale(t), "ray progress must shrink t");
        t = t_new;
        y = y_new;
        current_line = bl;
    }

    // Equidistant sites at the final point (Remark 2's EquiDistList).
    let dyp = y.dist(p);
    let eq_tol = tol * dist_scale(dyp);
    let mut equidist: Vec<usize> = grid
        .sites_within(y, dyp + eq_tol)
        .map(|j| j as usize)
        .filter(|&j| j != k && (y.dist(sites[j]) - dyp).abs() <= eq_tol)
        .collect();
    equidist.sort_unstable();

    // A facet-carrying line: among equidistant sites the one nearest to p
    // (equivalently, smallest angle at y), tie broken by lower index.
    let primary_line = if equidist.is_empty() {
        current_line
    } else {
        let &best = equidist
            .iter()
            .min_by(|&&a, &&b| sites[a].dist(p).total_cmp(&sites[b].dist(p)))
            .expect("nonempty equidist list");
        if let LineSource::Bisector(j) = current_line.source {
            if j == best {
                current_line
            } else {
                bisector(p, sites[best], best).map_err(BuildError::Geometry)?
            }
        } else {
            bisector(p, sites[best], best).map_err(BuildError::Geometry)?
        }
    };

    Ok((
        Endpoint {
            t,
            point: y,
            primary_line,
            equidist_sites: equidist,
        },
        comparisons,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_TOL;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(x: f64, y: f64) -> UnitVec2 {
        UnitVec2::new(x, y).unwrap()
    }

    fn setup(sites: Vec<Point2>, min: f64, max: f64) -> (Vec<Point2>, World, BucketGrid) {
        let w = World::square(min, max).unwrap();
        let g = BucketGrid::build(&sites, &w);
        (sites, w, g)
    }

    #[test]
    fn two_site_midline() {
        let (sites, w, g) = setup(
            vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)],
            -10.0,
            10.0,
        );
        let mut scratch = RayScratch::new(2);
        let (ep, _) = shoot_ray(0, unit(1.0, 0.0), &sites, &w, &g, DEFAULT_TOL, &mut scratch)
            .unwrap();
        assert!((ep.t - 2.0).abs() < 1e-9);
        assert!(ep.point.dist(Point2::new(2.0, 0.0)) < 1e-9);
        assert_eq!(ep.primary_line.source, LineSource::Bisector(1));
        assert_eq!(ep.equidist_sites, vec![1]);
    }

    #[test]
    fn boundary_hit() {
        let (sites, w, g) = setup(
            vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)],
            -10.0,
            10.0,
        );
        let mut scratch = RayScratch::new(2);
        let (ep, _) = shoot_ray(0, unit(-1.0, 0.0), &sites, &w, &g, DEFAULT_TOL, &mut scratch)
            .unwrap();
        assert!((ep.t - 10.0).abs() < 1e-9);
        assert!(ep.point.dist(Point2::new(-10.0, 0.0)) < 1e-9);
        assert!(matches!(ep.primary_line.source, LineSource::Boundary(_)));
        assert!(ep.equidist_sites.is_empty());
    }

    #[test]
    fn cocircular_square_circumcenter() {
        let (sites, w, g) = setup(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(0.0, 2.0),
                Point2::new(2.0, 2.0),
            ],
            -10.0,
            10.0,
        );
        let mut scratch = RayScratch::new(4);
        let d = std::f64::consts::FRAC_1_SQRT_2;
        let (ep, _) =
            shoot_ray(0, unit(d, d), &sites, &w, &g, DEFAULT_TOL, &mut scratch).unwrap();
        assert!(ep.point.dist(Point2::new(1.0, 1.0)) < 1e-9);
        assert_eq!(ep.equidist_sites, vec![1, 2, 3]);
        // circumcenter is equidistant to all four sites
        for &j in &ep.equidist_sites {
            assert!((ep.point.dist(sites[j]) - ep.t).abs() < 1e-9);
        }
        // tie between sites 1 and 2 (both at distance 2 from p): lower index
        assert_eq!(ep.primary_line.source, LineSource::Bisector(1));
    }

    #[test]
    fn nearest_conflict_examples() {
        let (sites, _w, g) = setup(
            vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)],
            -10.0,
            10.0,
        );
        assert_eq!(
            nearest_conflict(Point2::new(3.0, 0.0), 0, &sites, &g, DEFAULT_TOL),
            Some(1)
        );
        assert_eq!(
            nearest_conflict(Point2::new(1.0, 0.0), 0, &sites, &g, DEFAULT_TOL),
            None
        );
    }

    #[test]
    fn nearest_conflict_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sites: Vec<Point2> = (0..50)
            .map(|_| Point2::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)))
            .collect();
        let w = World::square(-10.0, 10.0).unwrap();
        let g = BucketGrid::build(&sites, &w);
        for _ in 0..300 {
            let y = Point2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let k = rng.gen_range(0..sites.len());
            let got = nearest_conflict(y, k, &sites, &g, DEFAULT_TOL);
            let dyp = y.dist(sites[k]);
            let brute = sites.iter().enumerate().any(|(j, s)| {
                j != k && y.dist(*s) < dyp - DEFAULT_TOL * dist_scale(dyp)
            });
            assert_eq!(got.is_some(), brute, "y={y:?} k={k}");
        }
    }

    #[test]
    fn endpoint_is_in_cell_and_on_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sites: Vec<Point2> = (0..40)
            .map(|_| Point2::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)))
            .collect();
        let w = World::square(-10.0, 10.0).unwrap();
        let g = BucketGrid::build(&sites, &w);
        let mut scratch = RayScratch::new(sites.len());
        for _ in 0..200 {
            let k = rng.gen_range(0..sites.len());
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let theta = unit(ang.cos(), ang.sin());
            let (ep, comparisons) =
                shoot_ray(k, theta, &sites, &w, &g, DEFAULT_TOL, &mut scratch).unwrap();
            assert!(comparisons as usize <= sites.len());
            // in cell k within tol
            let dyp = ep.point.dist(sites[k]);
            for (j, s) in sites.iter().enumerate() {
                if j != k {
                    assert!(ep.point.dist(*s) >= dyp - 1e-7);
                }
            }
            // on its primary line
            let scale = 1.0_f64.max(ep.primary_line.offset.abs());
            assert!(ep.primary_line.signed_dist(ep.point).abs() <= 1e-7 * scale);
            // bisector primary implies membership in the equidist list
            if let LineSource::Bisector(j) = ep.primary_line.source {
                assert!(ep.equidist_sites.contains(&j));
            }
        }
    }

    #[test]
    fn grid_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sites: Vec<Point2> = (0..60)
            .map(|_| Point2::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)))
            .collect();
        let w = World::square(-10.0, 10.0).unwrap();
        let g = BucketGrid::build(&sites, &w);
        let brute = BucketGrid::brute_force(&sites, &w);
        let mut s1 = RayScratch::new(sites.len());
        let mut s2 = RayScratch::new(sites.len());
        for _ in 0..200 {
            let k = rng.gen_range(0..sites.len());
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let theta = unit(ang.cos(), ang.sin());
            let (a, _) = shoot_ray(k, theta, &sites, &w, &g, DEFAULT_TOL, &mut s1).unwrap();
            let (b, _) = shoot_ray(k, theta, &sites, &w, &brute, DEFAULT_TOL, &mut s2).unwrap();
            assert!(a.point.dist(b.point) <= 1e-9 * dist_scale(a.t));
            assert!((a.t - b.t).abs() <= 1e-9 * dist_scale(a.t));
            assert_eq!(a.primary_line.source, b.primary_line.source);
            assert_eq!(a.equidist_sites, b.equidist_sites);
        }
    }

    #[test]
    fn non_interior_site_rejected() {
        let sites = vec![Point2::new(10.0, 5.0)];
        let w = World::square(0.0, 10.0).unwrap();
        let g = BucketGrid::build(&sites, &w);
        let mut scratch = RayScratch::new(1);
        assert!(shoot_ray(0, unit(0.0, 1.0), &sites, &w, &g, DEFAULT_TOL, &mut scratch).is_err());
    }
}
