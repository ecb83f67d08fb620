//! Combinatorial 2D Euclidean Voronoi diagrams inside a convex polygonal
//! world, built one cell at a time by cone-refinement ray shooting, with
//! Delaunay graph extraction and a naive half-plane-intersection oracle
//! for correctness checking.

pub mod cell;
pub mod delaunay;
pub mod diagram;
pub mod endpoint;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod oracle;
pub mod sites;
pub mod world;

pub use cell::{build_cell, initial_simplex, point_in_cell, Cell, CellStats, VertexRecord};
pub use delaunay::{delaunay_graph, DelaunayGraph};
pub use diagram::{build_diagram, BuildConfig, Diagram, DiagramStats};
pub use endpoint::{nearest_conflict, shoot_ray, Endpoint, RayScratch};
pub use error::{BuildError, GeometryError, ValidationIssue, ValidationReport, WorldError};
pub use geometry::{Line, LineSource, Point2, UnitVec2, Vec2, DEFAULT_TOL};
pub use grid::BucketGrid;
pub use oracle::{compare, naive_cell, MatchReport, OracleCell, MATCH_TOL};
pub use sites::uniform_in_world;
pub use world::World;
