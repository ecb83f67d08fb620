use thiserror::Error;

use crate::geometry::Point2;

/// Errors from the low-level geometric primitives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("degenerate cone: generators are linearly dependent")]
    DegenerateCone,
}

/// A single problem found while validating a world/site configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    NonConvexWorld,
    DuplicateSites(usize, usize),
    SiteNotInterior(usize),
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::NonConvexWorld => write!(f, "world polygon is not convex"),
            ValidationIssue::DuplicateSites(i, j) => {
                write!(f, "sites {i} and {j} coincide")
            }
            ValidationIssue::SiteNotInterior(k) => {
                write!(f, "site {k} is on or outside the world boundary")
            }
        }
    }
}

/// Collected validation failures; the build refuses to proceed on any.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("validation failed: {}", .issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

/// Errors raised while constructing a world polygon.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("world polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("world polygon is not convex and counterclockwise")]
    NotConvexCcw,
    #[error("world polygon is degenerate (zero area or repeated vertices)")]
    Degenerate,
    #[error("point ({} , {}) is not strictly interior to the world", .0.x, .0.y)]
    NotInterior(Point2),
}

/// Errors from building a single cell or the whole diagram.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error(transparent)]
    Validation(#[from] ValidationReport),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("internal logic error in cell {cell}: {detail}")]
    InternalLogic { cell: usize, detail: String },
    #[error("cell {cell} is inconsistent: {detail}")]
    InconsistentCell { cell: usize, detail: String },
}
