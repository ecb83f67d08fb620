//! Delaunay graph extraction: two sites are adjacent when a bisector edge
//! between them appears in either cell's edge set (union symmetrization).
//! Everything is restricted to the world polygon.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;
use crate::geometry::LineSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "GraphRepr", into = "GraphRepr")]
pub struct DelaunayGraph {
    pub n: usize,
    pub adjacency: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    edges: Vec<(usize, usize)>,
}

impl From<DelaunayGraph> for GraphRepr {
    fn from(g: DelaunayGraph) -> Self {
        GraphRepr { edges: g.edges() }
    }
}

impl From<GraphRepr> for DelaunayGraph {
    fn from(r: GraphRepr) -> Self {
        let n = r
            .edges
            .iter()
            .map(|&(a, b)| a.max(b) + 1)
            .max()
            .unwrap_or(0);
        let mut g = DelaunayGraph {
            n,
            adjacency: vec![BTreeSet::new(); n],
        };
        for (a, b) in r.edges {
            g.adjacency[a].insert(b);
            g.adjacency[b].insert(a);
        }
        g
    }
}

impl DelaunayGraph {
    /// Edge list with `k < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, adj) in self.adjacency.iter().enumerate() {
            for &j in adj.iter() {
                if k < j {
                    out.push((k, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }
}

/// Reads the graph off the stored cells.
pub fn delaunay_graph(diagram: &Diagram) -> DelaunayGraph {
    let n = diagram.cells.len();
    let mut adjacency = vec![BTreeSet::new(); n];
    for cell in &diagram.cells {
        for src in cell.edge_set() {
            if let LineSource::Bisector(j) = src {
                if j != cell.site {
                    adjacency[cell.site].insert(j);
                    adjacency[j].insert(cell.site);
                }
            }
        }
    }
    DelaunayGraph { n, adjacency }
}
